#include <psytest/validate.hpp>
#include <psytest/scoring.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <set>

namespace psytest {

std::string_view to_string(ViolationCode code) noexcept
{
    switch (code) {
    case ViolationCode::test_id_empty: return "TEST_ID_EMPTY";
    case ViolationCode::answer_set_too_small: return "ANSWER_SET_TOO_SMALL";
    case ViolationCode::answer_label_empty: return "ANSWER_LABEL_EMPTY";
    case ViolationCode::answer_label_duplicate: return "ANSWER_LABEL_DUPLICATE";
    case ViolationCode::no_items: return "NO_ITEMS";
    case ViolationCode::item_id_empty: return "ITEM_ID_EMPTY";
    case ViolationCode::item_id_duplicate: return "ITEM_ID_DUPLICATE";
    case ViolationCode::item_text_empty: return "ITEM_TEXT_EMPTY";
    case ViolationCode::ordinal_duplicate: return "ORDINAL_DUPLICATE";
    case ViolationCode::ordinal_gap: return "ORDINAL_GAP";
    case ViolationCode::category_id_duplicate: return "CATEGORY_ID_DUPLICATE";
    case ViolationCode::category_name_empty: return "CATEGORY_NAME_EMPTY";
    case ViolationCode::category_name_duplicate: return "CATEGORY_NAME_DUPLICATE";
    case ViolationCode::binding_unknown_item: return "BINDING_UNKNOWN_ITEM";
    case ViolationCode::binding_unknown_category: return "BINDING_UNKNOWN_CATEGORY";
    case ViolationCode::binding_duplicate: return "BINDING_DUPLICATE";
    case ViolationCode::tuple_length_mismatch: return "TUPLE_LENGTH_MISMATCH";
    case ViolationCode::category_unbound: return "CATEGORY_UNBOUND";
    case ViolationCode::degenerate_scale: return "DEGENERATE_SCALE";
    case ViolationCode::band_unknown_category: return "BAND_UNKNOWN_CATEGORY";
    case ViolationCode::bands_missing: return "BANDS_MISSING";
    case ViolationCode::band_index_invalid: return "BAND_INDEX_INVALID";
    case ViolationCode::band_empty_interval: return "BAND_EMPTY_INTERVAL";
    case ViolationCode::band_gap: return "BAND_GAP";
    case ViolationCode::band_overlap: return "BAND_OVERLAP";
    case ViolationCode::band_bounds_mismatch: return "BAND_BOUNDS_MISMATCH";
    case ViolationCode::band_text_empty: return "BAND_TEXT_EMPTY";
    case ViolationCode::demographic_name_empty: return "DEMOGRAPHIC_NAME_EMPTY";
    case ViolationCode::demographic_name_duplicate: return "DEMOGRAPHIC_NAME_DUPLICATE";
    case ViolationCode::demographic_choices_invalid: return "DEMOGRAPHIC_CHOICES_INVALID";
    case ViolationCode::inert_item: return "INERT_ITEM";
    }
    return "UNKNOWN";
}

namespace {

class Collector {
public:
    template <typename... Args>
    void error(ViolationCode code, fmt::format_string<Args...> f, Args &&...args)
    {
        out.push_back({code, Severity::error, fmt::format(f, std::forward<Args>(args)...)});
    }

    template <typename... Args>
    void warning(ViolationCode code, fmt::format_string<Args...> f, Args &&...args)
    {
        out.push_back({code, Severity::warning, fmt::format(f, std::forward<Args>(args)...)});
    }

    std::vector<Violation> out;
};

bool is_blank(std::string_view s)
{
    return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

void check_answer_set(const TestDefinition &test, Collector &v)
{
    const auto &options = test.answer_set.options;
    if (options.size() < 2)
        v.error(ViolationCode::answer_set_too_small, "answer set has {} option(s), at least 2 required",
                options.size());
    std::set<std::string_view> seen;
    for (const auto &label : options) {
        if (is_blank(label))
            v.error(ViolationCode::answer_label_empty, "answer label is empty");
        else if (!seen.insert(label).second)
            v.error(ViolationCode::answer_label_duplicate, "answer label '{}' appears more than once", label);
    }
}

void check_items(const TestDefinition &test, Collector &v)
{
    const int m = static_cast<int>(test.items.size());
    if (m == 0)
        v.error(ViolationCode::no_items, "test has no items");

    std::set<std::string_view> ids;
    std::map<int, int> ordinal_count;
    for (const auto &item : test.items) {
        if (item.id.value.empty())
            v.error(ViolationCode::item_id_empty, "item at ordinal {} has an empty id", item.ordinal);
        else if (!ids.insert(item.id.value).second)
            v.error(ViolationCode::item_id_duplicate, "item id '{}' is used more than once", item.id.value);
        if (is_blank(item.text))
            v.error(ViolationCode::item_text_empty, "item '{}' has empty text", item.id.value);
        ++ordinal_count[item.ordinal];
    }
    for (const auto &[ordinal, count] : ordinal_count)
        if (count > 1)
            v.error(ViolationCode::ordinal_duplicate, "ordinal {} is assigned to {} items", ordinal, count);

    std::vector<int> missing;
    for (int k = 1; k <= m; ++k)
        if (!ordinal_count.contains(k))
            missing.push_back(k);
    if (!missing.empty())
        v.error(ViolationCode::ordinal_gap, "ordinals are not a bijection onto 1..{}; missing {}", m,
                fmt::join(missing, ", "));
}

void check_categories(const TestDefinition &test, Collector &v)
{
    std::set<std::string_view> ids, names;
    for (const auto &c : test.categories) {
        if (!ids.insert(c.id.value).second)
            v.error(ViolationCode::category_id_duplicate, "category id '{}' is used more than once", c.id.value);
        if (is_blank(c.name))
            v.error(ViolationCode::category_name_empty, "category '{}' has an empty name", c.id.value);
        else if (!names.insert(c.name).second)
            v.error(ViolationCode::category_name_duplicate, "category name '{}' is used more than once", c.name);
    }
}

void check_bindings(const TestDefinition &test, Collector &v)
{
    std::set<std::pair<std::string_view, std::string_view>> pairs;
    for (const auto &b : test.bindings) {
        if (!test.find_item(b.item_id))
            v.error(ViolationCode::binding_unknown_item, "binding references unknown item '{}'", b.item_id.value);
        if (!test.find_category(b.category_id))
            v.error(ViolationCode::binding_unknown_category, "binding references unknown category '{}'",
                    b.category_id.value);
        if (!pairs.insert({b.category_id.value, b.item_id.value}).second)
            v.error(ViolationCode::binding_duplicate, "item '{}' is bound to category '{}' more than once",
                    b.item_id.value, b.category_id.value);
        if (b.tuple.values.size() != test.answer_set.size())
            v.error(ViolationCode::tuple_length_mismatch,
                    "tuple for ({}, {}) has {} values but the answer set has {} options", b.category_id.value,
                    b.item_id.value, b.tuple.values.size(), test.answer_set.size());
    }
}

void check_category_bands(const TestDefinition &test, const Category &category, Collector &v)
{
    const auto bands = test.bands_for(category.id);
    for (const auto &band : bands)
        if (is_blank(band.interpretation))
            v.error(ViolationCode::band_text_empty, "band {} of '{}' has empty interpretation", band.index,
                    category.name);

    if (test.bindings_for(category.id).empty()) {
        v.error(ViolationCode::category_unbound, "category '{}' has no scale bindings", category.name);
        return;
    }
    // Bounds are meaningless over malformed tuples; those are reported elsewhere.
    for (const ScaleBinding *b : test.bindings_for(category.id))
        if (b->tuple.values.empty())
            return;

    const auto bounds = detail::score_bounds(test, category.id);
    if (bounds.min == bounds.max) {
        v.error(ViolationCode::degenerate_scale, "category '{}' has minimum score equal to maximum score ({})",
                category.name, bounds.min.to_string());
        return;
    }
    if (bands.empty()) {
        v.error(ViolationCode::bands_missing, "category '{}' has no interpretation bands", category.name);
        return;
    }

    bool indices_ok = true;
    for (std::size_t i = 0; i < bands.size(); ++i) {
        if (bands[i].index != static_cast<int>(i) + 1) {
            v.error(ViolationCode::band_index_invalid, "bands of '{}' are not numbered 1..{}", category.name,
                    bands.size());
            indices_ok = false;
            break;
        }
    }
    for (const auto &band : bands)
        if (!(band.lower < band.upper))
            v.error(ViolationCode::band_empty_interval, "band {} of '{}' has lower {} not below upper {}",
                    band.index, category.name, band.lower.to_string(), band.upper.to_string());
    if (!indices_ok)
        return;

    for (std::size_t i = 1; i < bands.size(); ++i) {
        const auto &prev = bands[i - 1];
        const auto &cur = bands[i];
        if (cur.lower > prev.upper)
            v.error(ViolationCode::band_gap, "'{}': scores in ({}, {}] fall between bands {} and {}", category.name,
                    prev.upper.to_string(), cur.lower.to_string(), prev.index, cur.index);
        else if (cur.lower < prev.upper)
            v.error(ViolationCode::band_overlap, "'{}': bands {} and {} overlap", category.name, prev.index,
                    cur.index);
    }
    if (bands.front().lower != bounds.min || bands.back().upper != bounds.max)
        v.error(ViolationCode::band_bounds_mismatch, "'{}': bands cover [{}, {}] but scores range over [{}, {}]",
                category.name, bands.front().lower.to_string(), bands.back().upper.to_string(),
                bounds.min.to_string(), bounds.max.to_string());
}

void check_bands(const TestDefinition &test, Collector &v)
{
    for (const auto &band : test.bands)
        if (!test.find_category(band.category_id))
            v.error(ViolationCode::band_unknown_category, "band references unknown category '{}'",
                    band.category_id.value);
    for (const auto &category : test.categories)
        check_category_bands(test, category, v);
}

void check_demographics(const TestDefinition &test, Collector &v)
{
    std::set<std::string_view> names;
    for (const auto &field : test.demographics) {
        if (is_blank(field.name))
            v.error(ViolationCode::demographic_name_empty, "demographic field has an empty name");
        else if (!names.insert(field.name).second)
            v.error(ViolationCode::demographic_name_duplicate, "demographic field '{}' declared twice", field.name);
        const bool is_choice = field.kind == DemographicKind::choice;
        std::set<std::string_view> choices(field.choices.begin(), field.choices.end());
        if (is_choice && (field.choices.empty() || choices.size() != field.choices.size()))
            v.error(ViolationCode::demographic_choices_invalid,
                    "choice field '{}' needs a non-empty list of distinct choices", field.name);
        if (!is_choice && !field.choices.empty())
            v.error(ViolationCode::demographic_choices_invalid, "{} field '{}' must not list choices",
                    to_string(field.kind), field.name);
    }
}

} // namespace

std::vector<Violation> validate(const TestDefinition &test)
{
    Collector v;
    if (is_blank(test.test_id))
        v.error(ViolationCode::test_id_empty, "test id is empty");
    check_answer_set(test, v);
    check_items(test, v);
    check_categories(test, v);
    check_bindings(test, v);
    check_bands(test, v);
    check_demographics(test, v);
    for (const auto &id : test.inert_items())
        v.warning(ViolationCode::inert_item, "item '{}' is bound to no category and does not affect any score",
                  id.value);
    return std::move(v.out);
}

bool has_errors(std::span<const Violation> violations) noexcept
{
    return std::any_of(violations.begin(), violations.end(),
                       [](const Violation &x) { return x.severity == Severity::error; });
}

std::string describe(std::span<const Violation> violations)
{
    std::string out;
    for (const auto &x : violations)
        out += fmt::format("{} {}: {}\n", x.severity == Severity::error ? "error" : "warning", to_string(x.code),
                           x.message);
    return out;
}

} // namespace psytest
