#include <psytest/generator.hpp>
#include <psytest/error.hpp>
#include <psytest/scoring.hpp>

#include <fmt/format.h>

#include <algorithm>

namespace psytest::generator {

namespace {

bool is_blank(std::string_view s)
{
    return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

void require_text(std::string_view text, std::string_view what)
{
    if (is_blank(text))
        throw Error(ErrorCode::empty_text, fmt::format("{} must not be empty", what));
}

void sort_items(TestDefinition &test)
{
    std::stable_sort(test.items.begin(), test.items.end(),
                     [](const Item &a, const Item &b) { return a.ordinal < b.ordinal; });
}

Item &item_at(TestDefinition &test, int ordinal)
{
    auto it = std::find_if(test.items.begin(), test.items.end(), [&](const Item &i) { return i.ordinal == ordinal; });
    if (it == test.items.end())
        throw Error(ErrorCode::unknown_ordinal, fmt::format("no item with ordinal {}", ordinal));
    return *it;
}

ItemId allocate_item_id(TestDefinition &test)
{
    for (;;) {
        ItemId id{fmt::format("q{}", test.next_item_seq++)};
        if (!test.find_item(id))
            return id;
    }
}

} // namespace

TestDefinition new_test(std::string test_id, std::string title, std::vector<std::string> answer_options,
                        std::string instruction)
{
    require_text(test_id, "test id");
    TestDefinition test;
    test.test_id = std::move(test_id);
    test.title = std::move(title);
    test.instruction = std::move(instruction);
    test.answer_set.options = std::move(answer_options);
    return test;
}

TestDefinition set_instruction(TestDefinition test, std::string instruction)
{
    test.instruction = std::move(instruction);
    return test;
}

TestDefinition set_answer_set(TestDefinition test, std::vector<std::string> options)
{
    if (!test.bindings.empty())
        throw Error(ErrorCode::answer_set_locked, "answer set cannot change once scale bindings exist");
    test.answer_set.options = std::move(options);
    return test;
}

TestDefinition add_category(TestDefinition test, std::string name, std::optional<CategoryId> id)
{
    require_text(name, "category name");
    if (test.find_category_by_name(name))
        throw Error(ErrorCode::duplicate_name, fmt::format("category '{}' already exists", name));
    if (id) {
        require_text(id->value, "category id");
        if (test.find_category(*id))
            throw Error(ErrorCode::duplicate_name, fmt::format("category id '{}' already exists", id->value));
    } else {
        std::size_t n = test.categories.size() + 1;
        do {
            id = CategoryId{fmt::format("c{}", n++)};
        } while (test.find_category(*id));
    }
    test.categories.push_back({std::move(*id), std::move(name)});
    return test;
}

TestDefinition add_demographic_field(TestDefinition test, DemographicField field)
{
    require_text(field.name, "demographic field name");
    for (const auto &f : test.demographics)
        if (f.name == field.name)
            throw Error(ErrorCode::duplicate_name, fmt::format("demographic field '{}' already exists", field.name));
    if ((field.kind == DemographicKind::choice) == field.choices.empty())
        throw Error(ErrorCode::invalid_demographics, fmt::format("field '{}': choices are required exactly for "
                                                                 "choice fields",
                                                                 field.name));
    test.demographics.push_back(std::move(field));
    return test;
}

TestDefinition insert_item(TestDefinition test, int position, std::string text)
{
    const int m = static_cast<int>(test.items.size());
    if (position < 1 || position > m + 1)
        throw Error(ErrorCode::position_out_of_range, fmt::format("position {} outside 1..{}", position, m + 1));
    require_text(text, "item text");
    for (auto &item : test.items)
        if (item.ordinal >= position)
            ++item.ordinal;
    ItemId id = allocate_item_id(test);
    test.items.push_back({std::move(id), position, std::move(text)});
    sort_items(test);
    return test;
}

TestDefinition delete_item(TestDefinition test, int ordinal)
{
    const ItemId id = item_at(test, ordinal).id;
    std::erase_if(test.items, [&](const Item &i) { return i.id == id; });
    std::erase_if(test.bindings, [&](const ScaleBinding &b) { return b.item_id == id; });
    for (auto &item : test.items)
        if (item.ordinal > ordinal)
            --item.ordinal;
    return test;
}

TestDefinition move_item(TestDefinition test, int from, int to)
{
    const int m = static_cast<int>(test.items.size());
    if (to < 1 || to > m)
        throw Error(ErrorCode::position_out_of_range, fmt::format("target ordinal {} outside 1..{}", to, m));
    Item &moved = item_at(test, from);
    const ItemId id = moved.id;
    for (auto &item : test.items) {
        if (item.id == id)
            continue;
        if (from < to && item.ordinal > from && item.ordinal <= to)
            --item.ordinal;
        else if (to < from && item.ordinal >= to && item.ordinal < from)
            ++item.ordinal;
    }
    for (auto &item : test.items)
        if (item.id == id)
            item.ordinal = to;
    sort_items(test);
    return test;
}

TestDefinition bind_scale(TestDefinition test, const CategoryId &c, const ItemId &q, ScoreTuple tuple)
{
    if (!test.find_category(c))
        throw Error(ErrorCode::unknown_category, fmt::format("unknown category '{}'", c.value));
    if (!test.find_item(q))
        throw Error(ErrorCode::unknown_item, fmt::format("unknown item '{}'", q.value));
    if (tuple.values.size() != test.answer_set.size())
        throw Error(ErrorCode::tuple_length_mismatch,
                    fmt::format("tuple has {} values but the answer set has {} options", tuple.values.size(),
                                test.answer_set.size()));
    auto it = std::find_if(test.bindings.begin(), test.bindings.end(),
                           [&](const ScaleBinding &b) { return b.category_id == c && b.item_id == q; });
    if (it != test.bindings.end())
        it->tuple = std::move(tuple);
    else
        test.bindings.push_back({c, q, std::move(tuple)});
    return test;
}

TestDefinition set_bands(TestDefinition test, const CategoryId &c, std::span<const Decimal> boundaries,
                         std::span<const std::string> texts)
{
    const Decimal lowest = compute_min_score(test, c);
    const Decimal highest = compute_max_score(test, c);
    if (boundaries.size() < 2)
        throw Error(ErrorCode::band_bounds_mismatch, "at least two boundaries are required");
    const std::size_t l = boundaries.size() - 1;
    if (texts.size() != l)
        throw Error(ErrorCode::band_text_count,
                    fmt::format("{} boundaries define {} band(s) but {} text(s) were given", boundaries.size(), l,
                                texts.size()));
    for (std::size_t i = 1; i < boundaries.size(); ++i)
        if (!(boundaries[i - 1] < boundaries[i]))
            throw Error(ErrorCode::band_not_monotone,
                        fmt::format("boundaries must be strictly increasing ({} then {})",
                                    boundaries[i - 1].to_string(), boundaries[i].to_string()));
    if (boundaries.front() != lowest || boundaries.back() != highest)
        throw Error(ErrorCode::band_bounds_mismatch,
                    fmt::format("boundaries span [{}, {}] but category '{}' scores range over [{}, {}]",
                                boundaries.front().to_string(), boundaries.back().to_string(), c.value,
                                lowest.to_string(), highest.to_string()));
    for (const auto &text : texts)
        require_text(text, "interpretation text");

    std::erase_if(test.bands, [&](const Band &b) { return b.category_id == c; });
    for (std::size_t i = 0; i < l; ++i)
        test.bands.push_back({c, static_cast<int>(i) + 1, boundaries[i], boundaries[i + 1], texts[i]});
    return test;
}

} // namespace psytest::generator
