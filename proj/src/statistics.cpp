#include <psytest/statistics.hpp>
#include <psytest/csv.hpp>
#include <psytest/error.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>

namespace psytest {

namespace {

void check_record(const SessionRecord &rec, const TestDefinition &test)
{
    const Session &s = rec.session;
    if (s.test_id != test.test_id)
        throw Error(ErrorCode::test_mismatch,
                    fmt::format("session '{}' belongs to test '{}', not '{}'", s.session_id.value, s.test_id,
                                test.test_id));
    if (s.state != SessionState::completed)
        throw Error(ErrorCode::session_incomplete, fmt::format("session '{}' is not completed", s.session_id.value));

    // Answers must still line up with the test's items in presentation order.
    const auto ordered = test.items_in_order();
    bool aligned = s.answers.size() == ordered.size();
    for (std::size_t i = 0; aligned && i < ordered.size(); ++i)
        aligned = s.answers[i].item_id == ordered[i]->id && s.answers[i].answer_index < test.answer_set.size();
    if (!aligned)
        throw Error(ErrorCode::stale_norms,
                    fmt::format("session '{}' answers do not match the items of test '{}'", s.session_id.value,
                                test.test_id));

    const SessionResult fresh = score_session(s, test);
    if (fresh.categories != rec.result.categories)
        throw Error(ErrorCode::stale_norms,
                    fmt::format("stored results of session '{}' differ from a rescoring against the current test",
                                s.session_id.value));
}

std::string format_double(double v)
{
    return fmt::format("{}", v);
}

} // namespace

std::optional<StatsReport> aggregate(std::span<const SessionRecord> records, const TestDefinition &test)
{
    if (records.empty())
        return std::nullopt;
    for (const auto &rec : records)
        check_record(rec, test);

    StatsReport report;
    report.sessions = records.size();
    const std::size_t n = records.size();

    for (std::size_t ci = 0; ci < test.categories.size(); ++ci) {
        const Category &category = test.categories[ci];
        CategoryStats stats;
        stats.category_id = category.id;
        stats.n = n;
        stats.band_histogram.assign(test.bands_for(category.id).size(), 0);

        Decimal sum;
        std::vector<Decimal> scores;
        scores.reserve(n);
        for (const auto &rec : records) {
            const CategoryResult &r = rec.result.categories[ci];
            sum += r.raw_score;
            scores.push_back(r.raw_score);
            ++stats.band_histogram.at(static_cast<std::size_t>(r.band_index - 1));
        }
        // Sorted so the floating-point pass below does not depend on session order.
        std::sort(scores.begin(), scores.end());
        stats.min = scores.front();
        stats.max = scores.back();
        // The sum is exact, so the mean carries a single rounding.
        const long double mean = static_cast<long double>(sum.units()) / Decimal::unit / n;
        long double squares = 0;
        for (const Decimal &x : scores) {
            const long double d = static_cast<long double>(x.units()) / Decimal::unit - mean;
            squares += d * d;
        }
        stats.mean = static_cast<double>(mean);
        stats.std_dev = static_cast<double>(std::sqrt(squares / n));
        report.categories.push_back(std::move(stats));
    }

    for (const Item *item : test.items_in_order())
        report.items.push_back({item->id, item->ordinal, std::vector<std::size_t>(test.answer_set.size(), 0)});
    for (const auto &rec : records)
        for (std::size_t i = 0; i < rec.session.answers.size(); ++i)
            ++report.items[i].answer_frequencies[rec.session.answers[i].answer_index];
    return report;
}

std::string export_summary_csv(const std::optional<StatsReport> &report, const TestDefinition &test)
{
    std::string out;
    const std::vector<std::string> header{"category_id", "category", "n",   "mean", "std_dev_population",
                                          "min",         "max",      "band_counts"};
    csv::append_row(out, header);
    if (!report)
        return out;
    for (const auto &stats : report->categories) {
        const Category *category = test.find_category(stats.category_id);
        const std::vector<std::string> row{stats.category_id.value,
                                           category ? category->name : std::string{},
                                           std::to_string(stats.n),
                                           format_double(stats.mean),
                                           format_double(stats.std_dev),
                                           stats.min.to_string(),
                                           stats.max.to_string(),
                                           fmt::format("{}", fmt::join(stats.band_histogram, ";"))};
        csv::append_row(out, row);
    }
    return out;
}

std::string export_matrix_csv(std::span<const SessionRecord> records, const TestDefinition &test)
{
    const auto ordered = test.items_in_order();

    std::vector<std::string> header{"session_id"};
    for (const auto &field : test.demographics)
        header.push_back(field.name);
    for (const Item *item : ordered)
        header.push_back(std::to_string(item->ordinal));
    for (const auto &category : test.categories)
        header.push_back(category.name);
    for (const auto &category : test.categories)
        header.push_back(category.name + " band");

    std::string out;
    csv::append_row(out, header);
    for (const auto &rec : records) {
        const Session &s = rec.session;
        std::vector<std::string> row{s.session_id.value};
        for (const auto &field : test.demographics) {
            auto it = s.demographics.find(field.name);
            if (it == s.demographics.end())
                row.emplace_back();
            else
                row.push_back(std::visit(
                    [](const auto &v) {
                        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, std::string>)
                            return v;
                        else
                            return std::to_string(v);
                    },
                    it->second));
        }
        std::map<ItemId, std::size_t> answers;
        for (const auto &a : s.answers)
            answers.emplace(a.item_id, a.answer_index);
        for (const Item *item : ordered) {
            auto it = answers.find(item->id);
            row.push_back(it == answers.end() ? std::string{} : std::to_string(it->second));
        }
        auto result_for = [&](const CategoryId &id) -> const CategoryResult * {
            for (const auto &r : rec.result.categories)
                if (r.category_id == id)
                    return &r;
            return nullptr;
        };
        for (const auto &category : test.categories) {
            const auto *r = result_for(category.id);
            row.push_back(r ? r->raw_score.to_string() : std::string{});
        }
        for (const auto &category : test.categories) {
            const auto *r = result_for(category.id);
            row.push_back(r ? std::to_string(r->band_index) : std::string{});
        }
        csv::append_row(out, row);
    }
    return out;
}

} // namespace psytest
