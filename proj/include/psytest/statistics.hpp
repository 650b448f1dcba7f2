#pragma once

#include <psytest/model.hpp>
#include <psytest/session_log.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace psytest {

/// Descriptive statistics of one category's raw scores over a set of sessions.
/// `std_dev` is the population standard deviation (divides by n).
struct CategoryStats {
    CategoryId category_id;
    std::size_t n = 0;
    double mean = 0;
    double std_dev = 0;
    Decimal min;
    Decimal max;
    std::vector<std::size_t> band_histogram; ///< entry i counts band i + 1
};

struct ItemStats {
    ItemId item_id;
    int ordinal = 0;
    std::vector<std::size_t> answer_frequencies; ///< entry i counts answer option i
};

struct StatsReport {
    std::size_t sessions = 0;
    std::vector<CategoryStats> categories; ///< declaration order
    std::vector<ItemStats> items;          ///< ordinal order
};

/// Aggregates completed sessions of `test`. Returns nullopt for an empty
/// session list.
///
/// Each stored result is checked against a fresh scoring of its answers;
/// any difference (the test was edited after the sessions were collected)
/// throws `STALE_NORMS`. Sessions of another test throw `TEST_MISMATCH`.
std::optional<StatsReport> aggregate(std::span<const SessionRecord> records, const TestDefinition &test);

/// One row per category: n, mean, population std dev, min, max and the band
/// counts joined with `;`. An empty report yields the header only.
std::string export_summary_csv(const std::optional<StatsReport> &report, const TestDefinition &test);

/// The raw session matrix for external statistics packages: session id,
/// demographic fields in schema order, one column per item (header = ordinal,
/// value = answer index), then per category its raw score and band index.
std::string export_matrix_csv(std::span<const SessionRecord> records, const TestDefinition &test);

} // namespace psytest
