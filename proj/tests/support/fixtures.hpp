#pragma once

// Shared fixtures and brute-force oracles for the test suites. The oracles
// here deliberately avoid the library's scoring functions.

#include <psytest/executor.hpp>
#include <psytest/generator.hpp>
#include <psytest/model.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace psytest::testing {

/// Three yes/no items all scoring one point per "Yes" on a single category,
/// with bands [0, 1] and (1, 3].
inline TestDefinition yes_no_test()
{
    using namespace generator;
    TestDefinition t = new_test("yesno", "Yes/No counting test", {"Yes", "No"}, "Answer every statement honestly.");
    t = add_category(std::move(t), "Extraversion");
    t = insert_item(std::move(t), 1, "I enjoy parties.");
    t = insert_item(std::move(t), 2, "I talk to strangers easily.");
    t = insert_item(std::move(t), 3, "I like being the centre of attention.");
    const CategoryId c{"c1"};
    for (const auto &item : std::vector<Item>(t.items))
        t = bind_scale(std::move(t), c, item.id, ScoreTuple{{1, 0}});
    const std::vector<Decimal> bounds{0, 1, 3};
    const std::vector<std::string> texts{"Introverted.", "Extraverted."};
    return set_bands(std::move(t), c, bounds, texts);
}

/// Every answer assignment over `k` options for `m` items, in lexicographic order.
inline std::vector<std::vector<std::size_t>> all_assignments(std::size_t m, std::size_t k)
{
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur(m, 0);
    for (;;) {
        out.push_back(cur);
        std::size_t i = 0;
        while (i < m && ++cur[i] == k)
            cur[i++] = 0;
        if (i == m)
            return out;
    }
}

/// Direct table lookup: Σ tuple[answer] over the category's bindings.
inline Decimal oracle_total(const TestDefinition &test, const CategoryId &c, const AnswerMap &answers)
{
    Decimal total;
    for (const auto &b : test.bindings)
        if (b.category_id == c)
            total += b.tuple.values.at(answers.at(b.item_id));
    return total;
}

struct OracleBounds {
    Decimal min;
    Decimal max;
    std::vector<Decimal> reachable;
};

/// Exhaustive min/max of the category total over every assignment of answers
/// to every item of the test.
inline OracleBounds oracle_bounds(const TestDefinition &test, const CategoryId &c)
{
    const auto ordered = test.items_in_order();
    OracleBounds out;
    bool first = true;
    for (const auto &assignment : all_assignments(ordered.size(), test.answer_set.size())) {
        AnswerMap answers;
        for (std::size_t i = 0; i < ordered.size(); ++i)
            answers[ordered[i]->id] = assignment[i];
        const Decimal total = oracle_total(test, c, answers);
        if (first || total < out.min)
            out.min = total;
        if (first || total > out.max)
            out.max = total;
        first = false;
        out.reachable.push_back(total);
    }
    return out;
}

struct RandomTestOptions {
    int min_items = 2;
    int max_items = 4;
    int min_options = 2;
    int max_options = 3;
    int min_value = -2;
    int max_value = 3;
    int categories = 2;
    /// Also draw values with up to two fractional digits.
    bool fractional = false;
    /// Leave some items unbound.
    bool allow_inert = true;
};

/// A random valid test; every category has a non-degenerate scale and a random band partition.
inline TestDefinition random_test(std::mt19937_64 &rng, const RandomTestOptions &opt = {})
{
    using namespace generator;
    auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto value = [&] {
        if (opt.fractional && uniform(0, 1))
            return Decimal::from_units(static_cast<std::int64_t>(uniform(opt.min_value * 100, opt.max_value * 100)) *
                                       (Decimal::unit / 100));
        return Decimal(uniform(opt.min_value, opt.max_value));
    };

    const int m = uniform(opt.min_items, opt.max_items);
    const int k = uniform(opt.min_options, opt.max_options);
    std::vector<std::string> options;
    for (int i = 0; i < k; ++i)
        options.push_back("option " + std::to_string(i + 1));
    TestDefinition t = new_test("random", "Random test", options);
    for (int i = 1; i <= m; ++i)
        t = insert_item(std::move(t), uniform(1, i), "statement " + std::to_string(i));
    for (int ci = 0; ci < opt.categories; ++ci) {
        t = add_category(std::move(t), "category " + std::to_string(ci + 1));
        const CategoryId c = t.categories.back().id;
        for (;;) {
            std::erase_if(t.bindings, [&](const ScaleBinding &b) { return b.category_id == c; });
            for (const auto &item : std::vector<Item>(t.items)) {
                if (opt.allow_inert && uniform(0, 3) == 0)
                    continue;
                ScoreTuple tuple;
                for (int j = 0; j < k; ++j)
                    tuple.values.push_back(value());
                t = bind_scale(std::move(t), c, item.id, std::move(tuple));
            }
            Decimal lo, hi;
            for (const auto *b : t.bindings_for(c)) {
                lo += b->tuple.min();
                hi += b->tuple.max();
            }
            if (!t.bindings_for(c).empty() && lo < hi) {
                // Random interior boundaries drawn from a hundredth grid.
                std::vector<Decimal> bounds{lo};
                const std::int64_t span = (hi - lo).units() / (Decimal::unit / 100);
                std::vector<std::int64_t> cuts;
                for (int n = uniform(0, 3); n > 0; --n)
                    if (span > 1)
                        cuts.push_back(std::uniform_int_distribution<std::int64_t>(1, span - 1)(rng));
                std::sort(cuts.begin(), cuts.end());
                cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
                for (auto cut : cuts)
                    bounds.push_back(lo + Decimal::from_units(cut * (Decimal::unit / 100)));
                bounds.push_back(hi);
                std::vector<std::string> texts;
                for (std::size_t i = 1; i < bounds.size(); ++i)
                    texts.push_back(fmt::format("category {} band {}", ci + 1, i));
                t = set_bands(std::move(t), c, bounds, texts);
                break;
            }
        }
    }
    return t;
}

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir()
    {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("psytest-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;

    const std::filesystem::path &path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string &name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline Timestamp fixed_time(int seconds)
{
    return Timestamp{std::chrono::seconds{1'790'000'000 + seconds}};
}

/// Runs a complete session answering `answers` in ordinal order.
inline Session completed_session(const TestDefinition &test, const std::vector<std::size_t> &answers,
                                 const std::string &id = "s1", Demographics demographics = {})
{
    Session s = start_session(test, std::move(demographics), SessionId{id}, fixed_time(0));
    int t = 1;
    for (std::size_t a : answers)
        s = submit_answer(std::move(s), test, a, fixed_time(t++));
    return s;
}

} // namespace psytest::testing
