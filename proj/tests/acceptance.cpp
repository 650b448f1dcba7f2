// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "support/fixtures.hpp"

#include <psytest/cli.hpp>
#include <psytest/scoring.hpp>
#include <psytest/session_log.hpp>
#include <psytest/statistics.hpp>
#include <psytest/validate.hpp>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>

using namespace psytest;
using namespace psytest::testing;
namespace gen = psytest::generator;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string &what)
{
    if (!ok)
        throw Failure(what);
}

AnswerMap to_map(const TestDefinition &t, const std::vector<std::size_t> &assignment)
{
    AnswerMap answers;
    const auto ordered = t.items_in_order();
    for (std::size_t i = 0; i < ordered.size(); ++i)
        answers[ordered[i]->id] = assignment[i];
    return answers;
}

std::vector<std::size_t> random_answers(std::mt19937_64 &rng, const TestDefinition &t)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < t.items.size(); ++i)
        out.push_back(std::uniform_int_distribution<std::size_t>(0, t.answer_set.size() - 1)(rng));
    return out;
}

std::size_t bands_containing(const TestDefinition &t, const CategoryId &c, Decimal x)
{
    std::size_t n = 0;
    for (const Band &b : t.bands_for(c))
        n += b.contains(x);
    return n;
}

bool bijective(const TestDefinition &t)
{
    std::set<int> seen;
    for (const auto &item : t.items)
        seen.insert(item.ordinal);
    return seen.size() == t.items.size() &&
           (t.items.empty() || (*seen.begin() == 1 && *seen.rbegin() == static_cast<int>(t.items.size())));
}

bool references_intact(const TestDefinition &t)
{
    for (const auto &b : t.bindings)
        if (!t.find_item(b.item_id) || !t.find_category(b.category_id))
            return false;
    for (const auto &b : t.bands)
        if (!t.find_category(b.category_id))
            return false;
    return true;
}

TestDefinition without_id_pool(TestDefinition t)
{
    t.next_item_seq = 0;
    return t;
}

std::string bounds_oracle()
{
    std::mt19937_64 rng(1001);
    int categories = 0;
    for (int i = 0; i < 200; ++i) {
        const TestDefinition t = random_test(rng, {.allow_inert = i % 2 == 0});
        for (const auto &c : t.categories) {
            const OracleBounds oracle = oracle_bounds(t, c.id);
            expect(compute_min_score(t, c.id) == oracle.min,
                   fmt::format("test {} {}: min {} != {}", i, c.id.value, compute_min_score(t, c.id), oracle.min));
            expect(compute_max_score(t, c.id) == oracle.max,
                   fmt::format("test {} {}: max {} != {}", i, c.id.value, compute_max_score(t, c.id), oracle.max));
            ++categories;
        }
    }
    return fmt::format("200 tests, {} categories", categories);
}

std::string counting_example()
{
    std::size_t checked = 0;
    for (int m = 1; m <= 10; ++m) {
        TestDefinition t = gen::new_test("count", "Counting", {"Yes", "No"});
        t = gen::add_category(std::move(t), "Positive");
        for (int i = 1; i <= m; ++i)
            t = gen::insert_item(std::move(t), i, fmt::format("statement {}", i));
        for (const auto &item : std::vector<Item>(t.items))
            t = gen::bind_scale(std::move(t), CategoryId{"c1"}, item.id, ScoreTuple{{1, 0}});
        for (const auto &assignment : all_assignments(m, 2)) {
            const auto yes = std::count(assignment.begin(), assignment.end(), std::size_t{0});
            const Decimal score = raw_score(t, CategoryId{"c1"}, to_map(t, assignment));
            expect(score == Decimal(yes), fmt::format("m={}: score {} for {} yes answers", m, score, yes));
            ++checked;
        }
    }
    return fmt::format("m = 1..10, {} assignments", checked);
}

std::string band_partition()
{
    std::mt19937_64 rng(1002);
    std::size_t points = 0;
    for (int i = 0; i < 200; ++i) {
        const TestDefinition t = random_test(rng, {.fractional = i % 2 == 1});
        for (const auto &c : t.categories) {
            const auto bands = t.bands_for(c.id);
            auto check = [&](Decimal x) {
                expect(bands_containing(t, c.id, x) == 1, fmt::format("{} in {} bands", x, bands_containing(t, c.id, x)));
                const Band &b = band_of(t, c.id, x);
                expect(b.contains(x), fmt::format("band_of({}) = {} does not contain it", x, b.index));
                ++points;
            };
            check(bands.front().lower);
            expect(band_of(t, c.id, bands.front().lower).index == 1, "minimum not in band 1");
            for (const Band &b : bands) {
                check(b.upper);
                expect(band_of(t, c.id, b.upper).index == b.index,
                       fmt::format("boundary {} maps to band {} not {}", b.upper, band_of(t, c.id, b.upper).index,
                                   b.index));
                check(Decimal::from_units(b.lower.units() + (b.upper.units() - b.lower.units()) / 2));
            }
            for (const Decimal &x : oracle_bounds(t, c.id).reachable)
                check(x);
        }
    }
    return fmt::format("{} points over 200 tests", points);
}

std::string renumbering()
{
    std::mt19937_64 rng(1003);
    std::size_t steps = 0, pairs = 0;
    for (int script = 0; script < 1000; ++script) {
        TestDefinition t = random_test(rng, {.max_items = 6});
        auto pick = [&](int hi) { return std::uniform_int_distribution<int>(1, hi)(rng); };
        for (int step = 0; step < 20; ++step) {
            const int m = static_cast<int>(t.items.size());
            const int op = std::uniform_int_distribution<int>(0, 4)(rng);
            if (op == 0 || m <= 1) {
                t = gen::insert_item(std::move(t), pick(m + 1), "inserted");
            } else if (op == 1) {
                t = gen::delete_item(std::move(t), pick(m));
            } else if (op == 2) {
                t = gen::move_item(std::move(t), pick(m), pick(m));
            } else if (op == 3) {
                const int p = pick(m + 1);
                const TestDefinition back = gen::delete_item(gen::insert_item(t, p, "probe"), p);
                expect(without_id_pool(back) == without_id_pool(t), fmt::format("insert/delete at {} not inverse", p));
                ++pairs;
            } else {
                const int from = pick(m), to = pick(m);
                expect(gen::move_item(gen::move_item(t, from, to), to, from) == t,
                       fmt::format("move {}->{} not inverse", from, to));
                ++pairs;
            }
            expect(bijective(t), fmt::format("script {} step {}: ordinals not a bijection", script, step));
            expect(references_intact(t), fmt::format("script {} step {}: dangling reference", script, step));
            ++steps;
        }
    }
    return fmt::format("1000 scripts, {} edits, {} inverse pairs", steps, pairs);
}

std::string round_trip()
{
    std::mt19937_64 rng(1004);
    std::size_t sessions = 0;
    for (int i = 0; i < 100; ++i) {
        TestDocument doc{1, random_test(rng, {.fractional = true})};
        doc.test.demographics = {{"group", DemographicKind::choice, {"a", "b"}}, {"age", DemographicKind::integer, {}}};
        const std::string text = serialize_test(doc);
        const TestDocument back = parse_test(text);
        expect(back == doc, fmt::format("document {} changed through text", i));
        expect(serialize_test(back) == text, fmt::format("document {} not byte-stable", i));
        for (const Band &b : back.test.bands)
            expect(band_of(back.test, b.category_id, b.upper).index == b.index,
                   fmt::format("document {}: boundary {} moved after parsing", i, b.upper));

        std::string log;
        std::vector<SessionRecord> records;
        for (int s = 0; s < 5; ++s) {
            const Session session =
                completed_session(doc.test, random_answers(rng, doc.test), fmt::format("s{}-{}", i, s),
                                  {{"group", std::string{s % 2 ? "a" : "b"}}, {"age", std::int64_t{20 + s}}});
            records.push_back({session, score_session(session, doc.test)});
            log += persist_session(records.back().session, records.back().result);
        }
        const LoadedLog loaded = load_sessions(log);
        expect(loaded.records == records, fmt::format("session log {} changed through text", i));
        std::string again;
        for (const auto &r : loaded.records)
            again += persist_session(r.session, r.result);
        expect(again == log, fmt::format("session log {} not byte-stable", i));
        sessions += records.size();
    }
    return fmt::format("100 documents, {} logged sessions", sessions);
}

struct CliRun {
    int code;
    std::string out;
    std::string log;
};

CliRun cli_session(const std::vector<std::size_t> &answers)
{
    TempDir dir;
    const std::string test_file = (dir / "yesno.ptest.json").string();
    const std::string log = (dir / "log.ndjson").string();
    write_file(test_file, serialize_test(TestDocument{1, yes_no_test()}));
    std::string input;
    for (std::size_t a : answers)
        input += std::to_string(a + 1) + "\n";
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = gateway::run_cli({"run", test_file, "--log", log, "--session-id", "fixed", "--show-interpretation"},
                                      in, out, err);
    return {code, out.str(), read_file(log)};
}

std::string end_to_end()
{
    static const std::regex iso(R"(\d{4}-\d\d-\d\dT\d\d:\d\d:\d\d\.\d{3}Z)");
    const TestDefinition t = yes_no_test();
    std::size_t runs = 0;
    for (const auto &answers : all_assignments(3, 2)) {
        const CliRun first = cli_session(answers);
        const CliRun second = cli_session(answers);
        expect(first.code == 0 && second.code == 0, "run did not exit 0");
        expect(first.out == second.out, "terminal output differs between runs");
        expect(std::regex_replace(first.log, iso, "") == std::regex_replace(second.log, iso, ""),
               "log records differ beyond timestamps");

        const LoadedLog loaded = load_sessions(first.log);
        expect(loaded.records.size() == 1, "expected exactly one logged record");
        const SessionResult expected = score_session(completed_session(t, answers, "fixed"), t);
        expect(loaded.records[0].result == expected, "logged result differs from library scoring");
        for (const auto &r : expected.categories)
            expect(first.out.find(fmt::format("{}: {}\n", t.find_category(r.category_id)->name, r.interpretation)) !=
                       std::string::npos,
                   "printed interpretation differs from library scoring");
        runs += 2;
    }
    return fmt::format("{} CLI runs over all 8 answer patterns", runs);
}

std::string statistics()
{
    const TestDefinition t = yes_no_test();
    // Raw scores 3, 0, 2, 1, 2.
    const std::vector<std::vector<std::size_t>> answers{{0, 0, 0}, {1, 1, 1}, {0, 1, 0}, {1, 0, 1}, {0, 0, 1}};
    std::vector<SessionRecord> records;
    for (std::size_t i = 0; i < answers.size(); ++i) {
        const Session s = completed_session(t, answers[i], fmt::format("s{}", i + 1));
        records.push_back({s, score_session(s, t)});
    }
    const auto close = [](double got, double want) { return std::abs(got - want) <= 1e-9 * std::abs(want); };
    const auto report = aggregate(records, t);
    expect(report.has_value(), "no report");
    const CategoryStats &c = report->categories.at(0);
    expect(c.n == 5, "n");
    expect(close(c.mean, 1.6), fmt::format("mean {}", c.mean));
    expect(close(c.std_dev, std::sqrt(1.04)), fmt::format("std_dev {}", c.std_dev));
    expect(c.min == Decimal(0) && c.max == Decimal(3), "min/max");
    expect(c.band_histogram == std::vector<std::size_t>{2, 3}, "band histogram");
    expect(report->items.at(0).answer_frequencies == std::vector<std::size_t>{3, 2} &&
               report->items.at(1).answer_frequencies == std::vector<std::size_t>{3, 2} &&
               report->items.at(2).answer_frequencies == std::vector<std::size_t>{2, 3},
           "item frequencies");

    std::size_t permutations = 0;
    auto shuffled = records;
    std::sort(shuffled.begin(), shuffled.end(),
              [](const SessionRecord &a, const SessionRecord &b) { return a.session.session_id < b.session.session_id; });
    do {
        const auto other = aggregate(shuffled, t);
        expect(other->categories.at(0).mean == c.mean && other->categories.at(0).std_dev == c.std_dev &&
                   other->categories.at(0).band_histogram == c.band_histogram &&
                   other->items.at(0).answer_frequencies == report->items.at(0).answer_frequencies,
               "report depends on session order");
        ++permutations;
    } while (std::next_permutation(
        shuffled.begin(), shuffled.end(),
        [](const SessionRecord &a, const SessionRecord &b) { return a.session.session_id < b.session.session_id; }));

    std::mt19937_64 rng(1005);
    const TestDefinition wide = random_test(rng, {.min_items = 4, .max_items = 6, .fractional = true});
    std::vector<SessionRecord> many;
    for (int i = 0; i < 40; ++i) {
        const Session s = completed_session(wide, random_answers(rng, wide), fmt::format("r{}", i));
        many.push_back({s, score_session(s, wide)});
    }
    const std::string base = export_summary_csv(aggregate(many, wide), wide);
    const auto base_report = aggregate(many, wide);
    for (int i = 0; i < 50; ++i) {
        std::shuffle(many.begin(), many.end(), rng);
        const auto other = aggregate(many, wide);
        for (std::size_t ci = 0; ci < wide.categories.size(); ++ci)
            expect(other->categories[ci].mean == base_report->categories[ci].mean &&
                       other->categories[ci].std_dev == base_report->categories[ci].std_dev,
                   "fractional report depends on session order");
        expect(export_summary_csv(other, wide) == base, "summary CSV depends on session order");
        ++permutations;
    }
    return fmt::format("fixture within 1e-9, {} orderings identical", permutations);
}

std::string inert_items()
{
    std::mt19937_64 rng(1006);
    std::size_t sessions = 0;
    for (int i = 0; i < 200; ++i) {
        const TestDefinition t = random_test(rng, {.fractional = i % 2 == 1});
        const int pos = std::uniform_int_distribution<int>(1, static_cast<int>(t.items.size()) + 1)(rng);
        const TestDefinition wider = gen::insert_item(t, pos, "unscored statement");
        expect(!has_errors(validate(wider)), "adding an unbound item made the test invalid");
        for (const auto &c : t.categories) {
            expect(compute_min_score(wider, c.id) == compute_min_score(t, c.id), "m_c changed");
            expect(compute_max_score(wider, c.id) == compute_max_score(t, c.id), "M_c changed");
        }
        for (int s = 0; s < 10; ++s) {
            auto answers = random_answers(rng, t);
            const SessionResult before = score_session(completed_session(t, answers), t);
            for (std::size_t extra = 0; extra < t.answer_set.size(); ++extra) {
                auto widened = answers;
                widened.insert(widened.begin() + (pos - 1), extra);
                const SessionResult after = score_session(completed_session(wider, widened), wider);
                expect(after == before, fmt::format("test {}: result changed by the inert answer", i));
            }
            ++sessions;
        }
    }
    return fmt::format("200 tests, {} sessions", sessions);
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<std::string()>>> criteria{
        {"bounds oracle: min/max equal brute force", bounds_oracle},
        {"counting example: raw score counts first-option answers", counting_example},
        {"band partition: every boundary, midpoint and reachable score in exactly one band", band_partition},
        {"renumbering: random edit scripts and inverse pairs", renumbering},
        {"round-trip: documents and session logs", round_trip},
        {"end-to-end determinism: CLI run equals library scoring", end_to_end},
        {"statistics: five-session fixture and permutation invariance", statistics},
        {"inert-item irrelevance", inert_items},
    };
    int failures = 0;
    for (const auto &[name, check] : criteria) {
        const auto started = std::chrono::steady_clock::now();
        try {
            const std::string detail = check();
            const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
            std::cout << fmt::format("[PASS] {} ({}; {} ms)\n", name, detail, ms.count());
        } catch (const std::exception &e) {
            ++failures;
            std::cout << fmt::format("[FAIL] {}: {}\n", name, e.what());
        }
    }
    std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
