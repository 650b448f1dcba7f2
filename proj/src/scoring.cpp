#include <psytest/scoring.hpp>
#include <psytest/error.hpp>

#include <fmt/format.h>

namespace psytest {

namespace detail {

ScoreBounds score_bounds(const TestDefinition &test, const CategoryId &c)
{
    if (!test.find_category(c))
        throw Error(ErrorCode::unknown_category, fmt::format("unknown category '{}'", c.value));
    const auto bound = test.bindings_for(c);
    if (bound.empty())
        throw Error(ErrorCode::category_unbound, fmt::format("category '{}' has no scale bindings", c.value));
    ScoreBounds bounds;
    for (const ScaleBinding *b : bound) {
        bounds.min += b->tuple.min();
        bounds.max += b->tuple.max();
    }
    return bounds;
}

} // namespace detail

Decimal compute_min_score(const TestDefinition &test, const CategoryId &c)
{
    return detail::score_bounds(test, c).min;
}

Decimal compute_max_score(const TestDefinition &test, const CategoryId &c)
{
    const auto bounds = detail::score_bounds(test, c);
    if (bounds.min == bounds.max)
        throw Error(ErrorCode::degenerate_scale,
                    fmt::format("category '{}' has minimum score equal to maximum score ({})", c.value,
                                bounds.max.to_string()));
    return bounds.max;
}

Decimal raw_score(const TestDefinition &test, const CategoryId &c, const AnswerMap &answers)
{
    if (!test.find_category(c))
        throw Error(ErrorCode::unknown_category, fmt::format("unknown category '{}'", c.value));
    Decimal total;
    for (const ScaleBinding *b : test.bindings_for(c)) {
        auto it = answers.find(b->item_id);
        if (it == answers.end())
            throw Error(ErrorCode::missing_answer, fmt::format("no answer for item '{}'", b->item_id.value));
        if (it->second >= b->tuple.values.size())
            throw Error(ErrorCode::answer_out_of_range,
                        fmt::format("answer index {} out of range for item '{}'", it->second, b->item_id.value));
        total += b->tuple.values[it->second];
    }
    return total;
}

Band band_of(const TestDefinition &test, const CategoryId &c, Decimal score)
{
    const auto bounds = detail::score_bounds(test, c);
    if (score < bounds.min || score > bounds.max)
        throw Error(ErrorCode::score_out_of_range,
                    fmt::format("score {} outside [{}, {}] for category '{}'", score.to_string(),
                                bounds.min.to_string(), bounds.max.to_string(), c.value));
    for (const Band &band : test.bands_for(c))
        if (band.contains(score))
            return band;
    throw Error(ErrorCode::score_out_of_range,
                fmt::format("no band of category '{}' contains score {}", c.value, score.to_string()));
}

} // namespace psytest
