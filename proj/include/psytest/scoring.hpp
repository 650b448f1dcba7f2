#pragma once

#include <psytest/model.hpp>

#include <map>

namespace psytest {

/// Respondent's choices: item id to answer option index.
using AnswerMap = std::map<ItemId, std::size_t>;

/// Smallest achievable total for category c: the sum of the per-item tuple
/// minima over the items bound to c. Throws `UNKNOWN_CATEGORY` or
/// `CATEGORY_UNBOUND`.
Decimal compute_min_score(const TestDefinition &test, const CategoryId &c);

/// Largest achievable total for category c. Additionally throws
/// `DEGENERATE_SCALE` when it equals the minimum, since no band partition of
/// a single point exists.
Decimal compute_max_score(const TestDefinition &test, const CategoryId &c);

/// Total of `f_c(q)[answers[q]]` over the items bound to c. Answers to items
/// not bound to c are ignored.
Decimal raw_score(const TestDefinition &test, const CategoryId &c, const AnswerMap &answers);

/// The unique band of c containing `score`. Throws `SCORE_OUT_OF_RANGE` when
/// the score lies outside `[m_c, M_c]` or the stored partition has no band for it.
Band band_of(const TestDefinition &test, const CategoryId &c, Decimal score);

namespace detail {

struct ScoreBounds {
    Decimal min;
    Decimal max;
};

/// Bounds without the degeneracy check; throws only for unknown/unbound categories.
ScoreBounds score_bounds(const TestDefinition &test, const CategoryId &c);

} // namespace detail

} // namespace psytest
