#pragma once

#include <psytest/model.hpp>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace psytest {

enum class ViolationCode {
    test_id_empty,
    answer_set_too_small,
    answer_label_empty,
    answer_label_duplicate,
    no_items,
    item_id_empty,
    item_id_duplicate,
    item_text_empty,
    ordinal_duplicate,
    ordinal_gap,
    category_id_duplicate,
    category_name_empty,
    category_name_duplicate,
    binding_unknown_item,
    binding_unknown_category,
    binding_duplicate,
    tuple_length_mismatch,
    category_unbound,
    degenerate_scale,
    band_unknown_category,
    bands_missing,
    band_index_invalid,
    band_empty_interval,
    band_gap,
    band_overlap,
    band_bounds_mismatch,
    band_text_empty,
    demographic_name_empty,
    demographic_name_duplicate,
    demographic_choices_invalid,
    inert_item,
};

enum class Severity { error, warning };

struct Violation {
    ViolationCode code;
    Severity severity = Severity::error;
    std::string message;
};

/// `ORDINAL_GAP` etc.
std::string_view to_string(ViolationCode code) noexcept;

/// Checks every structural invariant of a test definition. Returns an empty
/// list iff the test is well formed and has no inert items; inert items are
/// reported with `Severity::warning` and do not make the test invalid.
std::vector<Violation> validate(const TestDefinition &test);

bool has_errors(std::span<const Violation> violations) noexcept;

/// One line per violation: `error ORDINAL_GAP: ...`.
std::string describe(std::span<const Violation> violations);

} // namespace psytest
