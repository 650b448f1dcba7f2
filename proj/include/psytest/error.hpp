#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace psytest {

/// Machine-readable failure codes shared by the library, the CLI and the
/// HTTP service.
enum class ErrorCode {
    invalid_decimal,
    decimal_overflow,
    invalid_timestamp,
    unknown_category,
    unknown_item,
    unknown_ordinal,
    category_unbound,
    degenerate_scale,
    missing_answer,
    answer_out_of_range,
    score_out_of_range,
    position_out_of_range,
    empty_text,
    duplicate_name,
    tuple_length_mismatch,
    answer_set_locked,
    band_not_monotone,
    band_bounds_mismatch,
    band_text_count,
    malformed_input,
    unsupported_version,
    invalid_test,
    invalid_demographics,
    session_not_started,
    session_completed,
    session_incomplete,
    test_mismatch,
    stale_norms,
    unknown_test,
    unknown_session,
    out_of_order,
    result_withheld,
    malformed_request,
    io_error,
};

/// Upper-case wire name, e.g. `SESSION_COMPLETED`.
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(message), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace psytest
