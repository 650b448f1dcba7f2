#include <psytest/error.hpp>

namespace psytest {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::invalid_decimal: return "INVALID_DECIMAL";
    case ErrorCode::decimal_overflow: return "DECIMAL_OVERFLOW";
    case ErrorCode::invalid_timestamp: return "INVALID_TIMESTAMP";
    case ErrorCode::unknown_category: return "UNKNOWN_CATEGORY";
    case ErrorCode::unknown_item: return "UNKNOWN_ITEM";
    case ErrorCode::unknown_ordinal: return "UNKNOWN_ORDINAL";
    case ErrorCode::category_unbound: return "CATEGORY_UNBOUND";
    case ErrorCode::degenerate_scale: return "DEGENERATE_SCALE";
    case ErrorCode::missing_answer: return "MISSING_ANSWER";
    case ErrorCode::answer_out_of_range: return "ANSWER_OUT_OF_RANGE";
    case ErrorCode::score_out_of_range: return "SCORE_OUT_OF_RANGE";
    case ErrorCode::position_out_of_range: return "POSITION_OUT_OF_RANGE";
    case ErrorCode::empty_text: return "EMPTY_TEXT";
    case ErrorCode::duplicate_name: return "DUPLICATE_NAME";
    case ErrorCode::tuple_length_mismatch: return "TUPLE_LENGTH_MISMATCH";
    case ErrorCode::answer_set_locked: return "ANSWER_SET_LOCKED";
    case ErrorCode::band_not_monotone: return "BAND_NOT_MONOTONE";
    case ErrorCode::band_bounds_mismatch: return "BAND_BOUNDS_MISMATCH";
    case ErrorCode::band_text_count: return "BAND_TEXT_COUNT";
    case ErrorCode::malformed_input: return "MALFORMED_INPUT";
    case ErrorCode::unsupported_version: return "UNSUPPORTED_VERSION";
    case ErrorCode::invalid_test: return "INVALID_TEST";
    case ErrorCode::invalid_demographics: return "INVALID_DEMOGRAPHICS";
    case ErrorCode::session_not_started: return "SESSION_NOT_STARTED";
    case ErrorCode::session_completed: return "SESSION_COMPLETED";
    case ErrorCode::session_incomplete: return "SESSION_INCOMPLETE";
    case ErrorCode::test_mismatch: return "TEST_MISMATCH";
    case ErrorCode::stale_norms: return "STALE_NORMS";
    case ErrorCode::unknown_test: return "UNKNOWN_TEST";
    case ErrorCode::unknown_session: return "UNKNOWN_SESSION";
    case ErrorCode::out_of_order: return "OUT_OF_ORDER";
    case ErrorCode::result_withheld: return "RESULT_WITHHELD";
    case ErrorCode::malformed_request: return "MALFORMED_REQUEST";
    case ErrorCode::io_error: return "IO_ERROR";
    }
    return "UNKNOWN";
}

} // namespace psytest
