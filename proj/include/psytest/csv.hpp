#pragma once

#include <span>
#include <string>
#include <string_view>

namespace psytest::csv {

/// Quotes a field when it contains a comma, quote, CR or LF, doubling inner quotes.
std::string escape(std::string_view field);

/// Appends one CRLF-terminated record.
void append_row(std::string &out, std::span<const std::string> fields);

} // namespace psytest::csv
