#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace psytest {

/// UTC wall-clock instant at millisecond resolution, the precision kept in
/// session logs.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

Timestamp now_utc();

/// `2026-10-16T08:30:00.125Z`
std::string format_timestamp(Timestamp ts);
Timestamp parse_timestamp(std::string_view text);

} // namespace psytest
