#include <psytest/timestamp.hpp>
#include <psytest/error.hpp>

#include <fmt/format.h>

#include <charconv>

namespace psytest {

using namespace std::chrono;

Timestamp now_utc()
{
    return time_point_cast<milliseconds>(system_clock::now());
}

std::string format_timestamp(Timestamp ts)
{
    const auto day = floor<days>(ts);
    const year_month_day ymd{day};
    const hh_mm_ss<milliseconds> tod{ts - day};
    return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}.{:03d}Z",
                       static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                       static_cast<unsigned>(ymd.day()), tod.hours().count(), tod.minutes().count(),
                       tod.seconds().count(), tod.subseconds().count());
}

Timestamp parse_timestamp(std::string_view text)
{
    auto fail = [&]() -> Timestamp {
        throw Error(ErrorCode::invalid_timestamp, fmt::format("invalid timestamp '{}'", text));
    };
    // Fixed layout: YYYY-MM-DDTHH:MM:SS.mmmZ
    if (text.size() != 24 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
        text[16] != ':' || text[19] != '.' || text[23] != 'Z')
        return fail();
    auto field = [&](std::size_t pos, std::size_t len) {
        int v = 0;
        auto [p, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, v);
        if (ec != std::errc{} || p != text.data() + pos + len)
            fail();
        return v;
    };
    const year_month_day ymd{year{field(0, 4)}, month{static_cast<unsigned>(field(5, 2))},
                             day{static_cast<unsigned>(field(8, 2))}};
    const int h = field(11, 2), m = field(14, 2), s = field(17, 2), ms = field(20, 3);
    if (!ymd.ok() || h > 23 || m > 59 || s > 59)
        return fail();
    return sys_days{ymd} + hours{h} + minutes{m} + seconds{s} + milliseconds{ms};
}

} // namespace psytest
