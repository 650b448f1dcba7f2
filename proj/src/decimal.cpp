#include <psytest/decimal.hpp>
#include <psytest/error.hpp>

#include <fmt/format.h>

#include <cstdlib>
#include <limits>
#include <ostream>

namespace psytest {

namespace {

[[noreturn]] void bad_decimal(std::string_view text, std::string_view why)
{
    throw Error(ErrorCode::invalid_decimal, fmt::format("invalid decimal '{}': {}", text, why));
}

std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw Error(ErrorCode::decimal_overflow, "decimal overflow");
    return r;
}

} // namespace

Decimal Decimal::parse(std::string_view text)
{
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    const auto dot = s.find('.');
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if (whole.empty())
        bad_decimal(text, "missing integer part");
    if (dot != std::string_view::npos && frac.empty())
        bad_decimal(text, "missing fractional digits");
    if (frac.size() > fraction_digits)
        bad_decimal(text, "more than nine fractional digits");

    // Accumulate as a negative magnitude so INT64_MIN-adjacent values parse.
    std::int64_t acc = 0;
    auto push_digit = [&](char c) {
        if (c < '0' || c > '9')
            bad_decimal(text, "unexpected character");
        if (__builtin_mul_overflow(acc, 10, &acc) || __builtin_sub_overflow(acc, c - '0', &acc))
            throw Error(ErrorCode::decimal_overflow, fmt::format("decimal '{}' out of range", text));
    };
    for (char c : whole)
        push_digit(c);
    for (char c : frac)
        push_digit(c);
    for (std::size_t i = frac.size(); i < fraction_digits; ++i)
        push_digit('0');

    if (!negative) {
        if (acc == std::numeric_limits<std::int64_t>::min())
            throw Error(ErrorCode::decimal_overflow, fmt::format("decimal '{}' out of range", text));
        acc = -acc;
    }
    return from_units(acc);
}

std::string Decimal::to_string() const
{
    const bool negative = units_ < 0;
    // Work in unsigned to handle INT64_MIN.
    const std::uint64_t mag = negative ? std::uint64_t(0) - static_cast<std::uint64_t>(units_)
                                       : static_cast<std::uint64_t>(units_);
    const std::uint64_t whole = mag / unit;
    std::uint64_t frac = mag % unit;
    std::string out = negative ? "-" : "";
    out += std::to_string(whole);
    if (frac != 0) {
        std::string digits = fmt::format("{:09d}", frac);
        while (digits.back() == '0')
            digits.pop_back();
        out += '.';
        out += digits;
    }
    return out;
}

double Decimal::to_double() const noexcept
{
    // Split to keep the whole part exact for large magnitudes.
    return static_cast<double>(units_ / unit) + static_cast<double>(units_ % unit) / unit;
}

Decimal Decimal::operator-() const
{
    if (units_ == std::numeric_limits<std::int64_t>::min())
        throw Error(ErrorCode::decimal_overflow, "decimal overflow");
    return from_units(-units_);
}

Decimal &Decimal::operator+=(Decimal other)
{
    units_ = checked_add(units_, other.units_);
    return *this;
}

Decimal &Decimal::operator-=(Decimal other)
{
    std::int64_t r;
    if (__builtin_sub_overflow(units_, other.units_, &r))
        throw Error(ErrorCode::decimal_overflow, "decimal overflow");
    units_ = r;
    return *this;
}

std::ostream &operator<<(std::ostream &os, Decimal d)
{
    return os << d.to_string();
}

} // namespace psytest
