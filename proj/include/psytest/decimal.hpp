#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace psytest {

/// Signed fixed-point decimal with nine fractional digits.
///
/// Scores and band boundaries are compared with `==` and `<` at interval
/// endpoints, so they are never held in binary floating point. Addition and
/// subtraction are exact and throw `DECIMAL_OVERFLOW` instead of wrapping.
class Decimal {
public:
    static constexpr int fraction_digits = 9;
    static constexpr std::int64_t unit = 1'000'000'000;

    constexpr Decimal() = default;
    constexpr Decimal(int whole) : units_(static_cast<std::int64_t>(whole) * unit) {}

    static constexpr Decimal from_units(std::int64_t units)
    {
        Decimal d;
        d.units_ = units;
        return d;
    }

    /// Accepts `[+-]digits[.digits]` with at most nine fractional digits.
    static Decimal parse(std::string_view text);

    constexpr std::int64_t units() const noexcept { return units_; }

    /// Shortest exact representation: no exponent, no trailing zeros, `-0` never produced.
    std::string to_string() const;
    double to_double() const noexcept;

    Decimal operator-() const;
    Decimal &operator+=(Decimal other);
    Decimal &operator-=(Decimal other);
    friend Decimal operator+(Decimal a, Decimal b) { return a += b; }
    friend Decimal operator-(Decimal a, Decimal b) { return a -= b; }

    friend constexpr auto operator<=>(Decimal, Decimal) = default;
    friend constexpr bool operator==(Decimal, Decimal) = default;

private:
    std::int64_t units_ = 0;
};

std::ostream &operator<<(std::ostream &os, Decimal d);

} // namespace psytest
