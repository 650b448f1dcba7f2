#pragma once

// Strict field accessors for documents read from disk or the network. Every
// failure surfaces as MALFORMED_INPUT naming the offending key.

#include <psytest/decimal.hpp>
#include <psytest/error.hpp>

#include <fmt/format.h>
#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace psytest::detail {

using json = nlohmann::ordered_json;

[[noreturn]] inline void malformed(std::string_view what)
{
    throw Error(ErrorCode::malformed_input, std::string(what));
}

inline const json &field(const json &obj, std::string_view key)
{
    if (!obj.is_object())
        malformed(fmt::format("expected an object holding '{}'", key));
    auto it = obj.find(key);
    if (it == obj.end())
        malformed(fmt::format("missing key '{}'", key));
    return *it;
}

inline std::string get_string(const json &obj, std::string_view key)
{
    const json &v = field(obj, key);
    if (!v.is_string())
        malformed(fmt::format("'{}' must be a string", key));
    return v.get<std::string>();
}

inline std::int64_t get_int(const json &obj, std::string_view key)
{
    const json &v = field(obj, key);
    if (!v.is_number_integer())
        malformed(fmt::format("'{}' must be an integer", key));
    return v.get<std::int64_t>();
}

inline const json &get_array(const json &obj, std::string_view key)
{
    const json &v = field(obj, key);
    if (!v.is_array())
        malformed(fmt::format("'{}' must be an array", key));
    return v;
}

/// Decimals travel as strings; bare JSON integers are accepted for hand-written files.
inline Decimal to_decimal(const json &v, std::string_view key)
{
    if (v.is_string())
        return Decimal::parse(v.get_ref<const std::string &>());
    if (v.is_number_integer())
        return Decimal::parse(v.dump());
    malformed(fmt::format("'{}' must be a decimal string", key));
}

inline Decimal get_decimal(const json &obj, std::string_view key)
{
    return to_decimal(field(obj, key), key);
}

} // namespace psytest::detail
