#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace stocap {

using Millis = std::chrono::sys_time<std::chrono::milliseconds>;
using Minute = std::chrono::sys_time<std::chrono::minutes>;

// Accepts "YYYY-MM-DDTHH:MM:SS[.fff][Z]" (a space may replace the T).
// Fractional digits beyond milliseconds are truncated. Returns nullopt on
// anything else.
std::optional<Millis> parse_timestamp(std::string_view text);

// Same grammar as parse_timestamp but the seconds must be zero.
std::optional<Minute> parse_minute(std::string_view text);

std::string format_timestamp(Millis t);  // 2016-09-14T07:31:02.410
std::string format_minute(Minute m);     // 2016-09-14T07:31:00

inline Minute floor_minute(Millis t) { return std::chrono::floor<std::chrono::minutes>(t); }

}  // namespace stocap
