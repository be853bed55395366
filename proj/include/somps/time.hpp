#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace somps {

/// UTC instant with one-second resolution.
using Timestamp = std::chrono::sys_seconds;

/// Parses `YYYY-MM-DDTHH:MM:SS[.fff][Z|+HH:MM|-HH:MM]`. Fractional seconds are
/// truncated. Throws ArgumentError on malformed input.
Timestamp parse_iso8601(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_iso8601(Timestamp t);

inline double hours_between(Timestamp from, Timestamp to) {
    return static_cast<double>((to - from).count()) / 3600.0;
}

inline double days_between(Timestamp from, Timestamp to) {
    return static_cast<double>((to - from).count()) / 86400.0;
}

/// Days since the Unix epoch of the UTC calendar day containing `t`.
inline std::int64_t utc_day(Timestamp t) {
    return std::chrono::floor<std::chrono::days>(t).time_since_epoch().count();
}

} // namespace somps
