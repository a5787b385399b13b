#pragma once

#include "depwatch/error.hpp"

#include <chrono>
#include <string>
#include <string_view>

namespace depwatch {

/// UTC instant at one-second resolution.
using Timestamp = std::chrono::sys_seconds;

inline constexpr std::chrono::seconds kSecondsPerDay{86400};

class TimeParseError : public Error {
public:
    using Error::Error;
};

/// RFC 3339 date-time ("2020-01-12T00:00:00Z", offsets and fractions allowed;
/// fractions are truncated). A bare date is read as midnight UTC.
Timestamp parse_timestamp(std::string_view text);

/// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_timestamp(Timestamp t);

/// Signed difference `to - from` in fractional days.
double days_between(Timestamp from, Timestamp to);

}  // namespace depwatch
