#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace fakewatch {

using Timestamp = std::chrono::sys_seconds;

// Stand-in for records whose date is missing: 1970-01-01T00:00:00Z.
inline constexpr Timestamp kSentinelTimestamp{};

Timestamp make_timestamp(int year, unsigned month, unsigned day, int hour = 0, int minute = 0,
                         int second = 0);

// "2023-04-20T13:05:00Z"
std::string format_iso8601(Timestamp ts);

// Accepts RFC 3339 / ISO 8601 date-times ("2023-04-20", "2023-04-20T10:00:00+02:00",
// fractional seconds ignored) and RFC 822 dates as used by RSS pubDate
// ("Thu, 20 Apr 2023 10:00:00 GMT", numeric offsets, two-digit years).
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::optional<Timestamp> parse_rfc3339(std::string_view text);
std::optional<Timestamp> parse_rfc822(std::string_view text);

Timestamp now_utc();

}  // namespace fakewatch
