#include "fakewatch/common/time.hpp"

#include <array>
#include <cstdio>

#include "fakewatch/common/strings.hpp"

namespace fakewatch {
namespace {

// Howard Hinnant's days_from_civil.
long long days_from_civil(long long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

void civil_from_days(long long z, long long& y, unsigned& m, unsigned& d) {
  z += 719468;
  const long long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<long long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2;
}

bool valid_date(long long y, unsigned m, unsigned d) {
  static constexpr std::array<unsigned, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m < 1 || m > 12 || d < 1) return false;
  unsigned limit = kDays[m - 1];
  bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  if (m == 2 && leap) limit = 29;
  return d <= limit;
}

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[pos_]; }
  void skip_spaces() {
    while (!done() && is_ascii_space(s_[pos_])) ++pos_;
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  // Reads between min and max digits.
  bool number(int min_digits, int max_digits, long long& out) {
    out = 0;
    int n = 0;
    while (n < max_digits && is_ascii_digit(peek())) {
      out = out * 10 + (s_[pos_] - '0');
      ++pos_;
      ++n;
    }
    return n >= min_digits;
  }
  std::string_view word() {
    std::size_t start = pos_;
    while (!done() && is_ascii_alpha(s_[pos_])) ++pos_;
    return s_.substr(start, pos_ - start);
  }
  std::string_view rest() const { return s_.substr(std::min(pos_, s_.size())); }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

std::optional<Timestamp> assemble(long long y, long long mo, long long d, long long h, long long mi,
                                  long long s, long long offset_seconds) {
  if (!valid_date(y, static_cast<unsigned>(mo), static_cast<unsigned>(d))) return std::nullopt;
  if (h > 23 || mi > 59 || s > 60) return std::nullopt;
  if (s == 60) s = 59;
  long long days = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
  long long secs = days * 86400 + h * 3600 + mi * 60 + s - offset_seconds;
  return Timestamp{std::chrono::seconds{secs}};
}

int month_from_name(std::string_view name) {
  static constexpr std::array<std::string_view, 12> kMonths = {
      "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"};
  if (name.size() < 3) return 0;
  std::string lower = to_lower(name.substr(0, 3));
  for (std::size_t i = 0; i < kMonths.size(); ++i) {
    if (lower == kMonths[i]) return static_cast<int>(i) + 1;
  }
  return 0;
}

std::optional<long long> zone_offset(std::string_view zone) {
  zone = trim(zone);
  if (zone.empty()) return 0;
  if (zone[0] == '+' || zone[0] == '-') {
    std::string digits;
    for (char c : zone.substr(1)) {
      if (is_ascii_digit(c)) digits.push_back(c);
      else if (c != ':') return std::nullopt;
    }
    if (digits.size() != 4 && digits.size() != 2) return std::nullopt;
    long long hh = std::stoll(digits.substr(0, 2));
    long long mm = digits.size() == 4 ? std::stoll(digits.substr(2, 2)) : 0;
    long long off = hh * 3600 + mm * 60;
    return zone[0] == '-' ? -off : off;
  }
  std::string z = to_lower(zone);
  if (z == "z" || z == "gmt" || z == "ut" || z == "utc") return 0;
  if (z == "est") return -5 * 3600;
  if (z == "edt") return -4 * 3600;
  if (z == "cst") return -6 * 3600;
  if (z == "cdt") return -5 * 3600;
  if (z == "mst") return -7 * 3600;
  if (z == "mdt") return -6 * 3600;
  if (z == "pst") return -8 * 3600;
  if (z == "pdt") return -7 * 3600;
  return std::nullopt;
}

}  // namespace

Timestamp make_timestamp(int year, unsigned month, unsigned day, int hour, int minute, int second) {
  long long days = days_from_civil(year, month, day);
  return Timestamp{std::chrono::seconds{days * 86400 + hour * 3600LL + minute * 60LL + second}};
}

std::string format_iso8601(Timestamp ts) {
  long long secs = ts.time_since_epoch().count();
  long long days = secs >= 0 ? secs / 86400 : (secs - 86399) / 86400;
  long long rem = secs - days * 86400;
  long long y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ", y, m, d, rem / 3600,
                (rem / 60) % 60, rem % 60);
  return buf;
}

std::optional<Timestamp> parse_rfc3339(std::string_view text) {
  Cursor c(trim(text));
  long long y, mo, d, h = 0, mi = 0, s = 0;
  if (!c.number(4, 4, y) || !c.accept('-') || !c.number(2, 2, mo) || !c.accept('-') ||
      !c.number(2, 2, d)) {
    return std::nullopt;
  }
  if (c.done()) return assemble(y, mo, d, 0, 0, 0, 0);
  if (!c.accept('T') && !c.accept('t') && !c.accept(' ')) return std::nullopt;
  if (!c.number(2, 2, h) || !c.accept(':') || !c.number(2, 2, mi)) return std::nullopt;
  if (c.accept(':') && !c.number(2, 2, s)) return std::nullopt;
  if (c.accept('.')) {
    long long frac;
    if (!c.number(1, 12, frac)) return std::nullopt;
  }
  auto off = zone_offset(c.rest());
  if (!off) return std::nullopt;
  return assemble(y, mo, d, h, mi, s, *off);
}

std::optional<Timestamp> parse_rfc822(std::string_view text) {
  Cursor c(trim(text));
  c.skip_spaces();
  if (is_ascii_alpha(c.peek())) {
    c.word();  // day-of-week
    c.accept(',');
    c.skip_spaces();
  }
  long long d, y, h = 0, mi = 0, s = 0;
  if (!c.number(1, 2, d)) return std::nullopt;
  c.skip_spaces();
  int mo = month_from_name(c.word());
  if (mo == 0) return std::nullopt;
  c.skip_spaces();
  std::string_view year_start = c.rest();
  if (!c.number(2, 4, y)) return std::nullopt;
  std::size_t year_digits = year_start.size() - c.rest().size();
  if (year_digits == 2) y += y < 50 ? 2000 : 1900;
  c.skip_spaces();
  if (is_ascii_digit(c.peek())) {
    if (!c.number(1, 2, h) || !c.accept(':') || !c.number(2, 2, mi)) return std::nullopt;
    if (c.accept(':') && !c.number(2, 2, s)) return std::nullopt;
  }
  auto off = zone_offset(c.rest());
  if (!off) return std::nullopt;
  return assemble(y, mo, d, h, mi, s, *off);
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  if (auto ts = parse_rfc3339(text)) return ts;
  return parse_rfc822(text);
}

Timestamp now_utc() {
  return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
}

}  // namespace fakewatch
