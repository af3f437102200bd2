#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "hetrec/errors.hpp"

namespace hetrec {

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

namespace detail {

// Days since 1970-01-01 for a proleptic Gregorian civil date (Howard Hinnant's
// days_from_civil).
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

constexpr void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y = static_cast<int>(yr + (m <= 2));
}

constexpr bool is_leap(int y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

constexpr unsigned days_in_month(int y, unsigned m) {
  constexpr unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return lengths[m - 1];
}

inline bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len, unsigned& out) {
  unsigned v = 0;
  if (pos + len > s.size()) return false;
  for (std::size_t i = 0; i < len; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<unsigned>(c - '0');
  }
  out = v;
  return true;
}

}  // namespace detail

/// Parses a strict ISO-8601 UTC instant, `YYYY-MM-DDTHH:MM:SSZ`, with an
/// optional fractional-second part that is truncated. Throws DataError.
inline Timestamp parse_iso8601_utc(std::string_view s) {
  const auto fail = [&] { throw DataError("invalid ISO-8601 UTC timestamp: '" + std::string(s) + "'"); };
  unsigned year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  if (s.size() < 20) fail();
  if (!detail::parse_fixed_uint(s, 0, 4, year) || s[4] != '-' ||
      !detail::parse_fixed_uint(s, 5, 2, month) || s[7] != '-' ||
      !detail::parse_fixed_uint(s, 8, 2, day) || s[10] != 'T' ||
      !detail::parse_fixed_uint(s, 11, 2, hour) || s[13] != ':' ||
      !detail::parse_fixed_uint(s, 14, 2, minute) || s[16] != ':' ||
      !detail::parse_fixed_uint(s, 17, 2, second))
    fail();
  std::size_t pos = 19;
  if (s[pos] == '.') {
    ++pos;
    std::size_t digits = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos, ++digits;
    if (digits == 0) fail();
  }
  if (pos + 1 != s.size() || s[pos] != 'Z') fail();
  if (month < 1 || month > 12 || day < 1 || day > detail::days_in_month(static_cast<int>(year), month) ||
      hour > 23 || minute > 59 || second > 59)
    fail();
  const std::int64_t days = detail::days_from_civil(static_cast<int>(year), month, day);
  return days * 86400 + hour * 3600 + minute * 60 + second;
}

inline std::string format_iso8601_utc(Timestamp t) {
  std::int64_t days = t / 86400;
  std::int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  int y = 0;
  unsigned m = 0, d = 0;
  detail::civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", y, m, d,
                static_cast<long long>(rem / 3600), static_cast<long long>((rem / 60) % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

}  // namespace hetrec
