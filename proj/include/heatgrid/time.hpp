#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

#include "heatgrid/errors.hpp"

namespace heatgrid {

// Proleptic Gregorian civil-date helpers (Howard Hinnant's algorithms).
// All times are UTC; the engine never applies calendar conversions.

constexpr std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);             // [0, 399]
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;   // [0, 365]
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;            // [0, 146096]
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
  int year;
  unsigned month, day;
};

constexpr CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return {static_cast<int>(y + (m <= 2)), m, d};
}

constexpr int year_of_epoch_seconds(std::int64_t t) {
  std::int64_t days = t / 86400;
  if (t < 0 && t % 86400 != 0) --days;
  return civil_from_days(days).year;
}

// Parses "YYYY-MM-DD" optionally followed by "THH:MM:SS" and an optional
// trailing "Z". Returns epoch seconds UTC.
inline std::int64_t parse_iso8601(const std::string& s) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, se = 0;
  char sep = 0, tz = 0;
  int n = std::sscanf(s.c_str(), "%d-%d-%d%c%d:%d:%d%c", &y, &mo, &d, &sep, &h, &mi, &se, &tz);
  if (n != 3 && n < 7) raise(Errc::InvalidField, "bad ISO-8601 timestamp '" + s + "'");
  if (n >= 7 && sep != 'T' && sep != ' ')
    raise(Errc::InvalidField, "bad ISO-8601 timestamp '" + s + "'");
  if (n == 8 && tz != 'Z') raise(Errc::InvalidField, "bad ISO-8601 timezone in '" + s + "'");
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || se > 60)
    raise(Errc::InvalidField, "out-of-range ISO-8601 field in '" + s + "'");
  return days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * 86400
         + h * 3600 + mi * 60 + se;
}

inline std::string format_iso8601(std::int64_t t) {
  std::int64_t days = t / 86400;
  std::int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  const CivilDate cd = civil_from_days(days);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", cd.year, cd.month,
                cd.day, static_cast<long long>(rem / 3600),
                static_cast<long long>(rem / 60 % 60), static_cast<long long>(rem % 60));
  return buf;
}

}  // namespace heatgrid
