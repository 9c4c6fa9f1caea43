#include "auctionlab/core/date.hpp"

#include <cstdio>

#include "auctionlab/core/errors.hpp"

namespace auctionlab {

std::int64_t days_from_civil(const Date& d) noexcept {
  std::int64_t y = d.year;
  const int m = d.month;
  const int day = d.day;
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 +
                       static_cast<unsigned>(day) - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date civil_from_days(std::int64_t z) noexcept {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned day = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : static_cast<unsigned>(-9));
  return Date{static_cast<std::int32_t>(y + (m <= 2)), static_cast<std::uint8_t>(m),
              static_cast<std::uint8_t>(day)};
}

int weekday(const Date& d) noexcept {
  // 1970-01-01 was a Thursday (index 3 with Monday = 0)
  const std::int64_t z = days_from_civil(d);
  return static_cast<int>(((z % 7) + 7 + 3) % 7);
}

bool is_third_friday(const Date& d) noexcept {
  return is_friday(d) && d.day >= 15 && d.day <= 21;
}

std::string to_string(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", d.year, unsigned(d.month), unsigned(d.day));
  return buf;
}

Date parse_date(const std::string& s) {
  int y = 0;
  unsigned m = 0, day = 0;
  if (std::sscanf(s.c_str(), "%d-%u-%u", &y, &m, &day) != 3 || m < 1 || m > 12 || day < 1 ||
      day > 31) {
    throw ConfigError("bad date: '" + s + "' (expected YYYY-MM-DD)");
  }
  return Date{y, static_cast<std::uint8_t>(m), static_cast<std::uint8_t>(day)};
}

Date date_from_ns(std::int64_t ns) noexcept {
  std::int64_t days = ns / 86'400'000'000'000LL;
  if (ns < 0 && ns % 86'400'000'000'000LL != 0) --days;
  return civil_from_days(days);
}

std::int64_t ns_at_midnight(const Date& d) noexcept {
  return days_from_civil(d) * 86'400'000'000'000LL;
}

}  // namespace auctionlab
