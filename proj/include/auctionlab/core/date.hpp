#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace auctionlab {

// Civil calendar date. Arithmetic uses the days-from-civil algorithm so the
// library never depends on the system locale or timezone database.
struct Date {
  std::int32_t year{1970};
  std::uint8_t month{1};  // 1..12
  std::uint8_t day{1};    // 1..31

  friend constexpr auto operator<=>(const Date&, const Date&) = default;
};

// Days since 1970-01-01 (negative before).
std::int64_t days_from_civil(const Date& d) noexcept;
Date civil_from_days(std::int64_t z) noexcept;

// 0 = Monday ... 6 = Sunday.
int weekday(const Date& d) noexcept;
inline bool is_friday(const Date& d) noexcept { return weekday(d) == 4; }

// Third Friday of the month the date belongs to: a Friday with day 15..21.
bool is_third_friday(const Date& d) noexcept;

std::string to_string(const Date& d);
Date parse_date(const std::string& s);  // YYYY-MM-DD

// Civil date of an epoch-nanosecond timestamp (UTC).
Date date_from_ns(std::int64_t ns) noexcept;
std::int64_t ns_at_midnight(const Date& d) noexcept;

}  // namespace auctionlab
