#pragma once

#include <string>
#include <utility>
#include <vector>

#include "auctionlab/core/date.hpp"

namespace auctionlab::study {

struct CalendarFlags {
  bool third_friday{};
  bool month_end{};
};

// Trading-day calendar; an input, not computed from exchange holiday rules.
class TradingCalendar {
 public:
  explicit TradingCalendar(std::vector<Date> days);

  /// Every Monday-Friday in [from, to], a holiday-free synthetic calendar.
  static TradingCalendar weekdays(const Date& from, const Date& to);

  const std::vector<Date>& days() const noexcept { return days_; }
  bool contains(const Date& d) const noexcept;
  /// Last trading day of the date's month within this calendar.
  bool is_month_end(const Date& d) const noexcept;
  CalendarFlags flags(const Date& d) const noexcept;

 private:
  std::vector<Date> days_;  // sorted, unique
};

// Drops third Fridays and last trading days of each month; the excluded
// dates come back with a machine-readable reason.
struct CalendarFilterResult {
  std::vector<Date> retained;
  std::vector<std::pair<Date, std::string>> excluded;
};
CalendarFilterResult calendar_filter(const std::vector<Date>& dates);

}  // namespace auctionlab::study
