#include "auctionlab/study/calendar.hpp"

#include <algorithm>

#include "auctionlab/core/errors.hpp"

namespace auctionlab::study {

TradingCalendar::TradingCalendar(std::vector<Date> days) : days_(std::move(days)) {
  std::sort(days_.begin(), days_.end());
  days_.erase(std::unique(days_.begin(), days_.end()), days_.end());
  if (days_.empty()) throw ConfigError("empty trading calendar");
}

TradingCalendar TradingCalendar::weekdays(const Date& from, const Date& to) {
  std::vector<Date> days;
  for (std::int64_t z = days_from_civil(from); z <= days_from_civil(to); ++z) {
    const Date d = civil_from_days(z);
    if (weekday(d) < 5) days.push_back(d);
  }
  return TradingCalendar(std::move(days));
}

bool TradingCalendar::contains(const Date& d) const noexcept {
  return std::binary_search(days_.begin(), days_.end(), d);
}

bool TradingCalendar::is_month_end(const Date& d) const noexcept {
  if (!contains(d)) return false;
  // any later trading day in the same month?
  auto it = std::upper_bound(days_.begin(), days_.end(), d);
  return it == days_.end() || it->year != d.year || it->month != d.month;
}

CalendarFlags TradingCalendar::flags(const Date& d) const noexcept {
  return CalendarFlags{is_third_friday(d), is_month_end(d)};
}

CalendarFilterResult calendar_filter(const std::vector<Date>& dates) {
  TradingCalendar cal{dates};
  CalendarFilterResult out;
  for (const Date& d : dates) {
    if (is_third_friday(d)) {
      out.excluded.emplace_back(d, "third_friday");
    } else if (cal.is_month_end(d)) {
      out.excluded.emplace_back(d, "month_end");
    } else {
      out.retained.push_back(d);
    }
  }
  return out;
}

}  // namespace auctionlab::study
