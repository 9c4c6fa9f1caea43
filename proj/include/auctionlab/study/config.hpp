#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "auctionlab/auction/auction.hpp"
#include "auctionlab/core/tick_table.hpp"
#include "auctionlab/core/types.hpp"

namespace auctionlab::study {

// `key = value` lines, '#' comments, whitespace-tolerant.
class KeyValueConfig {
 public:
  static KeyValueConfig from_file(const std::string& path);
  static KeyValueConfig from_string(const std::string& text);

  bool has(const std::string& key) const noexcept { return values_.contains(key); }
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

// One stock-day session: continuous trading window followed by the close.
// Times are nanoseconds from session midnight; the day runner shifts them by
// the civil date of the feed.
struct SessionConfig {
  auction::Venue venue{auction::Venue::euronext};
  TimestampNs continuous_open{9 * 3600LL * 1'000'000'000};
  TimestampNs continuous_close{17 * 3600LL * 1'000'000'000 + 30 * 60LL * 1'000'000'000};
  // euronext clearing window, defaults 17:35:00-17:35:30
  TimestampNs clear_window_begin{17 * 3600LL * 1'000'000'000 + 35 * 60LL * 1'000'000'000};
  TimestampNs clear_window_end{17 * 3600LL * 1'000'000'000 + 35 * 60LL * 1'000'000'000 +
                               30LL * 1'000'000'000};
  // us close phases, defaults 15:55 / 15:58 / 16:00
  TimestampNs imbalance_start{(15 * 3600LL + 55 * 60) * 1'000'000'000};
  TimestampNs io_start{(15 * 3600LL + 58 * 60) * 1'000'000'000};
  TimestampNs close_time{16 * 3600LL * 1'000'000'000};
  std::uint64_t auction_seed{1};
  std::optional<Price> inside_midpoint;
  // per-symbol previous close, the reference fallback when a day has no trade
  std::map<std::string, Price> previous_close;
  BandId band{1};
  int snapshot_depth{5};

  static SessionConfig from_kv(const KeyValueConfig& kv);
};

/// Parses "HH:MM" or "HH:MM:SS" into nanoseconds from midnight.
TimestampNs parse_time_of_day(const std::string& s);

}  // namespace auctionlab::study
