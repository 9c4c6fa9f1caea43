#pragma once

#include <optional>
#include <span>
#include <string>

#include "auctionlab/auction/auction.hpp"
#include "auctionlab/core/date.hpp"
#include "auctionlab/core/tick_table.hpp"
#include "auctionlab/engine/order_book.hpp"
#include "auctionlab/metrics/metrics.hpp"
#include "auctionlab/study/config.hpp"

namespace auctionlab::study {

struct DayStats {
  Quantity submitted{};
  Quantity traded{};
  Quantity rejected{};
  std::int64_t conservation_violations{};
  std::int64_t continuous_rejects{};
  std::int64_t auction_rejects{};
  std::int64_t tal_trades{};
  bool residual_crossed{};
};

struct DayResult {
  metrics::DailyStockMetrics metrics;
  std::optional<auction::AuctionResult> auction;
  DayStats stats;
  std::optional<std::string> skipped_auction_reason;
};

// Replays one stock-day: continuous events through the matching engine with
// minute snapshots and prevailing-quote capture, then the closing auction.
// Auction events (timestamps past continuous_close) may be submits, cancels
// or modifies; Euronext trading-at-last orders execute after the uncross but
// do not count into the auction volume.
DayResult run_day(const std::string& symbol, const Date& date,
                  std::span<const engine::EngineEvent> continuous_events,
                  std::span<const engine::EngineEvent> auction_events, const TickTable& table,
                  const SessionConfig& scfg, const metrics::MetricsConfig& mcfg,
                  bool third_friday = false, bool month_end = false);

}  // namespace auctionlab::study
