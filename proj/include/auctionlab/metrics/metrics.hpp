#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "auctionlab/auction/auction.hpp"
#include "auctionlab/core/date.hpp"
#include "auctionlab/core/types.hpp"

namespace auctionlab::metrics {

// ---------------------------------------------------------------------------
// Per-observation measures. Everything here is a pure function; undefined
// cases come back as nullopt, never NaN.

/// (BA - BB) / MP in basis points; nullopt on a one-sided book.
std::optional<double> quoted_spread_bps(const BookSnapshot& s);

// Signed trade-vs-midpoint deviation, doubled: 2 I (P - MP) / MP in bps,
// I = +1 for buyer-initiated. `quote_sum` is BB + BA of the prevailing quote
// in micros.
double effective_spread_bps(const Trade& t, Micros quote_sum);

struct DepthVolumes {
  double vol1_eur{};
  double vol3_eur{};
  double vol5_eur{};
};
// Euro volume on the top 1/3/5 levels, both sides; missing depth counts zero.
DepthVolumes depth_volumes(const BookSnapshot& s);

// Midpoint-relative cost of an x-euro market order walking the book:
// ((A_x - MP) + (MP - B_x)) / (2 MP) in bps. nullopt when either side lacks
// x euros of visible depth or when the book is one-sided.
std::optional<double> price_impact_bps(const BookSnapshot& s, Micros notional_micros);

/// Sum of squared log returns over a mid-price series; needs >= 2 points.
std::optional<double> volatility(std::span<const double> mids);

/// log(close) - log(vwap) in bps.
double auction_return_bps(double close_eur, double vwap_last5_eur);

/// log(vwap next day) - log(close) in bps.
double overnight_return_bps(double close_eur, double vwap_last5_next_eur);

/// |R| per million euros transacted; nullopt when volume is not positive.
std::optional<double> illiquidity_ratio(double abs_return_bps, double auction_volume_meur);

// ---------------------------------------------------------------------------
// Daily aggregation

struct MetricsConfig {
  std::vector<double> impact_notionals_eur{10'000.0, 20'000.0, 50'000.0, 100'000.0};
  TimestampNs vwap_window_ns{5LL * 60 * 1'000'000'000};
};

struct ImpactCell {
  double notional_eur{};
  std::optional<double> mean_bps;
  int undefined_minutes{};
};

struct AuctionBlock {
  bool present{};
  std::optional<double> close_price_eur;
  std::optional<double> auction_return_bps;
  std::optional<double> abs_auction_return_bps;
  std::optional<double> auction_volume_eur;
  std::optional<double> post_auction_spread_bps;
  std::optional<double> post_vol1_eur, post_vol3_eur, post_vol5_eur;
  std::optional<double> illiquidity;
  std::int64_t n_indicative_updates{};
  double executed_market_value_eur{};
  double executed_limit_value_eur{};
};

// One stock-day of every measured quantity; the panel observation payload.
struct DailyStockMetrics {
  std::string symbol;
  Date date{};

  std::optional<double> quoted_spread_bps;
  std::optional<double> effective_spread_bps;  // trade-size weighted
  std::optional<double> bidask_vol1_eur, bidask_vol3_eur, bidask_vol5_eur;
  std::vector<ImpactCell> price_impact;
  std::optional<double> volatility;
  std::int64_t n_quote_updates{};
  std::int64_t n_quote_updates_any{};
  std::int64_t n_trades{};
  int n_trades_excluded{};  // no two-sided prevailing quote
  std::optional<double> avg_trade_size_eur;
  double transacted_volume_eur{};

  AuctionBlock auction;
  std::optional<double> vwap_last5_eur;
  bool vwap_fallback{};

  bool third_friday{};
  bool month_end{};
  int one_sided_minutes{};
};

struct TradeObs {
  Trade trade;
  std::optional<Micros> quote_sum;  // BB + BA prevailing at trade time
};

struct DayInputs {
  std::string symbol;
  Date date{};
  std::vector<BookSnapshot> minute_snapshots;
  std::vector<TradeObs> trades;  // continuous tape in time order
  std::int64_t n_quote_updates{};
  std::int64_t n_quote_updates_any{};
  TimestampNs continuous_end{};
  std::optional<auction::AuctionResult> auction;
  bool third_friday{};
  bool month_end{};
};

// Minute metrics averaged over the continuous session, counts summed, the
// auction block filled from the auction result. Minutes with a one-sided
// book are dropped from every average and counted; the volatility series
// bridges over them.
DailyStockMetrics aggregate_day(const DayInputs& in, const MetricsConfig& cfg);

}  // namespace auctionlab::metrics
