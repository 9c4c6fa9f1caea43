#pragma once

#include <cstdint>
#include <vector>

#include "auctionlab/core/tick_table.hpp"
#include "auctionlab/core/types.hpp"
#include "auctionlab/engine/order_book.hpp"

namespace auctionlab::sim {

// Zero-intelligence order flow: every stochastic draw derives from rng_seed
// only, and limit prices are drawn in continuous currency so the same raw
// flow can be snapped onto different tick grids (matched-draw design).
struct FlowParams {
  std::uint64_t rng_seed{1};
  int session_minutes{60};
  int auction_minutes{5};
  double events_per_minute{120.0};
  double p_limit{0.62};            // submit-limit share of events
  double p_market{0.18};           // submit-market share; rest are cancels
  double limit_dispersion{0.003};  // relative placement dispersion around fundamental
  double size_mean{120.0};         // exponential order-size mean, shares
  int auction_orders{80};
  double auction_market_share{0.35};
  double fundamental_start_eur{100.0};
  double fundamental_vol{2.0e-5};  // per-event lognormal step

  void validate() const;  // throws ConfigError
};

enum class RawKind : std::uint8_t { submit_limit, submit_market, cancel };

struct RawEvent {
  TimestampNs ts{};
  RawKind kind{RawKind::submit_limit};
  Side side{Side::buy};
  double raw_price_eur{};  // pre-snap placement price (limit submissions)
  Quantity quantity{};
  OrderId id{};      // submissions
  OrderId victim{};  // cancels; 0 = no live target at draw time
};

struct RawFlow {
  std::vector<RawEvent> continuous;
  std::vector<RawEvent> auction;  // limit/market orders for the call phase
  TimestampNs continuous_end{};
  TimestampNs auction_end{};
  double fundamental_end_eur{};
};

RawFlow generate_raw_flow(const FlowParams& p);

struct SessionStreams {
  std::vector<engine::EngineEvent> continuous;
  std::vector<engine::EngineEvent> auction;  // submit events for the call phase
  TimestampNs continuous_end{};
  TimestampNs auction_end{};
};

// Snaps the raw flow onto the grid (round-nearest) and shapes it into engine
// events plus call-phase orders.
SessionStreams materialize(const RawFlow& raw, const TickTable& table, BandId band,
                           StockId stock);

SessionStreams generate_session(const FlowParams& p, const TickTable& table, BandId band,
                                StockId stock);

}  // namespace auctionlab::sim
