#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "auctionlab/core/types.hpp"

namespace auctionlab::auction {

enum class Venue : std::uint8_t { euronext, us_close };

enum class Phase : std::uint8_t {
  accumulating,
  imbalance_window,  // us: 15:55-15:58, no cancels, LOC capped
  io_window,         // us: 15:58-16:00, imbalance orders only
  cleared,
  trading_at_last,   // euronext post-clear phase
  closed,
};

enum class AuctionReject : std::uint8_t {
  none,
  bad_order_shape,
  wrong_kind_for_venue,
  phase_violation,
  unknown_order_id,
  duplicate_id,
  not_clearing_price,  // trading-at-last order away from the close
};

const char* to_string(Venue v) noexcept;
const char* to_string(AuctionReject r) noexcept;

struct AuctionConfig {
  Venue venue{Venue::euronext};
  // euronext: clearing fires at a uniform random instant in this window
  TimestampNs clear_window_begin{};
  TimestampNs clear_window_end{};
  // us_close phase boundaries
  TimestampNs imbalance_start{};
  TimestampNs io_start{};
  TimestampNs close_time{};
  std::uint64_t rng_seed{0};
  Price reference_price{};                 // last automated trade, else previous close
  std::optional<Price> inside_midpoint{};  // us proximity target; defaults to reference
  Micros tick{10'000};                     // grid step in force around the reference
  int residual_depth{5};
};

struct IndicativeQuote {
  Price price;
  Quantity volume{};
};

struct ClearingOutcome {
  Price price;
  Quantity volume{};
  std::int64_t imbalance{};  // demand minus supply at the chosen price
};

struct AuctionResult {
  bool cleared{};
  Price clearing_price;
  Quantity executed_volume{};
  std::vector<Trade> trades;
  BookSnapshot residual_book;
  std::uint64_t indicative_updates{};
  std::int64_t imbalance_at_clear{};
  // executed volume split used by the volume-composition report
  Micros executed_market_value{};
  Micros executed_limit_value{};
};

// Order view the clearing computation works on: side, price constraint and
// remaining size, nothing else.
struct AuctionOrderView {
  Side side{Side::buy};
  bool market_like{};     // executes at any price
  bool imbalance_only{};  // us IO bucket: fills last, against the surviving imbalance
  Micros limit{};         // effective limit when not market_like (IO carries the reference)
  Quantity remaining{};
};

struct ClearingInputs {
  std::span<const AuctionOrderView> orders;
  Micros reference{};
  Micros midpoint{};  // us tie-break target; ignored for euronext
  Micros tick{};
  Venue venue{Venue::euronext};
};

// Single-price clearing with the venue tie-break chain:
//   euronext: max volume -> closest to reference -> lower price
//   us_close: max volume -> min |imbalance| -> closest to midpoint -> lower price
// Executable volume is evaluated on candidate prices (order limits, snapped
// reference/midpoint) plus one-tick plateau representatives, which is exact
// against a full grid scan. Returns nullopt when nothing can cross.
std::optional<ClearingOutcome> compute_clearing(const ClearingInputs& in);

// Accumulating order collection shared by both venues. Both sides may cross;
// nothing matches until clearing.
class CallBook {
 public:
  struct Entry {
    Order order;
    Micros effective_limit{};  // capped LOC / IO-at-reference live here
    std::uint64_t seq{};
    Quantity remaining{};
    bool live{};
  };

  AuctionReject add(const Order& o, Micros effective_limit);
  AuctionReject cancel(OrderId id);
  // price change or size increase re-enters at the back of the time queue
  AuctionReject modify(const Order& o, Micros effective_limit);

  std::vector<AuctionOrderView> views() const;
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::vector<Entry>& entries() noexcept { return entries_; }
  bool empty() const noexcept;

 private:
  std::vector<Entry> entries_;
  std::unordered_map<OrderId, std::size_t> index_;
  std::uint64_t next_seq_{0};
};

struct AllocationResult {
  std::vector<Trade> trades;
  Quantity allocated{};
  Micros market_value{};
  Micros limit_value{};
};

// Walks both sides of the book at the clearing price: market-like orders in
// time priority, then limit orders in price-time priority, IO last; at most
// one partial fill per side. Decrements `remaining` on the entries it fills.
AllocationResult allocate_at_clearing(CallBook& book, Price clearing, Quantity volume,
                                      std::int64_t imbalance, TimestampNs ts);

// Aggregates surviving limit orders into a ladder snapshot.
BookSnapshot residual_snapshot(const CallBook& book, TimestampNs ts, int levels);

// Euronext closing auction: call phase with a continuous indicative stream,
// volume-maximizing uncross at a seeded random instant, then Trading-At-Last.
class EuronextAuction {
 public:
  explicit EuronextAuction(const AuctionConfig& cfg);

  TimestampNs clearing_time() const noexcept { return clearing_time_; }
  Phase phase() const noexcept { return phase_; }
  bool due(TimestampNs ts) const noexcept { return ts >= clearing_time_; }

  AuctionReject submit(const Order& o);
  AuctionReject cancel(OrderId id, TimestampNs ts);
  AuctionReject modify(const Order& o);

  std::optional<IndicativeQuote> indicative() const;
  std::uint64_t indicative_updates() const noexcept { return indicative_updates_; }

  AuctionResult clear();

  struct TalResult {
    AuctionReject status{AuctionReject::none};
    std::vector<Trade> trades;
  };
  TalResult trading_at_last(const Order& o);
  Quantity tal_resting(Side s) const noexcept;

 private:
  void refresh_indicative();

  AuctionConfig cfg_;
  TimestampNs clearing_time_{};
  Phase phase_{Phase::accumulating};
  CallBook book_;
  std::optional<Price> last_indicative_;
  std::uint64_t indicative_updates_{0};
  Price clearing_price_;
  // trading-at-last interest, time priority
  struct TalOrder {
    OrderId id{};
    Quantity remaining{};
    TimestampNs timestamp{};
  };
  std::vector<TalOrder> tal_buys_;
  std::vector<TalOrder> tal_sells_;
};

struct ImbalancePublication {
  TimestampNs timestamp{};
  std::optional<Side> heavy_side;  // nullopt when balanced
  Quantity size{};
};

// NASDAQ/NYSE-style close: MOC/LOC all day, imbalance window with LOC
// capping, an IO-only window, then clearing with the three-step tie-break.
class UsCloseAuction {
 public:
  explicit UsCloseAuction(const AuctionConfig& cfg);

  Phase phase() const noexcept { return phase_; }
  void advance_to(TimestampNs ts);

  AuctionReject submit(const Order& o);
  AuctionReject cancel(OrderId id, TimestampNs ts);
  AuctionReject modify(const Order& o);

  std::optional<IndicativeQuote> indicative() const;
  std::uint64_t indicative_updates() const noexcept { return indicative_updates_; }
  const std::vector<ImbalancePublication>& publications() const noexcept { return pubs_; }
  Price cutoff_reference() const noexcept { return cutoff_reference_; }

  AuctionResult clear();

 private:
  void refresh_indicative();
  void publish(TimestampNs ts);
  ClearingInputs inputs(std::span<const AuctionOrderView> views) const;

  AuctionConfig cfg_;
  Phase phase_{Phase::accumulating};
  CallBook book_;
  Price cutoff_reference_;  // frozen at the imbalance-window boundary
  std::optional<Price> last_indicative_;
  std::uint64_t indicative_updates_{0};
  std::vector<ImbalancePublication> pubs_;
};

}  // namespace auctionlab::auction
