#pragma once

#include <cstdint>
#include <list>
#include <map>
#include <unordered_map>
#include <vector>

#include "auctionlab/core/tick_table.hpp"
#include "auctionlab/core/types.hpp"

namespace auctionlab::engine {

enum class EventKind : std::uint8_t { submit, cancel, modify };

struct EngineEvent {
  EventKind kind{EventKind::submit};
  Order order;  // submit: full order; cancel: id is enough; modify: new terms, same id
};

enum class RejectReason : std::uint8_t {
  none,
  unknown_order_id,
  empty_opposite_side,
  off_grid_price,
  bad_order_shape,
  unsupported_kind,
};

struct ApplyResult {
  std::vector<Trade> trades;
  bool best_quote_changed{};      // best bid or ask *price* moved
  bool best_quote_changed_any{};  // price or size at the best moved
  RejectReason reject{RejectReason::none};
  Quantity rejected_quantity{};   // unfillable market residual, or full size on reject
  Quantity resting_delta{};       // signed change in total resting shares

  bool accepted() const noexcept { return reject == RejectReason::none; }
  Quantity traded_quantity() const noexcept {
    Quantity q = 0;
    for (const Trade& t : trades) q += t.quantity;
    return q;
  }
};

// Continuous double auction with price-time priority. One instance is
// single-threaded by contract; it never reads a clock, so identical event
// streams replay to identical tapes.
class OrderBook {
 public:
  OrderBook() = default;
  // With a grid attached, incoming limit prices are validated against the
  // tick in force at that price.
  OrderBook(const TickTable* grid, BandId band) : grid_(grid), band_(band) {}

  ApplyResult apply(const EngineEvent& e);

  BookSnapshot snapshot(TimestampNs t, int levels) const;

  std::optional<Price> best_bid() const noexcept;
  std::optional<Price> best_ask() const noexcept;
  Quantity resting_quantity(Side s) const noexcept;
  Quantity total_resting() const noexcept { return total_resting_; }
  std::size_t order_count() const noexcept { return index_.size(); }

  std::uint64_t event_counter() const noexcept { return event_counter_; }
  // Daily stability counters: price-move-only updates (the headline count)
  // and any-change-at-best updates (the secondary reading).
  std::uint64_t quote_price_updates() const noexcept { return quote_price_updates_; }
  std::uint64_t quote_any_updates() const noexcept { return quote_any_updates_; }

 private:
  struct Resting {
    OrderId id{};
    Quantity quantity{};
    TimestampNs timestamp{};
  };
  struct PriceLevel {
    Quantity total{};
    std::list<Resting> queue;
  };
  struct Locator {
    Side side{};
    Micros price{};
    std::list<Resting>::iterator it;
  };

  using BidMap = std::map<Micros, PriceLevel, std::greater<>>;
  using AskMap = std::map<Micros, PriceLevel, std::less<>>;

  ApplyResult submit(const Order& o);
  ApplyResult cancel(OrderId id);
  ApplyResult modify(const Order& o);

  template <class OppMap>
  void match(Order& incoming, OppMap& opp, std::vector<Trade>& trades);
  void rest(const Order& o);
  void erase(const Locator& loc);
  bool price_ok(const Order& o) const;

  BidMap bids_;
  AskMap asks_;
  std::unordered_map<OrderId, Locator> index_;
  const TickTable* grid_{nullptr};
  BandId band_{0};
  Quantity total_resting_{0};
  std::uint64_t event_counter_{0};
  std::uint64_t quote_price_updates_{0};
  std::uint64_t quote_any_updates_{0};
};

}  // namespace auctionlab::engine
