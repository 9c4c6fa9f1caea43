#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "auctionlab/core/price.hpp"

namespace auctionlab {

using OrderId = std::uint64_t;
using StockId = std::uint32_t;
using Quantity = std::int64_t;    // shares
using TimestampNs = std::int64_t; // caller-supplied nanoseconds

enum class Side : std::uint8_t { buy, sell };

inline Side opposite(Side s) noexcept { return s == Side::buy ? Side::sell : Side::buy; }

enum class OrderKind : std::uint8_t {
  limit,
  market,
  market_on_close,
  limit_on_close,
  imbalance_only,
  trading_at_last,
};

// limit-like kinds must carry a limit price, market-like kinds must not.
// trading_at_last may carry one, but only the clearing price is accepted.
inline bool is_limit_like(OrderKind k) noexcept {
  return k == OrderKind::limit || k == OrderKind::limit_on_close;
}
inline bool is_market_like(OrderKind k) noexcept {
  return k == OrderKind::market || k == OrderKind::market_on_close ||
         k == OrderKind::imbalance_only;
}

struct Order {
  OrderId id{};
  StockId stock{};
  Side side{Side::buy};
  OrderKind kind{OrderKind::limit};
  std::optional<Price> limit;
  Quantity quantity{};
  TimestampNs timestamp{};
};

/// Field-shape invariants: quantity positive, limit present exactly when the
/// kind requires one.
inline bool order_shape_ok(const Order& o) noexcept {
  if (o.quantity <= 0) return false;
  if (is_limit_like(o.kind)) return o.limit.has_value();
  if (is_market_like(o.kind)) return !o.limit.has_value();
  return true;  // trading_at_last: optional, validated against the clearing price
}

struct Trade {
  Price price;
  Quantity quantity{};
  bool buyer_initiated{};
  TimestampNs timestamp{};

  Micros value_micros() const noexcept { return price.micros() * quantity; }
  double value_eur() const noexcept { return eur_from_micros(value_micros()); }
};

struct BookLevel {
  Price price;
  Quantity quantity{};
};

// Timestamped two-sided ladder, best level first on both sides. A side may
// be empty, in which case the snapshot is flagged one-sided and the metrics
// layer decides what to do with it.
struct BookSnapshot {
  TimestampNs timestamp{};
  std::vector<BookLevel> bids;  // price descending
  std::vector<BookLevel> asks;  // price ascending
  int depth_levels{};           // requested depth

  bool two_sided() const noexcept { return !bids.empty() && !asks.empty(); }
  bool one_sided() const noexcept { return !two_sided(); }

  std::optional<Price> best_bid() const noexcept {
    if (bids.empty()) return std::nullopt;
    return bids.front().price;
  }
  std::optional<Price> best_ask() const noexcept {
    if (asks.empty()) return std::nullopt;
    return asks.front().price;
  }
  // BB + BA in micros; the exact denominator for spread/impact arithmetic.
  std::optional<Micros> quote_sum_micros() const noexcept {
    if (!two_sided()) return std::nullopt;
    return bids.front().price.micros() + asks.front().price.micros();
  }
  std::optional<double> mid_eur() const noexcept {
    auto s = quote_sum_micros();
    if (!s) return std::nullopt;
    return eur_from_micros(*s) / 2.0;
  }
};

}  // namespace auctionlab
