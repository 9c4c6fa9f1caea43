#include "auctionlab/engine/order_book.hpp"

#include <algorithm>

namespace auctionlab::engine {

namespace {

struct QuoteState {
  Micros bid_px = -1, ask_px = -1;
  Quantity bid_qty = 0, ask_qty = 0;
};

template <class BidMap, class AskMap>
QuoteState quote_state(const BidMap& bids, const AskMap& asks) {
  QuoteState q;
  if (!bids.empty()) {
    q.bid_px = bids.begin()->first;
    q.bid_qty = bids.begin()->second.total;
  }
  if (!asks.empty()) {
    q.ask_px = asks.begin()->first;
    q.ask_qty = asks.begin()->second.total;
  }
  return q;
}

}  // namespace

std::optional<Price> OrderBook::best_bid() const noexcept {
  if (bids_.empty()) return std::nullopt;
  return Price::from_micros(bids_.begin()->first);
}

std::optional<Price> OrderBook::best_ask() const noexcept {
  if (asks_.empty()) return std::nullopt;
  return Price::from_micros(asks_.begin()->first);
}

Quantity OrderBook::resting_quantity(Side s) const noexcept {
  Quantity total = 0;
  if (s == Side::buy) {
    for (const auto& [px, level] : bids_) total += level.total;
  } else {
    for (const auto& [px, level] : asks_) total += level.total;
  }
  return total;
}

bool OrderBook::price_ok(const Order& o) const {
  if (!o.limit) return true;
  if (!grid_) return true;
  const Micros tick = grid_->lookup(o.limit->micros(), band_);
  return on_grid(o.limit->micros(), tick);
}

ApplyResult OrderBook::apply(const EngineEvent& e) {
  const QuoteState before = quote_state(bids_, asks_);
  const Quantity resting_before = total_resting_;
  ApplyResult r;
  switch (e.kind) {
    case EventKind::submit: r = submit(e.order); break;
    case EventKind::cancel: r = cancel(e.order.id); break;
    case EventKind::modify: r = modify(e.order); break;
  }
  r.resting_delta = total_resting_ - resting_before;
  const QuoteState after = quote_state(bids_, asks_);
  r.best_quote_changed = before.bid_px != after.bid_px || before.ask_px != after.ask_px;
  r.best_quote_changed_any = r.best_quote_changed || before.bid_qty != after.bid_qty ||
                             before.ask_qty != after.ask_qty;
  if (r.accepted()) {
    ++event_counter_;
    if (r.best_quote_changed) ++quote_price_updates_;
    if (r.best_quote_changed_any) ++quote_any_updates_;
  }
  return r;
}

ApplyResult OrderBook::submit(const Order& o) {
  ApplyResult r;
  if (!order_shape_ok(o) || index_.contains(o.id)) {
    r.reject = RejectReason::bad_order_shape;
    r.rejected_quantity = o.quantity;
    return r;
  }
  if (o.kind != OrderKind::limit && o.kind != OrderKind::market) {
    r.reject = RejectReason::unsupported_kind;
    r.rejected_quantity = o.quantity;
    return r;
  }
  if (!price_ok(o)) {
    r.reject = RejectReason::off_grid_price;
    r.rejected_quantity = o.quantity;
    return r;
  }
  if (o.kind == OrderKind::market) {
    const bool empty = (o.side == Side::buy) ? asks_.empty() : bids_.empty();
    if (empty) {
      r.reject = RejectReason::empty_opposite_side;
      r.rejected_quantity = o.quantity;
      return r;
    }
  }

  Order incoming = o;
  if (incoming.side == Side::buy) {
    match(incoming, asks_, r.trades);
  } else {
    match(incoming, bids_, r.trades);
  }
  if (incoming.quantity > 0) {
    if (incoming.kind == OrderKind::limit) {
      rest(incoming);
    } else {
      // market residual beyond visible depth never rests
      r.rejected_quantity = incoming.quantity;
    }
  }
  return r;
}

template <class OppMap>
void OrderBook::match(Order& incoming, OppMap& opp, std::vector<Trade>& trades) {
  while (incoming.quantity > 0 && !opp.empty()) {
    auto level_it = opp.begin();
    const Micros level_px = level_it->first;
    if (incoming.limit) {
      const bool crosses = (incoming.side == Side::buy) ? incoming.limit->micros() >= level_px
                                                        : incoming.limit->micros() <= level_px;
      if (!crosses) break;
    }
    PriceLevel& level = level_it->second;
    while (incoming.quantity > 0 && !level.queue.empty()) {
      Resting& maker = level.queue.front();
      const Quantity fill = std::min(incoming.quantity, maker.quantity);
      trades.push_back(Trade{Price::from_micros(level_px), fill,
                             incoming.side == Side::buy, incoming.timestamp});
      incoming.quantity -= fill;
      maker.quantity -= fill;
      level.total -= fill;
      total_resting_ -= fill;
      if (maker.quantity == 0) {
        index_.erase(maker.id);
        level.queue.pop_front();
      }
    }
    if (level.queue.empty()) opp.erase(level_it);
  }
}

void OrderBook::rest(const Order& o) {
  const Micros px = o.limit->micros();
  PriceLevel& level = (o.side == Side::buy) ? bids_[px] : asks_[px];
  level.queue.push_back(Resting{o.id, o.quantity, o.timestamp});
  level.total += o.quantity;
  total_resting_ += o.quantity;
  index_.emplace(o.id, Locator{o.side, px, std::prev(level.queue.end())});
}

void OrderBook::erase(const Locator& loc) {
  total_resting_ -= loc.it->quantity;
  if (loc.side == Side::buy) {
    auto it = bids_.find(loc.price);
    it->second.total -= loc.it->quantity;
    it->second.queue.erase(loc.it);
    if (it->second.queue.empty()) bids_.erase(it);
  } else {
    auto it = asks_.find(loc.price);
    it->second.total -= loc.it->quantity;
    it->second.queue.erase(loc.it);
    if (it->second.queue.empty()) asks_.erase(it);
  }
}

ApplyResult OrderBook::cancel(OrderId id) {
  ApplyResult r;
  auto it = index_.find(id);
  if (it == index_.end()) {
    r.reject = RejectReason::unknown_order_id;
    return r;
  }
  erase(it->second);
  index_.erase(it);
  return r;
}

ApplyResult OrderBook::modify(const Order& o) {
  ApplyResult r;
  auto it = index_.find(o.id);
  if (it == index_.end()) {
    r.reject = RejectReason::unknown_order_id;
    return r;
  }
  if (!order_shape_ok(o) || o.kind != OrderKind::limit) {
    r.reject = RejectReason::bad_order_shape;
    r.rejected_quantity = o.quantity;
    return r;
  }
  if (!price_ok(o)) {
    r.reject = RejectReason::off_grid_price;
    r.rejected_quantity = o.quantity;
    return r;
  }
  const Locator loc = it->second;
  const bool same_price = loc.price == o.limit->micros();
  const bool shrink = o.quantity < loc.it->quantity;
  if (same_price && shrink) {
    // size-down in place keeps time priority
    PriceLevel& level = (loc.side == Side::buy) ? bids_.at(loc.price) : asks_.at(loc.price);
    level.total -= loc.it->quantity - o.quantity;
    total_resting_ -= loc.it->quantity - o.quantity;
    loc.it->quantity = o.quantity;
    return r;
  }
  // price change or size-up re-enters the queue as a fresh arrival
  erase(loc);
  index_.erase(it);
  Order fresh = o;
  fresh.side = loc.side;
  return submit(fresh);
}

BookSnapshot OrderBook::snapshot(TimestampNs t, int levels) const {
  BookSnapshot s;
  s.timestamp = t;
  s.depth_levels = levels;
  s.bids.reserve(static_cast<std::size_t>(levels));
  s.asks.reserve(static_cast<std::size_t>(levels));
  int n = 0;
  for (const auto& [px, level] : bids_) {
    if (n++ >= levels) break;
    s.bids.push_back(BookLevel{Price::from_micros(px), level.total});
  }
  n = 0;
  for (const auto& [px, level] : asks_) {
    if (n++ >= levels) break;
    s.asks.push_back(BookLevel{Price::from_micros(px), level.total});
  }
  return s;
}

}  // namespace auctionlab::engine
