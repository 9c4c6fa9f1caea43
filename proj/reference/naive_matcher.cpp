#include "naive_matcher.hpp"

#include <algorithm>

namespace auctionlab::ref {

std::optional<std::size_t> NaiveMatcher::best_opposite(
    Side incoming_side, const std::optional<Price>& limit) const {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < live_.size(); ++i) {
    const Live& cand = live_[i];
    if (cand.order.side == incoming_side || cand.remaining <= 0) continue;
    const Micros px = cand.order.limit->micros();
    if (limit) {
      const bool crosses =
          incoming_side == Side::buy ? px <= limit->micros() : px >= limit->micros();
      if (!crosses) continue;
    }
    if (!best) {
      best = i;
      continue;
    }
    const Live& cur = live_[*best];
    const Micros cur_px = cur.order.limit->micros();
    const bool better_price = incoming_side == Side::buy ? px < cur_px : px > cur_px;
    const bool same_price = px == cur_px;
    if (better_price ||
        (same_price && (cand.order.timestamp < cur.order.timestamp ||
                        (cand.order.timestamp == cur.order.timestamp && cand.seq < cur.seq)))) {
      best = i;
    }
  }
  return best;
}

NaiveMatcher::Result NaiveMatcher::submit(Order o) {
  Result r;
  if (o.kind == OrderKind::market) {
    const bool any_opposite = std::any_of(live_.begin(), live_.end(), [&](const Live& l) {
      return l.order.side != o.side && l.remaining > 0;
    });
    if (!any_opposite) {
      r.rejected = true;
      r.rejected_quantity = o.quantity;
      return r;
    }
  }
  while (o.quantity > 0) {
    const auto best = best_opposite(o.side, o.limit);
    if (!best) break;
    Live& maker = live_[*best];
    const Quantity fill = std::min(o.quantity, maker.remaining);
    r.trades.push_back(
        Trade{*maker.order.limit, fill, o.side == Side::buy, o.timestamp});
    maker.remaining -= fill;
    o.quantity -= fill;
  }
  std::erase_if(live_, [](const Live& l) { return l.remaining <= 0; });
  if (o.quantity > 0) {
    if (o.kind == OrderKind::limit) {
      live_.push_back(Live{o, o.quantity, next_seq_++});
    } else {
      r.rejected_quantity = o.quantity;
    }
  }
  return r;
}

NaiveMatcher::Result NaiveMatcher::apply(const engine::EngineEvent& e) {
  Result r;
  switch (e.kind) {
    case engine::EventKind::submit:
      return submit(e.order);
    case engine::EventKind::cancel: {
      const auto it = std::find_if(live_.begin(), live_.end(), [&](const Live& l) {
        return l.order.id == e.order.id;
      });
      if (it == live_.end()) {
        r.rejected = true;
      } else {
        live_.erase(it);
      }
      return r;
    }
    case engine::EventKind::modify: {
      const auto it = std::find_if(live_.begin(), live_.end(), [&](const Live& l) {
        return l.order.id == e.order.id;
      });
      if (it == live_.end() || e.order.kind != OrderKind::limit || !e.order.limit) {
        r.rejected = true;
        return r;
      }
      const bool same_price = it->order.limit->micros() == e.order.limit->micros();
      const bool shrink = e.order.quantity < it->remaining;
      if (same_price && shrink) {
        it->remaining = e.order.quantity;
        it->order.quantity = e.order.quantity;
        return r;
      }
      Order fresh = e.order;
      fresh.side = it->order.side;
      live_.erase(it);
      return submit(fresh);
    }
  }
  return r;
}

BookSnapshot NaiveMatcher::snapshot(TimestampNs t, int levels) const {
  BookSnapshot s;
  s.timestamp = t;
  s.depth_levels = levels;
  // aggregate by price, then order the halves
  std::vector<std::pair<Micros, Quantity>> bids, asks;
  for (const Live& l : live_) {
    auto& side = l.order.side == Side::buy ? bids : asks;
    const Micros px = l.order.limit->micros();
    auto it = std::find_if(side.begin(), side.end(),
                           [px](const auto& lvl) { return lvl.first == px; });
    if (it == side.end()) {
      side.emplace_back(px, l.remaining);
    } else {
      it->second += l.remaining;
    }
  }
  std::sort(bids.begin(), bids.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::sort(asks.begin(), asks.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < bids.size() && i < static_cast<std::size_t>(levels); ++i) {
    s.bids.push_back(BookLevel{Price::from_micros(bids[i].first), bids[i].second});
  }
  for (std::size_t i = 0; i < asks.size() && i < static_cast<std::size_t>(levels); ++i) {
    s.asks.push_back(BookLevel{Price::from_micros(asks[i].first), asks[i].second});
  }
  return s;
}

Quantity NaiveMatcher::resting_quantity(Side s) const {
  Quantity q = 0;
  for (const Live& l : live_) {
    if (l.order.side == s) q += l.remaining;
  }
  return q;
}

}  // namespace auctionlab::ref
