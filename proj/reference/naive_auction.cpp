#include "naive_auction.hpp"

#include <algorithm>
#include <cmath>

namespace auctionlab::ref {

using auction::AuctionOrderView;
using auction::ClearingOutcome;
using auction::Venue;

namespace {

std::int64_t iabs(std::int64_t v) { return v < 0 ? -v : v; }

Micros snap(Micros raw, Micros tick) {
  const Micros q = raw / tick;
  const Micros r = raw % tick;
  Micros units = q;
  if (2 * iabs(r) >= tick) units += raw >= 0 ? 1 : -1;
  return units * tick;
}

}  // namespace

std::optional<ClearingOutcome> naive_clearing(std::span<const AuctionOrderView> orders,
                                              Micros reference, Micros midpoint, Micros tick,
                                              Venue venue) {
  bool any_buy = false, any_sell = false;
  Micros lo = snap(reference, tick), hi = snap(reference, tick);
  for (const auto& o : orders) {
    if (o.remaining <= 0) continue;
    (o.side == Side::buy ? any_buy : any_sell) = true;
    if (!o.market_like && !o.imbalance_only) {
      lo = std::min(lo, o.limit);
      hi = std::max(hi, o.limit);
    }
  }
  if (!any_buy || !any_sell) return std::nullopt;
  if (venue == Venue::us_close) {
    lo = std::min(lo, snap(midpoint, tick));
    hi = std::max(hi, snap(midpoint, tick));
  }
  lo -= 2 * tick;
  hi += 2 * tick;

  std::optional<ClearingOutcome> best;
  for (Micros p = lo; p <= hi; p += tick) {
    std::int64_t demand = 0, supply = 0, io_buy = 0, io_sell = 0;
    for (const auto& o : orders) {
      if (o.remaining <= 0) continue;
      if (o.imbalance_only) {
        (o.side == Side::buy ? io_buy : io_sell) += o.remaining;
        continue;
      }
      if (o.side == Side::buy) {
        if (o.market_like || o.limit >= p) demand += o.remaining;
      } else {
        if (o.market_like || o.limit <= p) supply += o.remaining;
      }
    }
    if (venue == Venue::us_close) {
      if (demand > supply && p >= reference) {
        supply += std::min(io_sell, demand - supply);
      } else if (supply > demand && p <= reference) {
        demand += std::min(io_buy, supply - demand);
      }
    }
    const Quantity exec = std::min(demand, supply);
    const std::int64_t imb = demand - supply;
    if (exec <= 0) continue;
    if (!best || exec > best->volume) {
      best = ClearingOutcome{Price::from_micros(p), exec, imb};
      continue;
    }
    if (exec < best->volume) continue;
    // tie chain
    if (venue == Venue::us_close) {
      if (iabs(imb) < iabs(best->imbalance)) {
        best = ClearingOutcome{Price::from_micros(p), exec, imb};
        continue;
      }
      if (iabs(imb) > iabs(best->imbalance)) continue;
      const Micros d_new = iabs(p - midpoint);
      const Micros d_old = iabs(best->price.micros() - midpoint);
      if (d_new < d_old) best = ClearingOutcome{Price::from_micros(p), exec, imb};
      // equal distance: keep the lower price, i.e. the earlier one
    } else {
      const Micros d_new = iabs(p - reference);
      const Micros d_old = iabs(best->price.micros() - reference);
      if (d_new < d_old) best = ClearingOutcome{Price::from_micros(p), exec, imb};
    }
  }
  return best;
}

}  // namespace auctionlab::ref
