#include "auctionlab/auction/auction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "auctionlab/core/errors.hpp"

namespace auctionlab::auction {

const char* to_string(Venue v) noexcept {
  return v == Venue::euronext ? "euronext" : "us_close";
}

const char* to_string(AuctionReject r) noexcept {
  switch (r) {
    case AuctionReject::none: return "none";
    case AuctionReject::bad_order_shape: return "bad_order_shape";
    case AuctionReject::wrong_kind_for_venue: return "wrong_kind_for_venue";
    case AuctionReject::phase_violation: return "phase_violation";
    case AuctionReject::unknown_order_id: return "unknown_order_id";
    case AuctionReject::duplicate_id: return "duplicate_id";
    case AuctionReject::not_clearing_price: return "not_clearing_price";
  }
  return "?";
}

namespace {

std::int64_t iabs(std::int64_t v) { return v < 0 ? -v : v; }

Micros snap_micros(Micros raw, Micros tick) {
  const Micros quot = raw / tick;
  const Micros rem = raw % tick;
  Micros units = quot;
  if (2 * iabs(rem) >= tick) units += (raw >= 0) ? 1 : -1;
  return units * tick;
}

struct SideTotals {
  Quantity market{};                              // MOC / plain market
  Quantity io{};                                  // imbalance-only
  std::vector<std::pair<Micros, Quantity>> limits;  // (effective limit, size)
  std::vector<Micros> px;                         // sorted limit prices
  std::vector<Quantity> cum;                      // prefix sums along px
};

// Demand at p: market buys plus buy limits at or above p.
Quantity demand_at(const SideTotals& buys, Micros p) {
  // px sorted descending, cum[i] = total size of the i+1 most aggressive levels
  auto it = std::upper_bound(buys.px.begin(), buys.px.end(), p, std::greater<>());
  const std::size_t k = static_cast<std::size_t>(it - buys.px.begin());
  return buys.market + (k == 0 ? 0 : buys.cum[k - 1]);
}

// Supply at p: market sells plus sell limits at or below p.
Quantity supply_at(const SideTotals& sells, Micros p) {
  auto it = std::upper_bound(sells.px.begin(), sells.px.end(), p);
  const std::size_t k = static_cast<std::size_t>(it - sells.px.begin());
  return sells.market + (k == 0 ? 0 : sells.cum[k - 1]);
}

struct Eval {
  Micros price{};
  Quantity exec{};
  std::int64_t imb{};
};

Eval evaluate(const SideTotals& buys, const SideTotals& sells, Micros p, Micros reference,
              Venue venue) {
  std::int64_t d = demand_at(buys, p);
  std::int64_t s = supply_at(sells, p);
  if (venue == Venue::us_close) {
    // IO interest fills only against the surviving imbalance, at prices its
    // at-reference limit admits.
    if (d > s && p >= reference) {
      s += std::min<std::int64_t>(sells.io, d - s);
    } else if (s > d && p <= reference) {
      d += std::min<std::int64_t>(buys.io, s - d);
    }
  }
  return Eval{p, std::min(d, s), d - s};
}

void finalize_prefix(SideTotals& t, bool descending) {
  std::sort(t.limits.begin(), t.limits.end());
  if (descending) std::reverse(t.limits.begin(), t.limits.end());
  // collapse duplicate prices
  for (const auto& [px, q] : t.limits) {
    if (!t.px.empty() && t.px.back() == px) {
      t.cum.back() += q;
    } else {
      t.px.push_back(px);
      t.cum.push_back(q);
    }
  }
  for (std::size_t i = 1; i < t.cum.size(); ++i) t.cum[i] += t.cum[i - 1];
}

}  // namespace

std::optional<ClearingOutcome> compute_clearing(const ClearingInputs& in) {
  if (in.tick <= 0) throw ConfigError("clearing needs a positive tick");
  SideTotals buys, sells;
  bool any_buy = false, any_sell = false;
  std::vector<Micros> points;
  for (const AuctionOrderView& v : in.orders) {
    if (v.remaining <= 0) continue;
    SideTotals& t = (v.side == Side::buy) ? buys : sells;
    (v.side == Side::buy ? any_buy : any_sell) = true;
    if (v.imbalance_only) {
      t.io += v.remaining;
    } else if (v.market_like) {
      t.market += v.remaining;
    } else {
      t.limits.emplace_back(v.limit, v.remaining);
      points.push_back(v.limit);
    }
  }
  if (!any_buy || !any_sell) return std::nullopt;
  finalize_prefix(buys, /*descending=*/true);
  finalize_prefix(sells, /*descending=*/false);

  points.push_back(snap_micros(in.reference, in.tick));
  if (in.venue == Venue::us_close) points.push_back(snap_micros(in.midpoint, in.tick));
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  // Executable volume is a step function with breaks only at order limits,
  // so candidates plus one-tick representatives of every plateau (interior
  // gaps and the two outer rays) see every value a full grid scan would.
  std::vector<Micros> eval_points;
  eval_points.reserve(points.size() * 3 + 2);
  eval_points.push_back(points.front() - in.tick);
  for (std::size_t i = 0; i < points.size(); ++i) {
    eval_points.push_back(points[i]);
    if (i + 1 < points.size()) {
      const Micros gap_lo = points[i] + in.tick;
      const Micros gap_hi = points[i + 1] - in.tick;
      if (gap_lo <= gap_hi) {
        eval_points.push_back(gap_lo);
        if (gap_hi != gap_lo) eval_points.push_back(gap_hi);
      }
    }
  }
  eval_points.push_back(points.back() + in.tick);

  std::vector<Eval> evals;
  evals.reserve(eval_points.size());
  for (Micros p : eval_points) {
    evals.push_back(evaluate(buys, sells, p, in.reference, in.venue));
  }

  Quantity best_volume = 0;
  for (const Eval& e : evals) best_volume = std::max(best_volume, e.exec);
  if (best_volume <= 0) return std::nullopt;

  std::vector<const Eval*> kept;
  for (const Eval& e : evals) {
    if (e.exec == best_volume) kept.push_back(&e);
  }
  if (in.venue == Venue::us_close) {
    std::int64_t min_abs = iabs(kept.front()->imb);
    for (const Eval* e : kept) min_abs = std::min(min_abs, iabs(e->imb));
    std::erase_if(kept, [&](const Eval* e) { return iabs(e->imb) != min_abs; });
  }
  const Micros target = (in.venue == Venue::us_close) ? in.midpoint : in.reference;
  const Eval* chosen = kept.front();
  for (const Eval* e : kept) {
    const Micros de = iabs(e->price - target);
    const Micros dc = iabs(chosen->price - target);
    if (de < dc || (de == dc && e->price < chosen->price)) chosen = e;
  }
  return ClearingOutcome{Price::from_micros(chosen->price), chosen->exec, chosen->imb};
}

// ---------------------------------------------------------------------------
// CallBook

AuctionReject CallBook::add(const Order& o, Micros effective_limit) {
  if (o.quantity <= 0) return AuctionReject::bad_order_shape;
  if (index_.contains(o.id)) return AuctionReject::duplicate_id;
  index_.emplace(o.id, entries_.size());
  entries_.push_back(Entry{o, effective_limit, next_seq_++, o.quantity, true});
  return AuctionReject::none;
}

AuctionReject CallBook::cancel(OrderId id) {
  auto it = index_.find(id);
  if (it == index_.end() || !entries_[it->second].live) {
    return AuctionReject::unknown_order_id;
  }
  entries_[it->second].live = false;
  index_.erase(it);
  return AuctionReject::none;
}

AuctionReject CallBook::modify(const Order& o, Micros effective_limit) {
  auto it = index_.find(o.id);
  if (it == index_.end() || !entries_[it->second].live) {
    return AuctionReject::unknown_order_id;
  }
  if (o.quantity <= 0) return AuctionReject::bad_order_shape;
  Entry& e = entries_[it->second];
  const bool price_change = effective_limit != e.effective_limit;
  const bool size_up = o.quantity > e.remaining;
  e.order.quantity = o.quantity;
  e.order.limit = o.limit;
  e.order.timestamp = o.timestamp;
  e.effective_limit = effective_limit;
  e.remaining = o.quantity;
  if (price_change || size_up) e.seq = next_seq_++;
  return AuctionReject::none;
}

std::vector<AuctionOrderView> CallBook::views() const {
  std::vector<AuctionOrderView> out;
  out.reserve(entries_.size());
  for (const Entry& e : entries_) {
    if (!e.live || e.remaining <= 0) continue;
    AuctionOrderView v;
    v.side = e.order.side;
    v.imbalance_only = e.order.kind == OrderKind::imbalance_only;
    v.market_like = !v.imbalance_only && is_market_like(e.order.kind);
    v.limit = e.effective_limit;
    v.remaining = e.remaining;
    out.push_back(v);
  }
  return out;
}

bool CallBook::empty() const noexcept {
  return std::none_of(entries_.begin(), entries_.end(),
                      [](const Entry& e) { return e.live && e.remaining > 0; });
}

// ---------------------------------------------------------------------------
// Allocation

namespace {

// Priority buckets at the clearing price: 0 market-like, 1 limit, 2 IO.
int bucket_of(const CallBook::Entry& e) {
  if (e.order.kind == OrderKind::imbalance_only) return 2;
  if (is_market_like(e.order.kind)) return 0;
  return 1;
}

}  // namespace

AllocationResult allocate_at_clearing(CallBook& book, Price clearing, Quantity volume,
                                      std::int64_t imbalance, TimestampNs ts) {
  const Micros p = clearing.micros();
  auto& entries = book.entries();

  // Base (non-IO) imbalance decides which IO side may participate.
  std::int64_t base_d = 0, base_s = 0;
  for (const auto& e : entries) {
    if (!e.live || e.remaining <= 0 || e.order.kind == OrderKind::imbalance_only) continue;
    const bool eligible = is_market_like(e.order.kind) ||
                          (e.order.side == Side::buy ? e.effective_limit >= p
                                                     : e.effective_limit <= p);
    if (!eligible) continue;
    (e.order.side == Side::buy ? base_d : base_s) += e.remaining;
  }
  const std::optional<Side> io_side =
      base_d > base_s ? std::optional<Side>(Side::sell)
                      : (base_s > base_d ? std::optional<Side>(Side::buy) : std::nullopt);

  auto collect = [&](Side side) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& e = entries[i];
      if (!e.live || e.remaining <= 0 || e.order.side != side) continue;
      const int b = bucket_of(e);
      if (b == 2) {
        if (io_side != side) continue;
        if (side == Side::buy ? e.effective_limit < p : e.effective_limit > p) continue;
      } else if (b == 1) {
        if (side == Side::buy ? e.effective_limit < p : e.effective_limit > p) continue;
      }
      idx.push_back(i);
    }
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b2) {
      const auto& ea = entries[a];
      const auto& eb = entries[b2];
      const int ba = bucket_of(ea), bb = bucket_of(eb);
      if (ba != bb) return ba < bb;
      if (ba == 1 && ea.effective_limit != eb.effective_limit) {
        return side == Side::buy ? ea.effective_limit > eb.effective_limit
                                 : ea.effective_limit < eb.effective_limit;
      }
      return ea.seq < eb.seq;
    });
    return idx;
  };

  struct Fill {
    std::size_t entry{};
    Quantity qty{};
  };
  auto walk = [&](const std::vector<std::size_t>& idx) {
    std::vector<Fill> fills;
    Quantity left = volume;
    for (std::size_t i : idx) {
      if (left == 0) break;
      const Quantity q = std::min(left, entries[i].remaining);
      fills.push_back(Fill{i, q});
      left -= q;
    }
    return fills;
  };

  const auto buy_fills = walk(collect(Side::buy));
  const auto sell_fills = walk(collect(Side::sell));

  AllocationResult out;
  for (const auto& f : buy_fills) {
    entries[f.entry].remaining -= f.qty;
    const Micros value = p * f.qty;
    (bucket_of(entries[f.entry]) == 1 ? out.limit_value : out.market_value) += value;
    out.allocated += f.qty;
  }
  for (const auto& f : sell_fills) {
    entries[f.entry].remaining -= f.qty;
    const Micros value = p * f.qty;
    (bucket_of(entries[f.entry]) == 1 ? out.limit_value : out.market_value) += value;
  }

  // zip both fill lists into trades, all at the clearing price
  std::size_t bi = 0, si = 0;
  Quantity brem = buy_fills.empty() ? 0 : buy_fills[0].qty;
  Quantity srem = sell_fills.empty() ? 0 : sell_fills[0].qty;
  while (bi < buy_fills.size() && si < sell_fills.size()) {
    const Quantity q = std::min(brem, srem);
    out.trades.push_back(Trade{clearing, q, imbalance >= 0, ts});
    brem -= q;
    srem -= q;
    if (brem == 0 && ++bi < buy_fills.size()) brem = buy_fills[bi].qty;
    if (srem == 0 && ++si < sell_fills.size()) srem = sell_fills[si].qty;
  }
  return out;
}

BookSnapshot residual_snapshot(const CallBook& book, TimestampNs ts, int levels) {
  std::map<Micros, Quantity, std::greater<>> bid_levels;
  std::map<Micros, Quantity, std::less<>> ask_levels;
  for (const auto& e : book.entries()) {
    if (!e.live || e.remaining <= 0 || !is_limit_like(e.order.kind)) continue;
    if (e.order.side == Side::buy) {
      bid_levels[e.effective_limit] += e.remaining;
    } else {
      ask_levels[e.effective_limit] += e.remaining;
    }
  }
  BookSnapshot s;
  s.timestamp = ts;
  s.depth_levels = levels;
  int n = 0;
  for (const auto& [px, q] : bid_levels) {
    if (n++ >= levels) break;
    s.bids.push_back(BookLevel{Price::from_micros(px), q});
  }
  n = 0;
  for (const auto& [px, q] : ask_levels) {
    if (n++ >= levels) break;
    s.asks.push_back(BookLevel{Price::from_micros(px), q});
  }
  return s;
}

// ---------------------------------------------------------------------------
// Euronext

namespace {

TimestampNs det_uniform(std::uint64_t seed, TimestampNs lo, TimestampNs hi) {
  if (hi <= lo) return lo;
  std::mt19937_64 rng(seed);
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<TimestampNs>(rng() % span);
}

}  // namespace

EuronextAuction::EuronextAuction(const AuctionConfig& cfg) : cfg_(cfg) {
  clearing_time_ = det_uniform(cfg.rng_seed, cfg.clear_window_begin, cfg.clear_window_end);
}

AuctionReject EuronextAuction::submit(const Order& o) {
  if (phase_ != Phase::accumulating || o.timestamp >= clearing_time_) {
    return AuctionReject::phase_violation;
  }
  if (o.kind != OrderKind::limit && o.kind != OrderKind::market) {
    return AuctionReject::wrong_kind_for_venue;
  }
  if (!order_shape_ok(o)) return AuctionReject::bad_order_shape;
  const auto st = book_.add(o, o.limit ? o.limit->micros() : 0);
  if (st == AuctionReject::none) refresh_indicative();
  return st;
}

AuctionReject EuronextAuction::cancel(OrderId id, TimestampNs ts) {
  if (phase_ != Phase::accumulating || ts >= clearing_time_) {
    return AuctionReject::phase_violation;
  }
  const auto st = book_.cancel(id);
  if (st == AuctionReject::none) refresh_indicative();
  return st;
}

AuctionReject EuronextAuction::modify(const Order& o) {
  if (phase_ != Phase::accumulating || o.timestamp >= clearing_time_) {
    return AuctionReject::phase_violation;
  }
  if (o.kind != OrderKind::limit && o.kind != OrderKind::market) {
    return AuctionReject::wrong_kind_for_venue;
  }
  if (!order_shape_ok(o)) return AuctionReject::bad_order_shape;
  const auto st = book_.modify(o, o.limit ? o.limit->micros() : 0);
  if (st == AuctionReject::none) refresh_indicative();
  return st;
}

void EuronextAuction::refresh_indicative() {
  const auto views = book_.views();
  ClearingInputs in{views, cfg_.reference_price.micros(), cfg_.reference_price.micros(),
                    cfg_.tick, Venue::euronext};
  const auto outcome = compute_clearing(in);
  if (outcome) {
    if (!last_indicative_ || *last_indicative_ != outcome->price) {
      ++indicative_updates_;
      last_indicative_ = outcome->price;
    }
  } else {
    last_indicative_.reset();
  }
}

std::optional<IndicativeQuote> EuronextAuction::indicative() const {
  const auto views = book_.views();
  ClearingInputs in{views, cfg_.reference_price.micros(), cfg_.reference_price.micros(),
                    cfg_.tick, Venue::euronext};
  const auto outcome = compute_clearing(in);
  if (!outcome) return std::nullopt;
  return IndicativeQuote{outcome->price, outcome->volume};
}

AuctionResult EuronextAuction::clear() {
  if (phase_ != Phase::accumulating) {
    throw ConfigError("euronext auction already cleared");
  }
  AuctionResult r;
  r.indicative_updates = indicative_updates_;
  const auto views = book_.views();
  ClearingInputs in{views, cfg_.reference_price.micros(), cfg_.reference_price.micros(),
                    cfg_.tick, Venue::euronext};
  const auto outcome = compute_clearing(in);
  if (!outcome || outcome->volume <= 0) {
    phase_ = Phase::closed;
    r.cleared = false;
    r.residual_book = residual_snapshot(book_, clearing_time_, cfg_.residual_depth);
    return r;
  }
  auto alloc =
      allocate_at_clearing(book_, outcome->price, outcome->volume, outcome->imbalance,
                           clearing_time_);
  r.cleared = true;
  r.clearing_price = outcome->price;
  r.executed_volume = outcome->volume;
  r.trades = std::move(alloc.trades);
  r.imbalance_at_clear = outcome->imbalance;
  r.executed_market_value = alloc.market_value;
  r.executed_limit_value = alloc.limit_value;
  r.residual_book = residual_snapshot(book_, clearing_time_, cfg_.residual_depth);
  clearing_price_ = outcome->price;
  phase_ = Phase::trading_at_last;
  return r;
}

EuronextAuction::TalResult EuronextAuction::trading_at_last(const Order& o) {
  TalResult out;
  if (phase_ != Phase::trading_at_last) {
    out.status = AuctionReject::phase_violation;
    return out;
  }
  if (o.kind != OrderKind::trading_at_last || o.quantity <= 0) {
    out.status = AuctionReject::bad_order_shape;
    return out;
  }
  if (o.limit && *o.limit != clearing_price_) {
    out.status = AuctionReject::not_clearing_price;
    return out;
  }
  auto& opp = (o.side == Side::buy) ? tal_sells_ : tal_buys_;
  Quantity left = o.quantity;
  std::size_t consumed = 0;
  for (TalOrder& resting : opp) {
    if (left == 0) break;
    const Quantity q = std::min(left, resting.remaining);
    out.trades.push_back(Trade{clearing_price_, q, o.side == Side::buy, o.timestamp});
    resting.remaining -= q;
    left -= q;
    if (resting.remaining == 0) ++consumed;
  }
  opp.erase(opp.begin(), opp.begin() + static_cast<std::ptrdiff_t>(consumed));
  if (left > 0) {
    auto& own = (o.side == Side::buy) ? tal_buys_ : tal_sells_;
    own.push_back(TalOrder{o.id, left, o.timestamp});
  }
  return out;
}

Quantity EuronextAuction::tal_resting(Side s) const noexcept {
  const auto& q = (s == Side::buy) ? tal_buys_ : tal_sells_;
  Quantity total = 0;
  for (const auto& t : q) total += t.remaining;
  return total;
}

// ---------------------------------------------------------------------------
// US close

UsCloseAuction::UsCloseAuction(const AuctionConfig& cfg)
    : cfg_(cfg), cutoff_reference_(cfg.reference_price) {}

void UsCloseAuction::advance_to(TimestampNs ts) {
  if (phase_ == Phase::accumulating && ts >= cfg_.imbalance_start) {
    // freeze the capping reference: the indicative at the boundary, else the
    // session reference
    const auto ind = indicative();
    cutoff_reference_ = ind ? ind->price : cfg_.reference_price;
    phase_ = Phase::imbalance_window;
  }
  if (phase_ == Phase::imbalance_window && ts >= cfg_.io_start) {
    phase_ = Phase::io_window;
  }
}

ClearingInputs UsCloseAuction::inputs(std::span<const AuctionOrderView> views) const {
  const Micros mid =
      cfg_.inside_midpoint ? cfg_.inside_midpoint->micros() : cfg_.reference_price.micros();
  return ClearingInputs{views, cutoff_reference_.micros(), mid, cfg_.tick, Venue::us_close};
}

AuctionReject UsCloseAuction::submit(const Order& o) {
  advance_to(o.timestamp);
  if (!order_shape_ok(o)) return AuctionReject::bad_order_shape;
  Micros eff = o.limit ? o.limit->micros() : 0;
  switch (phase_) {
    case Phase::accumulating:
      if (o.kind != OrderKind::market_on_close && o.kind != OrderKind::limit_on_close) {
        return AuctionReject::wrong_kind_for_venue;
      }
      break;
    case Phase::imbalance_window:
      if (o.kind != OrderKind::limit_on_close) {
        return o.kind == OrderKind::imbalance_only || o.kind == OrderKind::market_on_close
                   ? AuctionReject::phase_violation
                   : AuctionReject::wrong_kind_for_venue;
      }
      // cap anything more aggressive than the frozen reference
      if (o.side == Side::buy) {
        eff = std::min(eff, cutoff_reference_.micros());
      } else {
        eff = std::max(eff, cutoff_reference_.micros());
      }
      break;
    case Phase::io_window:
      if (o.kind != OrderKind::imbalance_only) return AuctionReject::phase_violation;
      eff = cutoff_reference_.micros();
      break;
    default:
      return AuctionReject::phase_violation;
  }
  const auto st = book_.add(o, eff);
  if (st == AuctionReject::none) {
    refresh_indicative();
    if (phase_ != Phase::accumulating) publish(o.timestamp);
  }
  return st;
}

AuctionReject UsCloseAuction::cancel(OrderId id, TimestampNs ts) {
  advance_to(ts);
  if (phase_ != Phase::accumulating) return AuctionReject::phase_violation;
  const auto st = book_.cancel(id);
  if (st == AuctionReject::none) refresh_indicative();
  return st;
}

AuctionReject UsCloseAuction::modify(const Order& o) {
  advance_to(o.timestamp);
  if (phase_ != Phase::accumulating) return AuctionReject::phase_violation;
  if (!order_shape_ok(o)) return AuctionReject::bad_order_shape;
  const auto st = book_.modify(o, o.limit ? o.limit->micros() : 0);
  if (st == AuctionReject::none) refresh_indicative();
  return st;
}

std::optional<IndicativeQuote> UsCloseAuction::indicative() const {
  const auto views = book_.views();
  const auto outcome = compute_clearing(inputs(views));
  if (!outcome) return std::nullopt;
  return IndicativeQuote{outcome->price, outcome->volume};
}

void UsCloseAuction::refresh_indicative() {
  const auto views = book_.views();
  const auto outcome = compute_clearing(inputs(views));
  if (outcome) {
    if (!last_indicative_ || *last_indicative_ != outcome->price) {
      ++indicative_updates_;
      last_indicative_ = outcome->price;
    }
  } else {
    last_indicative_.reset();
  }
}

void UsCloseAuction::publish(TimestampNs ts) {
  const auto views = book_.views();
  const auto outcome = compute_clearing(inputs(views));
  ImbalancePublication pub;
  pub.timestamp = ts;
  std::int64_t imb = 0;
  if (outcome) {
    imb = outcome->imbalance;
  } else {
    // nothing crosses: net marketable interest is the published imbalance
    for (const auto& v : views) {
      if (!v.market_like) continue;
      imb += (v.side == Side::buy) ? v.remaining : -v.remaining;
    }
  }
  if (imb > 0) {
    pub.heavy_side = Side::buy;
  } else if (imb < 0) {
    pub.heavy_side = Side::sell;
  }
  pub.size = iabs(imb);
  pubs_.push_back(pub);
}

AuctionResult UsCloseAuction::clear() {
  advance_to(cfg_.close_time);
  if (phase_ == Phase::cleared || phase_ == Phase::closed) {
    throw ConfigError("us close auction already cleared");
  }
  AuctionResult r;
  r.indicative_updates = indicative_updates_;
  const auto views = book_.views();
  const auto outcome = compute_clearing(inputs(views));
  if (!outcome || outcome->volume <= 0) {
    phase_ = Phase::closed;
    r.cleared = false;
    r.residual_book = residual_snapshot(book_, cfg_.close_time, cfg_.residual_depth);
    return r;
  }
  auto alloc = allocate_at_clearing(book_, outcome->price, outcome->volume, outcome->imbalance,
                                    cfg_.close_time);
  r.cleared = true;
  r.clearing_price = outcome->price;
  r.executed_volume = outcome->volume;
  r.trades = std::move(alloc.trades);
  r.imbalance_at_clear = outcome->imbalance;
  r.executed_market_value = alloc.market_value;
  r.executed_limit_value = alloc.limit_value;
  r.residual_book = residual_snapshot(book_, cfg_.close_time, cfg_.residual_depth);
  phase_ = Phase::cleared;
  return r;
}

}  // namespace auctionlab::auction
