#include "auctionlab/sim/flow.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "auctionlab/core/errors.hpp"

namespace auctionlab::sim {

namespace {

constexpr TimestampNs kNsPerMinute = 60LL * 1'000'000'000;

// Portable draws on top of the mt19937_64 stream; no std::*_distribution so
// streams stay identical across standard libraries.
struct Draw {
  std::mt19937_64 rng;
  explicit Draw(std::uint64_t seed) : rng(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }
  double open_uniform() {  // (0, 1]
    return 1.0 - uniform();
  }
  double normal() {  // Box-Muller, one of the pair
    const double u1 = open_uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  std::uint64_t below(std::uint64_t n) { return rng() % n; }
};

Quantity draw_size(Draw& d, double mean) {
  return 1 + static_cast<Quantity>(std::floor(-mean * std::log(d.open_uniform())));
}

}  // namespace

void FlowParams::validate() const {
  if (session_minutes <= 0 || auction_minutes <= 0) {
    throw ConfigError("flow: session lengths must be positive");
  }
  if (events_per_minute < 0 || auction_orders < 0) {
    throw ConfigError("flow: arrival rates must be non-negative");
  }
  if (p_limit < 0 || p_market < 0 || p_limit + p_market > 1.0) {
    throw ConfigError("flow: event-kind probabilities out of range");
  }
  if (limit_dispersion <= 0) throw ConfigError("flow: dispersion must be positive");
  if (size_mean <= 0 || fundamental_start_eur <= 0) {
    throw ConfigError("flow: size and fundamental must be positive");
  }
  if (auction_market_share < 0 || auction_market_share > 1) {
    throw ConfigError("flow: auction market share out of range");
  }
}

RawFlow generate_raw_flow(const FlowParams& p) {
  p.validate();
  Draw d(p.rng_seed);
  RawFlow out;
  out.continuous_end = static_cast<TimestampNs>(p.session_minutes) * kNsPerMinute;
  out.auction_end = out.continuous_end + static_cast<TimestampNs>(p.auction_minutes) * kNsPerMinute;

  const auto n_events =
      static_cast<std::size_t>(std::llround(p.events_per_minute * p.session_minutes));
  std::vector<TimestampNs> times(n_events);
  for (auto& t : times) {
    t = static_cast<TimestampNs>(d.uniform() * static_cast<double>(out.continuous_end));
  }
  std::sort(times.begin(), times.end());

  double fundamental = p.fundamental_start_eur;
  OrderId next_id = 1;
  std::vector<OrderId> limit_ids;  // submitted so far, cancel targets
  out.continuous.reserve(n_events);
  for (TimestampNs ts : times) {
    fundamental *= std::exp(p.fundamental_vol * d.normal());
    const double kind_u = d.uniform();
    RawEvent e;
    e.ts = ts;
    e.side = d.uniform() < 0.5 ? Side::buy : Side::sell;
    e.quantity = draw_size(d, p.size_mean);
    if (kind_u < p.p_limit) {
      e.kind = RawKind::submit_limit;
      e.raw_price_eur = fundamental * (1.0 + p.limit_dispersion * (2.0 * d.uniform() - 1.0));
      e.id = next_id++;
      limit_ids.push_back(e.id);
    } else if (kind_u < p.p_limit + p.p_market) {
      e.kind = RawKind::submit_market;
      e.id = next_id++;
    } else {
      e.kind = RawKind::cancel;
      e.victim = limit_ids.empty() ? 0 : limit_ids[d.below(limit_ids.size())];
    }
    out.continuous.push_back(e);
  }

  // call-phase flow around the end-of-session fundamental
  std::vector<TimestampNs> ats(static_cast<std::size_t>(p.auction_orders));
  const auto span = static_cast<double>(out.auction_end - out.continuous_end);
  for (auto& t : ats) {
    t = out.continuous_end + static_cast<TimestampNs>(d.uniform() * span);
  }
  std::sort(ats.begin(), ats.end());
  for (TimestampNs ts : ats) {
    RawEvent e;
    e.ts = ts;
    e.side = d.uniform() < 0.5 ? Side::buy : Side::sell;
    e.quantity = draw_size(d, p.size_mean);
    if (d.uniform() < p.auction_market_share) {
      e.kind = RawKind::submit_market;
    } else {
      e.kind = RawKind::submit_limit;
      e.raw_price_eur = fundamental * (1.0 + p.limit_dispersion * (2.0 * d.uniform() - 1.0));
    }
    e.id = next_id++;
    out.auction.push_back(e);
  }
  out.fundamental_end_eur = fundamental;
  return out;
}

SessionStreams materialize(const RawFlow& raw, const TickTable& table, BandId band,
                           StockId stock) {
  SessionStreams out;
  out.continuous_end = raw.continuous_end;
  out.auction_end = raw.auction_end;
  out.continuous.reserve(raw.continuous.size());
  auto snapped = [&](double eur) {
    const Micros tick = table.lookup(std::max<Micros>(1, micros_from_eur(eur)), band);
    return snap_to_grid(eur, tick, SnapPolicy::round_nearest);
  };
  for (const RawEvent& e : raw.continuous) {
    engine::EngineEvent ev;
    ev.kind = e.kind == RawKind::cancel ? engine::EventKind::cancel : engine::EventKind::submit;
    ev.order.stock = stock;
    ev.order.timestamp = e.ts;
    if (e.kind == RawKind::cancel) {
      ev.order.id = e.victim;
    } else {
      ev.order.id = e.id;
      ev.order.side = e.side;
      ev.order.quantity = e.quantity;
      if (e.kind == RawKind::submit_limit) {
        ev.order.kind = OrderKind::limit;
        ev.order.limit = snapped(e.raw_price_eur);
      } else {
        ev.order.kind = OrderKind::market;
      }
    }
    out.continuous.push_back(ev);
  }
  for (const RawEvent& e : raw.auction) {
    engine::EngineEvent ev;
    ev.kind = engine::EventKind::submit;
    ev.order.stock = stock;
    ev.order.timestamp = e.ts;
    ev.order.id = e.id;
    ev.order.side = e.side;
    ev.order.quantity = e.quantity;
    if (e.kind == RawKind::submit_limit) {
      ev.order.kind = OrderKind::limit;
      ev.order.limit = snapped(e.raw_price_eur);
    } else {
      ev.order.kind = OrderKind::market;
    }
    out.auction.push_back(ev);
  }
  return out;
}

SessionStreams generate_session(const FlowParams& p, const TickTable& table, BandId band,
                                StockId stock) {
  return materialize(generate_raw_flow(p), table, band, stock);
}

}  // namespace auctionlab::sim
