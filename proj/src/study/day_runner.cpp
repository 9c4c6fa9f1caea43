#include "auctionlab/study/day_runner.hpp"

#include <algorithm>

namespace auctionlab::study {

namespace {

constexpr TimestampNs kMinuteNs = 60LL * 1'000'000'000;

bool crossed(const BookSnapshot& s) {
  return s.two_sided() && s.bids.front().price >= s.asks.front().price;
}

}  // namespace

DayResult run_day(const std::string& symbol, const Date& date,
                  std::span<const engine::EngineEvent> continuous_events,
                  std::span<const engine::EngineEvent> auction_events, const TickTable& table,
                  const SessionConfig& scfg, const metrics::MetricsConfig& mcfg,
                  bool third_friday, bool month_end) {
  DayResult out;
  engine::OrderBook book(&table, scfg.band);

  metrics::DayInputs inputs;
  inputs.symbol = symbol;
  inputs.date = date;
  inputs.continuous_end = scfg.continuous_close;
  inputs.third_friday = third_friday;
  inputs.month_end = month_end;

  // continuous session with minute sampling
  TimestampNs next_minute = scfg.continuous_open + kMinuteNs;
  auto drain_snapshots = [&](TimestampNs upto) {
    while (next_minute <= upto && next_minute <= scfg.continuous_close) {
      inputs.minute_snapshots.push_back(book.snapshot(next_minute, scfg.snapshot_depth));
      next_minute += kMinuteNs;
    }
  };
  std::optional<Price> last_trade_price;
  for (const engine::EngineEvent& e : continuous_events) {
    drain_snapshots(e.order.timestamp - 1);
    const auto bb = book.best_bid();
    const auto ba = book.best_ask();
    const auto r = book.apply(e);
    if (e.kind == engine::EventKind::submit) {
      out.stats.submitted += e.order.quantity;
      const Quantity traded = r.traded_quantity();
      out.stats.traded += traded;
      out.stats.rejected += r.rejected_quantity;
      if (e.order.quantity != 2 * traded + r.resting_delta + r.rejected_quantity) {
        ++out.stats.conservation_violations;
      }
    }
    if (!r.accepted()) ++out.stats.continuous_rejects;
    const std::optional<Micros> quote_sum =
        (bb && ba) ? std::optional<Micros>(bb->micros() + ba->micros()) : std::nullopt;
    for (const Trade& t : r.trades) {
      inputs.trades.push_back(metrics::TradeObs{t, quote_sum});
      last_trade_price = t.price;
    }
  }
  drain_snapshots(scfg.continuous_close);
  inputs.n_quote_updates = static_cast<std::int64_t>(book.quote_price_updates());
  inputs.n_quote_updates_any = static_cast<std::int64_t>(book.quote_any_updates());

  // closing auction
  std::optional<Price> reference = last_trade_price;
  if (!reference) {
    auto it = scfg.previous_close.find(symbol);
    if (it != scfg.previous_close.end()) reference = it->second;
  }
  if (!auction_events.empty() && !reference) {
    out.skipped_auction_reason = "no_reference_price";
  } else if (!auction_events.empty()) {
    auction::AuctionConfig acfg;
    acfg.venue = scfg.venue;
    acfg.clear_window_begin = scfg.clear_window_begin;
    acfg.clear_window_end = scfg.clear_window_end;
    acfg.imbalance_start = scfg.imbalance_start;
    acfg.io_start = scfg.io_start;
    acfg.close_time = scfg.close_time;
    acfg.rng_seed = scfg.auction_seed;
    acfg.reference_price = *reference;
    acfg.inside_midpoint = scfg.inside_midpoint;
    acfg.tick = table.lookup(std::max<Micros>(1, reference->micros()), scfg.band);
    acfg.residual_depth = scfg.snapshot_depth;

    if (scfg.venue == auction::Venue::euronext) {
      auction::EuronextAuction session(acfg);
      for (const engine::EngineEvent& e : auction_events) {
        if (session.phase() == auction::Phase::accumulating &&
            session.due(e.order.timestamp)) {
          out.auction = session.clear();
        }
        auction::AuctionReject st = auction::AuctionReject::none;
        if (e.kind == engine::EventKind::cancel) {
          st = session.cancel(e.order.id, e.order.timestamp);
        } else if (e.kind == engine::EventKind::modify) {
          st = session.modify(e.order);
        } else if (e.order.kind == OrderKind::trading_at_last) {
          auto tal = session.trading_at_last(e.order);
          st = tal.status;
          out.stats.tal_trades += static_cast<std::int64_t>(tal.trades.size());
        } else {
          st = session.submit(e.order);
        }
        if (st != auction::AuctionReject::none) ++out.stats.auction_rejects;
      }
      if (session.phase() == auction::Phase::accumulating) out.auction = session.clear();
    } else {
      auction::UsCloseAuction session(acfg);
      for (const engine::EngineEvent& e : auction_events) {
        auction::AuctionReject st = auction::AuctionReject::none;
        if (e.kind == engine::EventKind::cancel) {
          st = session.cancel(e.order.id, e.order.timestamp);
        } else if (e.kind == engine::EventKind::modify) {
          st = session.modify(e.order);
        } else {
          st = session.submit(e.order);
        }
        if (st != auction::AuctionReject::none) ++out.stats.auction_rejects;
      }
      out.auction = session.clear();
    }
    if (out.auction && crossed(out.auction->residual_book)) out.stats.residual_crossed = true;
  }

  inputs.auction = out.auction;
  out.metrics = metrics::aggregate_day(inputs, mcfg);
  return out;
}

}  // namespace auctionlab::study
