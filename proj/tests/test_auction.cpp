#include <doctest.h>

#include <random>

#include "auctionlab/auction/auction.hpp"
#include "naive_auction.hpp"

using namespace auctionlab;
using namespace auctionlab::auction;

namespace {

constexpr Micros kCent = 10'000;  // 0.01 eur in micros

Order order(OrderId id, Side side, OrderKind kind, double px, Quantity qty, TimestampNs ts) {
  Order o;
  o.id = id;
  o.side = side;
  o.kind = kind;
  if (kind == OrderKind::limit || kind == OrderKind::limit_on_close) o.limit = Price::from_eur(px);
  o.quantity = qty;
  o.timestamp = ts;
  return o;
}

AuctionConfig euronext_cfg(double reference, Micros tick = kCent) {
  AuctionConfig cfg;
  cfg.venue = Venue::euronext;
  cfg.clear_window_begin = 1'000'000;
  cfg.clear_window_end = 2'000'000;
  cfg.rng_seed = 42;
  cfg.reference_price = Price::from_eur(reference);
  cfg.tick = tick;
  cfg.residual_depth = 100;
  return cfg;
}

AuctionConfig us_cfg(double reference, double midpoint, Micros tick = kCent) {
  AuctionConfig cfg;
  cfg.venue = Venue::us_close;
  cfg.imbalance_start = 1'000'000;
  cfg.io_start = 2'000'000;
  cfg.close_time = 3'000'000;
  cfg.rng_seed = 7;
  cfg.reference_price = Price::from_eur(reference);
  cfg.inside_midpoint = Price::from_eur(midpoint);
  cfg.tick = tick;
  return cfg;
}

struct RandomBook {
  std::vector<AuctionOrderView> views;
  Micros reference{};
  Micros midpoint{};
  Micros tick{};
};

RandomBook random_book(std::mt19937_64& rng, bool with_us_kinds) {
  RandomBook b;
  b.tick = rng() % 2 ? kCent : 5 * kCent;
  const Micros base = 10'000'000;  // 10.00
  auto grid_price = [&](int lo, int hi) {
    return base + b.tick * (static_cast<Micros>(rng() % static_cast<std::uint64_t>(hi - lo + 1)) + lo);
  };
  b.reference = grid_price(-10, 10);
  b.midpoint = grid_price(-10, 10);
  const int n = 1 + static_cast<int>(rng() % 50);
  for (int i = 0; i < n; ++i) {
    AuctionOrderView v;
    v.side = rng() % 2 ? Side::buy : Side::sell;
    v.remaining = 1 + static_cast<Quantity>(rng() % 200);
    const auto kind = rng() % 10;
    if (kind < 6) {
      v.limit = grid_price(-12, 12);
    } else if (kind < 8 || !with_us_kinds) {
      v.market_like = true;
    } else {
      v.imbalance_only = true;
      v.limit = b.reference;
    }
    b.views.push_back(v);
  }
  return b;
}

}  // namespace

TEST_CASE("clearing at a single crossing price") {
  std::vector<AuctionOrderView> views{
      {Side::buy, false, false, micros_from_eur(10.0), 100},
      {Side::sell, false, false, micros_from_eur(10.0), 100},
  };
  const auto out = compute_clearing({views, micros_from_eur(10.0), micros_from_eur(10.0), kCent,
                                     Venue::euronext});
  REQUIRE(out.has_value());
  CHECK(out->price.eur() == doctest::Approx(10.0));
  CHECK(out->volume == 100);
  CHECK(out->imbalance == 0);
}

TEST_CASE("two-sided ladder cleared against the exhaustive-scan oracle") {
  // bids {10.2:100, 10.0:200}, asks {9.9:150, 10.1:100}, reference 10.0
  std::vector<AuctionOrderView> views{
      {Side::buy, false, false, micros_from_eur(10.2), 100},
      {Side::buy, false, false, micros_from_eur(10.0), 200},
      {Side::sell, false, false, micros_from_eur(9.9), 150},
      {Side::sell, false, false, micros_from_eur(10.1), 100},
  };
  const ClearingInputs in{views, micros_from_eur(10.0), micros_from_eur(10.0), kCent,
                          Venue::euronext};
  const auto engine = compute_clearing(in);
  const auto oracle = ref::naive_clearing(views, in.reference, in.midpoint, in.tick, in.venue);
  REQUIRE(engine.has_value());
  REQUIRE(oracle.has_value());
  CHECK(engine->price == oracle->price);
  CHECK(engine->volume == oracle->volume);
  CHECK(engine->imbalance == oracle->imbalance);
  // max volume 150 sits on the [9.90, 10.00] plateau; the reference picks 10.00
  CHECK(engine->price.eur() == doctest::Approx(10.0));
  CHECK(engine->volume == 150);
  CHECK(engine->imbalance == 150);
}

TEST_CASE("no overlap yields no clearing") {
  std::vector<AuctionOrderView> views{
      {Side::buy, false, false, micros_from_eur(9.9), 100},
      {Side::sell, false, false, micros_from_eur(10.0), 100},
  };
  CHECK(!compute_clearing({views, micros_from_eur(10.0), micros_from_eur(10.0), kCent,
                           Venue::euronext})
             .has_value());
}

TEST_CASE("volume tie broken by reference proximity") {
  // tick 0.10 so 10.00 and 10.10 are adjacent grid prices
  std::vector<AuctionOrderView> views{
      {Side::buy, false, false, micros_from_eur(10.1), 100},
      {Side::sell, false, false, micros_from_eur(10.0), 100},
  };
  const auto out = compute_clearing({views, micros_from_eur(10.09), micros_from_eur(10.09),
                                     10 * kCent, Venue::euronext});
  REQUIRE(out.has_value());
  CHECK(out->price.eur() == doctest::Approx(10.10));
}

TEST_CASE("random books: engine clearing equals the brute-force oracle") {
  std::mt19937_64 rng(2024);
  int cleared = 0;
  for (int iter = 0; iter < 3000; ++iter) {
    const auto b = random_book(rng, false);
    const ClearingInputs in{b.views, b.reference, b.midpoint, b.tick, Venue::euronext};
    const auto engine = compute_clearing(in);
    const auto oracle = ref::naive_clearing(b.views, b.reference, b.midpoint, b.tick, in.venue);
    REQUIRE(engine.has_value() == oracle.has_value());
    if (engine) {
      ++cleared;
      CHECK(engine->price == oracle->price);
      CHECK(engine->volume == oracle->volume);
      CHECK(engine->imbalance == oracle->imbalance);
    }
  }
  CHECK(cleared > 1000);
}

TEST_CASE("off-grid reference and midpoint targets match the oracle") {
  // previous-close references from an older, finer grid sit between today's
  // grid points; proximity is measured to the raw value
  std::mt19937_64 rng(777);
  for (int iter = 0; iter < 1500; ++iter) {
    auto b = random_book(rng, iter % 2 == 1);
    b.reference += static_cast<Micros>(rng() % static_cast<std::uint64_t>(b.tick));
    b.midpoint += static_cast<Micros>(rng() % static_cast<std::uint64_t>(b.tick));
    const auto venue = iter % 2 == 1 ? Venue::us_close : Venue::euronext;
    const ClearingInputs in{b.views, b.reference, b.midpoint, b.tick, venue};
    const auto engine = compute_clearing(in);
    const auto oracle = ref::naive_clearing(b.views, b.reference, b.midpoint, b.tick, venue);
    REQUIRE(engine.has_value() == oracle.has_value());
    if (engine) {
      CHECK(engine->price == oracle->price);
      CHECK(engine->volume == oracle->volume);
      CHECK(engine->imbalance == oracle->imbalance);
    }
  }
}

TEST_CASE("random us books: full tie-break chain matches the oracle") {
  std::mt19937_64 rng(515);
  for (int iter = 0; iter < 3000; ++iter) {
    const auto b = random_book(rng, true);
    const ClearingInputs in{b.views, b.reference, b.midpoint, b.tick, Venue::us_close};
    const auto engine = compute_clearing(in);
    const auto oracle = ref::naive_clearing(b.views, b.reference, b.midpoint, b.tick, in.venue);
    REQUIRE(engine.has_value() == oracle.has_value());
    if (engine) {
      CHECK(engine->price == oracle->price);
      CHECK(engine->volume == oracle->volume);
      CHECK(engine->imbalance == oracle->imbalance);
    }
  }
}

TEST_CASE("euronext clear: market orders fill before limit orders") {
  EuronextAuction session(euronext_cfg(10.0));
  REQUIRE(session.submit(order(1, Side::buy, OrderKind::market, 0, 100, 10)) ==
          AuctionReject::none);
  REQUIRE(session.submit(order(2, Side::sell, OrderKind::market, 0, 100, 11)) ==
          AuctionReject::none);
  REQUIRE(session.submit(order(3, Side::buy, OrderKind::limit, 10.00, 60, 12)) ==
          AuctionReject::none);
  REQUIRE(session.submit(order(4, Side::sell, OrderKind::limit, 10.00, 50, 13)) ==
          AuctionReject::none);
  const auto r = session.clear();
  REQUIRE(r.cleared);
  CHECK(r.clearing_price.eur() == doctest::Approx(10.0));
  CHECK(r.executed_volume == 150);
  // the buy limit is the marginal order: 50 of 60 filled, 10 rest
  REQUIRE(r.residual_book.bids.size() == 1);
  CHECK(r.residual_book.bids[0].quantity == 10);
  CHECK(r.residual_book.asks.empty());
  for (const auto& t : r.trades) CHECK(t.price == r.clearing_price);
}

TEST_CASE("euronext allocation follows strict time priority on the heavy side") {
  EuronextAuction session(euronext_cfg(10.0));
  session.submit(order(1, Side::buy, OrderKind::limit, 10.00, 50, 10));
  session.submit(order(2, Side::buy, OrderKind::limit, 10.00, 50, 11));
  session.submit(order(3, Side::buy, OrderKind::limit, 10.00, 50, 12));
  session.submit(order(4, Side::sell, OrderKind::limit, 10.00, 120, 13));
  const auto r = session.clear();
  REQUIRE(r.cleared);
  CHECK(r.executed_volume == 120);
  // orders 1 and 2 fully filled, order 3 partially: residual 30 at 10.00
  REQUIRE(r.residual_book.bids.size() == 1);
  CHECK(r.residual_book.bids[0].quantity == 30);
}

TEST_CASE("euronext no-clear closes without a print") {
  EuronextAuction session(euronext_cfg(10.0));
  session.submit(order(1, Side::buy, OrderKind::limit, 9.90, 50, 10));
  session.submit(order(2, Side::sell, OrderKind::limit, 10.10, 50, 11));
  const auto r = session.clear();
  CHECK(!r.cleared);
  CHECK(r.executed_volume == 0);
  CHECK(session.phase() == Phase::closed);
}

TEST_CASE("indicative stream equals clone-and-clear after every event") {
  std::mt19937_64 rng(99);
  EuronextAuction session(euronext_cfg(10.0));
  std::vector<AuctionOrderView> mirror;
  for (int i = 0; i < 60; ++i) {
    const Side side = rng() % 2 ? Side::buy : Side::sell;
    const double px = 9.90 + 0.01 * static_cast<double>(rng() % 21);
    const auto qty = 1 + static_cast<Quantity>(rng() % 100);
    REQUIRE(session.submit(order(static_cast<OrderId>(i + 1), side, OrderKind::limit, px, qty,
                                 10 + i)) == AuctionReject::none);
    mirror.push_back(AuctionOrderView{side, false, false, micros_from_eur(px), qty});
    const auto ind = session.indicative();
    const auto oracle =
        ref::naive_clearing(mirror, micros_from_eur(10.0), micros_from_eur(10.0), kCent,
                            Venue::euronext);
    REQUIRE(ind.has_value() == oracle.has_value());
    if (ind) {
      CHECK(ind->price == oracle->price);
      CHECK(ind->volume == oracle->volume);
    }
  }
}

TEST_CASE("indicative updates count distinct consecutive prices") {
  EuronextAuction session(euronext_cfg(10.0));
  session.submit(order(1, Side::buy, OrderKind::limit, 10.00, 100, 10));
  CHECK(session.indicative_updates() == 0);  // no crossing volume yet
  session.submit(order(2, Side::sell, OrderKind::limit, 10.00, 50, 11));
  CHECK(session.indicative_updates() == 1);  // first indicative price 10.00
  session.submit(order(3, Side::sell, OrderKind::limit, 10.00, 10, 12));
  CHECK(session.indicative_updates() == 1);  // price unchanged
  // volume ties across [10.00, 10.05]; reference proximity keeps 10.00
  session.submit(order(4, Side::buy, OrderKind::limit, 10.05, 200, 13));
  CHECK(session.indicative_updates() == 1);
  // deeper ask interest shifts the maximizer: a new run starts
  session.submit(order(5, Side::sell, OrderKind::limit, 10.05, 150, 14));
  const auto ind = session.indicative();
  REQUIRE(ind.has_value());
  CHECK(ind->price.eur() == doctest::Approx(10.05));
  CHECK(ind->volume == 200);
  CHECK(session.indicative_updates() == 2);
}

TEST_CASE("trading at last") {
  EuronextAuction session(euronext_cfg(10.0));
  session.submit(order(1, Side::buy, OrderKind::limit, 10.00, 100, 10));
  session.submit(order(2, Side::sell, OrderKind::limit, 10.00, 100, 11));
  const auto r = session.clear();
  REQUIRE(r.cleared);
  REQUIRE(session.phase() == Phase::trading_at_last);

  SUBCASE("rests without opposite interest, then crosses in time priority") {
    Order tal_buy = order(10, Side::buy, OrderKind::trading_at_last, 0, 50, 2'000'100);
    auto res = session.trading_at_last(tal_buy);
    CHECK(res.status == AuctionReject::none);
    CHECK(res.trades.empty());
    CHECK(session.tal_resting(Side::buy) == 50);

    Order tal_sell = order(11, Side::sell, OrderKind::trading_at_last, 0, 30, 2'000'200);
    res = session.trading_at_last(tal_sell);
    CHECK(res.status == AuctionReject::none);
    REQUIRE(res.trades.size() == 1);
    CHECK(res.trades[0].quantity == 30);
    CHECK(res.trades[0].price == r.clearing_price);
    CHECK(session.tal_resting(Side::buy) == 20);
  }

  SUBCASE("a limit away from the close is rejected") {
    Order bad = order(12, Side::sell, OrderKind::trading_at_last, 0, 10, 2'000'300);
    bad.limit = Price::from_eur(10.05);
    CHECK(session.trading_at_last(bad).status == AuctionReject::not_clearing_price);
  }

  SUBCASE("random TAL flow conserves shares") {
    std::mt19937_64 rng(4);
    Quantity submitted = 0, traded = 0;
    for (int i = 0; i < 200; ++i) {
      Order o = order(static_cast<OrderId>(100 + i),
                      rng() % 2 ? Side::buy : Side::sell, OrderKind::trading_at_last, 0,
                      1 + static_cast<Quantity>(rng() % 40), 2'000'000 + i);
      const auto res = session.trading_at_last(o);
      REQUIRE(res.status == AuctionReject::none);
      submitted += o.quantity;
      for (const auto& t : res.trades) traded += t.quantity;
    }
    CHECK(submitted ==
          2 * traded + session.tal_resting(Side::buy) + session.tal_resting(Side::sell));
  }
}

TEST_CASE("call-phase cancels and modifies reshape the clearing") {
  EuronextAuction session(euronext_cfg(10.0));
  REQUIRE(session.submit(order(1, Side::buy, OrderKind::limit, 10.00, 100, 10)) ==
          AuctionReject::none);
  REQUIRE(session.submit(order(2, Side::sell, OrderKind::limit, 10.00, 60, 11)) ==
          AuctionReject::none);
  auto ind = session.indicative();
  REQUIRE(ind.has_value());
  CHECK(ind->volume == 60);

  // size-down modify shrinks the crossing volume
  REQUIRE(session.modify(order(1, Side::buy, OrderKind::limit, 10.00, 50, 12)) ==
          AuctionReject::none);
  ind = session.indicative();
  REQUIRE(ind.has_value());
  CHECK(ind->volume == 50);

  // cancelling the only ask kills the indicative
  REQUIRE(session.cancel(2, 13) == AuctionReject::none);
  CHECK(!session.indicative().has_value());
  CHECK(session.cancel(2, 14) == AuctionReject::unknown_order_id);

  // re-pricing the bid meets a new ask at a different level
  REQUIRE(session.submit(order(3, Side::sell, OrderKind::limit, 10.02, 50, 15)) ==
          AuctionReject::none);
  CHECK(!session.indicative().has_value());
  REQUIRE(session.modify(order(1, Side::buy, OrderKind::limit, 10.02, 50, 16)) ==
          AuctionReject::none);
  const auto r = session.clear();
  REQUIRE(r.cleared);
  CHECK(r.clearing_price.eur() == doctest::Approx(10.02));
  CHECK(r.executed_volume == 50);
}

TEST_CASE("us close phase machine") {
  UsCloseAuction session(us_cfg(10.0, 10.0));
  REQUIRE(session.submit(order(1, Side::sell, OrderKind::limit_on_close, 10.03, 100, 10)) ==
          AuctionReject::none);

  SUBCASE("cancel after the imbalance window opens is rejected") {
    CHECK(session.cancel(1, 1'500'000) == AuctionReject::phase_violation);
  }
  SUBCASE("modify after the imbalance window opens is rejected") {
    CHECK(session.modify(order(1, Side::sell, OrderKind::limit_on_close, 10.01, 100,
                               1'500'000)) == AuctionReject::phase_violation);
  }
  SUBCASE("io order before its window is rejected") {
    Order io = order(5, Side::buy, OrderKind::imbalance_only, 0, 50, 1'500'000);
    CHECK(session.submit(io) == AuctionReject::phase_violation);
  }
  SUBCASE("moc entry ends at the imbalance window") {
    Order moc = order(6, Side::buy, OrderKind::market_on_close, 0, 50, 1'500'000);
    CHECK(session.submit(moc) == AuctionReject::phase_violation);
  }
  SUBCASE("loc entered in the window is capped at the frozen reference") {
    // uncapped 10.05 would cross the resting 10.03 ask; capped to 10.00 it cannot
    REQUIRE(session.submit(order(7, Side::buy, OrderKind::limit_on_close, 10.05, 100,
                                 1'500'000)) == AuctionReject::none);
    CHECK(session.cutoff_reference().eur() == doctest::Approx(10.0));
    const auto r = session.clear();
    CHECK(!r.cleared);
  }
  SUBCASE("imbalance republished after every accepted event past the cutoff") {
    const auto before = session.publications().size();
    session.submit(order(8, Side::buy, OrderKind::limit_on_close, 10.00, 10, 1'600'000));
    session.submit(order(9, Side::buy, OrderKind::limit_on_close, 10.00, 10, 1'700'000));
    CHECK(session.publications().size() == before + 2);
  }
}

TEST_CASE("us clear: imbalance minimization then midpoint proximity") {
  SUBCASE("lower-|imbalance| price wins the volume tie") {
    // grid 0.10; both prices transact 100 but imbalances differ
    auto cfg = us_cfg(10.0, 10.08, 10 * kCent);
    UsCloseAuction session(cfg);
    session.submit(order(1, Side::buy, OrderKind::market_on_close, 0, 100, 10));
    session.submit(order(2, Side::sell, OrderKind::limit_on_close, 10.00, 100, 11));
    session.submit(order(3, Side::sell, OrderKind::limit_on_close, 10.10, 100, 12));
    const auto r = session.clear();
    REQUIRE(r.cleared);
    CHECK(r.executed_volume == 100);
    CHECK(r.clearing_price.eur() == doctest::Approx(10.00));  // imbalance 0 beats proximity
    CHECK(r.imbalance_at_clear == 0);
  }
  SUBCASE("remaining tie falls to midpoint proximity") {
    auto cfg = us_cfg(10.0, 10.04, 5 * kCent);
    UsCloseAuction session(cfg);
    session.submit(order(1, Side::buy, OrderKind::market_on_close, 0, 100, 10));
    session.submit(order(2, Side::sell, OrderKind::limit_on_close, 10.00, 100, 11));
    const auto r = session.clear();
    REQUIRE(r.cleared);
    // plateau [10.00, +inf): volumes and imbalances tie on [10.00, 10.05...],
    // midpoint 10.04 picks 10.05
    CHECK(r.clearing_price.eur() == doctest::Approx(10.05));
  }
}

TEST_CASE("a unique volume maximum makes both venue chains agree") {
  std::vector<AuctionOrderView> views{
      {Side::buy, false, false, micros_from_eur(10.02), 100},
      {Side::buy, false, false, micros_from_eur(10.00), 50},
      {Side::sell, false, false, micros_from_eur(9.98), 60},
      {Side::sell, false, false, micros_from_eur(10.02), 80},
  };
  // references far away so proximity would pull elsewhere if it were used
  const auto eu = compute_clearing({views, micros_from_eur(9.90), micros_from_eur(9.90), kCent,
                                    Venue::euronext});
  const auto us = compute_clearing({views, micros_from_eur(9.90), micros_from_eur(9.90), kCent,
                                    Venue::us_close});
  REQUIRE(eu.has_value());
  REQUIRE(us.has_value());
  CHECK(eu->price.eur() == doctest::Approx(10.02));
  CHECK(us->price == eu->price);
  CHECK(us->volume == eu->volume);
  CHECK(eu->volume == 100);
}

TEST_CASE("us io orders fill only against the surviving imbalance") {
  auto cfg = us_cfg(10.0, 10.0);
  UsCloseAuction session(cfg);
  session.submit(order(1, Side::buy, OrderKind::market_on_close, 0, 100, 10));
  session.submit(order(2, Side::sell, OrderKind::market_on_close, 0, 40, 11));
  // io window
  REQUIRE(session.submit(order(3, Side::sell, OrderKind::imbalance_only, 0, 30, 2'500'000)) ==
          AuctionReject::none);
  REQUIRE(session.submit(order(4, Side::buy, OrderKind::imbalance_only, 0, 50, 2'600'000)) ==
          AuctionReject::none);  // wrong side: must not trade
  const auto r = session.clear();
  REQUIRE(r.cleared);
  CHECK(r.clearing_price.eur() == doctest::Approx(10.0));
  CHECK(r.executed_volume == 70);  // 40 MOC + 30 sell IO against the buy surplus
  CHECK(r.imbalance_at_clear == 30);
}

TEST_CASE("auction results are deterministic under a fixed seed") {
  auto run_once = [] {
    EuronextAuction session(euronext_cfg(10.0));
    session.submit(order(1, Side::buy, OrderKind::limit, 10.02, 75, 10));
    session.submit(order(2, Side::sell, OrderKind::limit, 9.98, 50, 11));
    session.submit(order(3, Side::sell, OrderKind::market, 0, 25, 12));
    return session.clear();
  };
  const auto a = run_once();
  const auto b = run_once();
  CHECK(a.cleared == b.cleared);
  CHECK(a.clearing_price == b.clearing_price);
  CHECK(a.executed_volume == b.executed_volume);
  CHECK(a.imbalance_at_clear == b.imbalance_at_clear);
  REQUIRE(a.trades.size() == b.trades.size());
  EuronextAuction t1(euronext_cfg(10.0)), t2(euronext_cfg(10.0));
  CHECK(t1.clearing_time() == t2.clearing_time());
  CHECK(t1.clearing_time() >= 1'000'000);
  CHECK(t1.clearing_time() <= 2'000'000);
}

TEST_CASE("allocation conserves shares on random call books") {
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 300; ++iter) {
    EuronextAuction session(euronext_cfg(10.0));
    Quantity accepted = 0;
    Quantity market_shares = 0;
    const int n = 2 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      const Side side = rng() % 2 ? Side::buy : Side::sell;
      const auto qty = 1 + static_cast<Quantity>(rng() % 100);
      Order o;
      const bool is_market = rng() % 5 == 0 && iter % 2 == 0;
      if (is_market) {
        o = order(static_cast<OrderId>(i + 1), side, OrderKind::market, 0, qty, 10 + i);
      } else {
        const double px = 9.90 + 0.01 * static_cast<double>(rng() % 21);
        o = order(static_cast<OrderId>(i + 1), side, OrderKind::limit, px, qty, 10 + i);
      }
      if (session.submit(o) == AuctionReject::none) {
        accepted += qty;
        if (is_market) market_shares += qty;
      }
    }
    const auto r = session.clear();
    Quantity residual = 0;
    for (const auto& lvl : r.residual_book.bids) residual += lvl.quantity;
    for (const auto& lvl : r.residual_book.asks) residual += lvl.quantity;
    Quantity traded = 0;
    for (const auto& t : r.trades) traded += t.quantity;
    CHECK(traded == r.executed_volume);
    if (market_shares == 0) {
      // limit-only books conserve exactly: residual is accumulated minus executed
      CHECK(2 * r.executed_volume + residual == accepted);
    } else {
      // market residuals expire unfilled at venue close
      CHECK(2 * r.executed_volume + residual <= accepted);
    }
    if (r.cleared) {
      // every trade at the clearing price, residual book uncrossed
      for (const auto& t : r.trades) CHECK(t.price == r.clearing_price);
      if (r.residual_book.two_sided()) {
        CHECK(r.residual_book.bids.front().price < r.residual_book.asks.front().price);
      }
    }
  }
}
