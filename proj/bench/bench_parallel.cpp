// Throughput comparison: OpenMP-parallel batch kernels against the serial
// reference implementations kept for testing.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "auctionlab/auction/auction.hpp"
#include "auctionlab/econ/regression.hpp"
#include "auctionlab/engine/order_book.hpp"
#include "auctionlab/sim/experiment.hpp"
#include "naive_auction.hpp"
#include "naive_matcher.hpp"

using namespace auctionlab;

namespace {

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<engine::EngineEvent> make_events(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<engine::EngineEvent> events;
  events.reserve(static_cast<std::size_t>(n));
  std::vector<OrderId> live;
  OrderId next = 1;
  for (int i = 0; i < n; ++i) {
    engine::EngineEvent e;
    e.order.timestamp = i;
    const auto k = rng() % 10;
    if (k < 7 || live.empty()) {
      e.kind = engine::EventKind::submit;
      e.order.id = next++;
      e.order.side = rng() % 2 ? Side::buy : Side::sell;
      if (rng() % 6 == 0) {
        e.order.kind = OrderKind::market;
      } else {
        e.order.kind = OrderKind::limit;
        e.order.limit =
            Price::from_micros(10'000'000 + 10'000 * static_cast<Micros>(rng() % 81));
        live.push_back(e.order.id);
      }
      e.order.quantity = 1 + static_cast<Quantity>(rng() % 100);
    } else {
      e.kind = engine::EventKind::cancel;
      e.order.id = live[rng() % live.size()];
    }
    events.push_back(e);
  }
  return events;
}

void bench_matching() {
  const int n_fast = 2'000'000;
  const auto events = make_events(n_fast, 1);
  auto t0 = std::chrono::steady_clock::now();
  engine::OrderBook book;
  std::size_t trades = 0;
  for (const auto& e : events) trades += book.apply(e).trades.size();
  const double engine_s = seconds(t0);

  // linear-throughput check: a quarter of the stream should run at a
  // comparable rate (book depth stays bounded under this flow)
  const auto quarter = make_events(n_fast / 4, 1);
  t0 = std::chrono::steady_clock::now();
  engine::OrderBook book_q;
  std::size_t trades_q = 0;
  for (const auto& e : quarter) trades_q += book_q.apply(e).trades.size();
  const double quarter_s = seconds(t0);
  const double rate_ratio = (n_fast / engine_s) / ((n_fast / 4) / quarter_s);
  std::printf("linearity         : full/quarter rate ratio %.2f (%s)\n", rate_ratio,
              rate_ratio > 0.5 && rate_ratio < 2.0 ? "linear" : "DEGRADED");

  const int n_slow = 40'000;  // the reference matcher is quadratic, keep it small
  const auto small = make_events(n_slow, 1);
  t0 = std::chrono::steady_clock::now();
  ref::NaiveMatcher naive;
  std::size_t naive_trades = 0;
  for (const auto& e : small) naive_trades += naive.apply(e).trades.size();
  const double naive_s = seconds(t0);

  std::printf("matching engine   : %9.0f events/s (%zu trades)\n", n_fast / engine_s, trades);
  std::printf("naive reference   : %9.0f events/s (%zu trades)\n", n_slow / naive_s,
              naive_trades);
}

void bench_clearing() {
  const int books = 20'000;
  std::vector<std::vector<auction::AuctionOrderView>> all(books);
  std::mt19937_64 rng(7);
  for (auto& views : all) {
    const int n = 10 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      auction::AuctionOrderView v;
      v.side = rng() % 2 ? Side::buy : Side::sell;
      v.remaining = 1 + static_cast<Quantity>(rng() % 200);
      if (rng() % 4 == 0) {
        v.market_like = true;
      } else {
        v.limit = 10'000'000 + 10'000 * static_cast<Micros>(rng() % 25) - 120'000;
      }
      views.push_back(v);
    }
  }
  auto t0 = std::chrono::steady_clock::now();
  std::int64_t sum_engine = 0;
#pragma omp parallel for schedule(static) reduction(+ : sum_engine)
  for (int i = 0; i < books; ++i) {
    const auto out = auction::compute_clearing(
        auction::ClearingInputs{all[static_cast<std::size_t>(i)], 10'000'000, 10'000'000,
                                10'000, auction::Venue::euronext});
    if (out) sum_engine += out->volume;
  }
  const double engine_s = seconds(t0);

  t0 = std::chrono::steady_clock::now();
  std::int64_t sum_ref = 0;
  for (int i = 0; i < books; ++i) {
    const auto out = ref::naive_clearing(all[static_cast<std::size_t>(i)], 10'000'000,
                                         10'000'000, 10'000, auction::Venue::euronext);
    if (out) sum_ref += out->volume;
  }
  const double ref_s = seconds(t0);
  std::printf("auction clearing  : %9.0f books/s parallel, %9.0f books/s serial reference "
              "(checksum %s)\n",
              books / engine_s, books / ref_s, sum_engine == sum_ref ? "ok" : "MISMATCH");
}

void bench_experiment() {
  sim::ExperimentParams p;
  p.flow.session_minutes = 60;
  p.flow.events_per_minute = 240;
  p.flow.auction_orders = 120;
  p.ticks_eur = {0.01, 0.02};
  for (std::uint64_t s = 1; s <= 32; ++s) p.seeds.push_back(s);

  p.parallel = true;
  auto t0 = std::chrono::steady_clock::now();
  const auto par = sim::run_tick_experiment(p);
  const double par_s = seconds(t0);

  p.parallel = false;
  t0 = std::chrono::steady_clock::now();
  const auto ser = sim::run_tick_experiment(p);
  const double ser_s = seconds(t0);

  bool same = par.cells.size() == ser.cells.size();
  for (std::size_t i = 0; same && i < par.cells.size(); ++i) {
    same = par.cells[i].day.transacted_volume_eur == ser.cells[i].day.transacted_volume_eur &&
           par.cells[i].day.n_trades == ser.cells[i].day.n_trades;
  }
  std::printf("tick experiment   : %6.2f s parallel vs %6.2f s serial (%.1fx, results %s)\n",
              par_s, ser_s, ser_s / par_s, same ? "identical" : "MISMATCH");
}

void bench_panel() {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<econ::PanelObservation> obs;
  const int stocks = 600, days = 500;
  obs.reserve(static_cast<std::size_t>(stocks) * days);
  for (int s = 0; s < stocks; ++s) {
    const double fe = gauss(rng);
    for (int d = 0; d < days; ++d) {
      econ::PanelObservation o;
      o.stock = static_cast<StockId>(s + 1);
      o.date_key = d;
      o.ts_up = s % 3 == 1;
      o.ts_down = s % 3 == 2;
      o.post_mifid = d >= days / 2;
      o.log_market_cap = 20 + 0.1 * gauss(rng);
      o.log_volume = 15 + 0.5 * gauss(rng);
      o.close_price = 100 + gauss(rng);
      o.volatility = 0.01 + 0.001 * gauss(rng);
      o.dep_var = 2.0 * o.ts_up * o.post_mifid + fe + gauss(rng);
      obs.push_back(o);
    }
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto fit = econ::fit_fe_panel(obs);
  const double dt = seconds(t0);
  std::printf("panel fit         : %6.2f s for %d x %d with clustered errors (beta1 %.3f)\n",
              dt, stocks, days, fit.find("ts_up_post")->estimate);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("openmp threads    : %d\n", omp_get_max_threads());
#else
  std::printf("openmp            : not enabled\n");
#endif
  bench_matching();
  bench_clearing();
  bench_experiment();
  bench_panel();
  return 0;
}
