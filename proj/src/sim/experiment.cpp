#include "auctionlab/sim/experiment.hpp"

#include <fstream>

#include "auctionlab/core/errors.hpp"
#include "auctionlab/io/csv.hpp"
#include "auctionlab/study/day_runner.hpp"

namespace auctionlab::sim {

namespace {

metrics::DailyStockMetrics simulate_cell(const FlowParams& flow, double tick_eur,
                                         std::uint64_t seed,
                                         const metrics::MetricsConfig& mcfg) {
  FlowParams f = flow;
  f.rng_seed = seed;
  const TickTable table = TickTable::from_bands({TickBand{1, 0, micros_from_eur(tick_eur)}});
  const RawFlow raw = generate_raw_flow(f);
  const SessionStreams streams = materialize(raw, table, 1, /*stock=*/1);

  study::SessionConfig scfg;
  scfg.venue = auction::Venue::euronext;
  scfg.continuous_open = 0;
  scfg.continuous_close = streams.continuous_end;
  scfg.clear_window_begin = streams.auction_end - 30LL * 1'000'000'000;
  scfg.clear_window_end = streams.auction_end;
  scfg.auction_seed = seed;
  scfg.band = 1;
  scfg.previous_close["SIM"] =
      snap_to_grid(f.fundamental_start_eur, micros_from_eur(tick_eur), SnapPolicy::round_nearest);

  const auto day = study::run_day("SIM", Date{2018, 1, 2}, streams.continuous, streams.auction,
                                  table, scfg, mcfg);
  return day.metrics;
}

double mean_or_zero(double acc, int n) { return n > 0 ? acc / n : 0.0; }

}  // namespace

ExperimentTable run_tick_experiment(const ExperimentParams& p) {
  if (p.ticks_eur.size() < 2) throw ConfigError("tick experiment needs >= 2 tick sizes");
  if (p.seeds.size() < 20) throw ConfigError("tick experiment needs >= 20 seeds");
  ExperimentTable out;
  const std::size_t nt = p.ticks_eur.size();
  const std::size_t ns = p.seeds.size();
  out.cells.resize(nt * ns);

  const auto total = static_cast<std::int64_t>(nt * ns);
#pragma omp parallel for schedule(dynamic) if (p.parallel)
  for (std::int64_t flat = 0; flat < total; ++flat) {
    const std::size_t ti = static_cast<std::size_t>(flat) / ns;
    const std::size_t si = static_cast<std::size_t>(flat) % ns;
    ExperimentCell& cell = out.cells[static_cast<std::size_t>(flat)];
    cell.tick_eur = p.ticks_eur[ti];
    cell.seed = p.seeds[si];
    cell.day = simulate_cell(p.flow, cell.tick_eur, cell.seed, p.metrics_cfg);
  }

  for (std::size_t ti = 0; ti < nt; ++ti) {
    TickSummary s;
    s.tick_eur = p.ticks_eur[ti];
    double spread = 0, vol1 = 0, vol5 = 0, avol = 0, tvol = 0, ntr = 0, nqu = 0, nip = 0;
    int n_spread = 0;
    for (std::size_t si = 0; si < ns; ++si) {
      const auto& d = out.cells[ti * ns + si].day;
      ++s.n_seeds;
      if (d.quoted_spread_bps) {
        spread += *d.quoted_spread_bps;
        ++n_spread;
      }
      vol1 += d.bidask_vol1_eur.value_or(0.0);
      vol5 += d.bidask_vol5_eur.value_or(0.0);
      avol += d.auction.auction_volume_eur.value_or(0.0);
      tvol += d.transacted_volume_eur;
      ntr += static_cast<double>(d.n_trades);
      nqu += static_cast<double>(d.n_quote_updates);
      nip += static_cast<double>(d.auction.n_indicative_updates);
    }
    s.mean_quoted_spread_bps = mean_or_zero(spread, n_spread);
    s.mean_vol1_eur = mean_or_zero(vol1, s.n_seeds);
    s.mean_vol5_eur = mean_or_zero(vol5, s.n_seeds);
    s.mean_auction_volume_eur = mean_or_zero(avol, s.n_seeds);
    s.mean_transacted_volume_eur = mean_or_zero(tvol, s.n_seeds);
    s.mean_n_trades = mean_or_zero(ntr, s.n_seeds);
    s.mean_quote_updates = mean_or_zero(nqu, s.n_seeds);
    s.mean_indicative_updates = mean_or_zero(nip, s.n_seeds);
    out.summary.push_back(s);
  }
  return out;
}

void write_experiment_csv(const std::string& path, const ExperimentTable& table) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write: " + path);
  out << "tick,seed,quoted_spread_bps,bidask_vol1_eur,bidask_vol5_eur,auction_volume_eur,"
         "transacted_volume_eur,n_trades,n_quote_updates,n_indicative_updates\n";
  for (const auto& c : table.cells) {
    const auto& d = c.day;
    out << io::format_double(c.tick_eur) << ',' << c.seed << ','
        << (d.quoted_spread_bps ? io::format_double(*d.quoted_spread_bps) : "") << ','
        << io::format_double(d.bidask_vol1_eur.value_or(0.0)) << ','
        << io::format_double(d.bidask_vol5_eur.value_or(0.0)) << ','
        << io::format_double(d.auction.auction_volume_eur.value_or(0.0)) << ','
        << io::format_double(d.transacted_volume_eur) << ',' << d.n_trades << ','
        << d.n_quote_updates << ',' << d.auction.n_indicative_updates << '\n';
  }
  out << "# tick,seeds,mean_quoted_spread_bps,mean_vol1_eur,mean_vol5_eur,"
         "mean_auction_volume_eur,mean_transacted_volume_eur,mean_n_trades,"
         "mean_quote_updates,mean_indicative_updates\n";
  for (const auto& s : table.summary) {
    out << io::format_double(s.tick_eur) << ',' << s.n_seeds << ','
        << io::format_double(s.mean_quoted_spread_bps) << ','
        << io::format_double(s.mean_vol1_eur) << ',' << io::format_double(s.mean_vol5_eur) << ','
        << io::format_double(s.mean_auction_volume_eur) << ','
        << io::format_double(s.mean_transacted_volume_eur) << ','
        << io::format_double(s.mean_n_trades) << ',' << io::format_double(s.mean_quote_updates)
        << ',' << io::format_double(s.mean_indicative_updates) << '\n';
  }
}

}  // namespace auctionlab::sim
