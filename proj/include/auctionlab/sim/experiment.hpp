#pragma once

#include <vector>

#include "auctionlab/metrics/metrics.hpp"
#include "auctionlab/sim/flow.hpp"

namespace auctionlab::sim {

struct ExperimentParams {
  FlowParams flow;
  std::vector<double> ticks_eur{0.01, 0.02};
  std::vector<std::uint64_t> seeds{};  // one simulated day per (tick, seed)
  metrics::MetricsConfig metrics_cfg;
  bool parallel{true};
};

struct ExperimentCell {
  double tick_eur{};
  std::uint64_t seed{};
  metrics::DailyStockMetrics day;
};

struct TickSummary {
  double tick_eur{};
  int n_seeds{};
  double mean_quoted_spread_bps{};
  double mean_vol1_eur{};
  double mean_vol5_eur{};
  double mean_auction_volume_eur{};
  double mean_transacted_volume_eur{};
  double mean_n_trades{};
  double mean_quote_updates{};
  double mean_indicative_updates{};
};

struct ExperimentTable {
  std::vector<ExperimentCell> cells;     // seed-major within tick
  std::vector<TickSummary> summary;      // one row per tick
};

// Matched-draw tick experiment: per seed one raw flow, snapped onto every
// tick grid, each cell simulated as a full day with a Euronext close. The
// cell grid is embarrassingly parallel; results are bitwise independent of
// the thread count.
ExperimentTable run_tick_experiment(const ExperimentParams& p);

void write_experiment_csv(const std::string& path, const ExperimentTable& table);

}  // namespace auctionlab::sim
