#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "auctionlab/core/errors.hpp"
#include "auctionlab/io/csv.hpp"
#include "auctionlab/sim/experiment.hpp"
#include "auctionlab/study/day_runner.hpp"
#include "auctionlab/study/pipeline.hpp"

namespace {

int log_level() {
  const char* v = std::getenv("AUCTIONLAB_LOG");
  if (!v) return 1;
  const std::string s(v);
  if (s == "quiet") return 0;
  if (s == "debug") return 2;
  return 1;
}

void info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << msg << "\n";
}

int cmd_run(const std::string& config_path, double group_factor) {
  auto cfg = auctionlab::study::load_study_config(config_path);
  if (group_factor > 0) cfg.group_factor = group_factor;
  const auto report = auctionlab::study::run_study(cfg);
  for (const auto& f : report.outputs) info("wrote " + f);
  if (report.invariant_violations > 0) {
    std::cerr << "invariant violations: " << report.invariant_violations << "\n";
    return 1;
  }
  return 0;
}

int cmd_simulate(const std::string& experiment_path, const std::string& out_path) {
  using namespace auctionlab;
  const auto kv = study::KeyValueConfig::from_file(experiment_path);
  sim::ExperimentParams p;
  p.flow.rng_seed = static_cast<std::uint64_t>(kv.get_int_or("seed", 1));
  p.flow.session_minutes = static_cast<int>(kv.get_int_or("session_minutes", 30));
  p.flow.auction_minutes = static_cast<int>(kv.get_int_or("auction_minutes", 5));
  p.flow.events_per_minute = kv.get_double_or("events_per_minute", 120.0);
  p.flow.p_limit = kv.get_double_or("p_limit", 0.62);
  p.flow.p_market = kv.get_double_or("p_market", 0.18);
  p.flow.limit_dispersion = kv.get_double_or("limit_dispersion", 0.003);
  p.flow.size_mean = kv.get_double_or("size_mean", 120.0);
  p.flow.auction_orders = static_cast<int>(kv.get_int_or("auction_orders", 80));
  p.flow.auction_market_share = kv.get_double_or("auction_market_share", 0.35);
  p.flow.fundamental_start_eur = kv.get_double_or("fundamental_start", 100.0);
  p.flow.fundamental_vol = kv.get_double_or("fundamental_vol", 2e-5);
  p.ticks_eur.clear();
  {
    std::string s = kv.get_or("ticks", "0.01,0.02");
    std::size_t pos = 0;
    while (pos != std::string::npos) {
      const auto next = s.find(',', pos);
      p.ticks_eur.push_back(std::stod(s.substr(pos, next - pos)));
      pos = next == std::string::npos ? next : next + 1;
    }
  }
  const auto n_seeds = kv.get_int_or("seeds", 20);
  const auto seed0 = static_cast<std::uint64_t>(kv.get_int_or("seed0", 1000));
  for (std::int64_t i = 0; i < n_seeds; ++i) {
    p.seeds.push_back(seed0 + static_cast<std::uint64_t>(i));
  }
  const auto table = sim::run_tick_experiment(p);
  sim::write_experiment_csv(out_path, table);
  info("wrote " + out_path);
  for (const auto& s : table.summary) {
    info("tick " + io::format_double(s.tick_eur) +
         ": spread " + io::format_double(s.mean_quoted_spread_bps) +
         " bps, vol1 " + io::format_double(s.mean_vol1_eur) +
         " eur, auction vol " + io::format_double(s.mean_auction_volume_eur) + " eur");
  }
  return 0;
}

int cmd_metrics(const std::string& events_path, const std::string& out_dir,
                const std::string& tick_table_path, const std::string& session_path) {
  using namespace auctionlab;
  std::filesystem::create_directories(out_dir);
  const TickTable table = tick_table_path.empty()
                              ? TickTable::from_bands({TickBand{1, 0, micros_from_eur(0.01)}})
                              : io::load_tick_table(tick_table_path);
  study::SessionConfig scfg =
      session_path.empty()
          ? study::SessionConfig{}
          : study::SessionConfig::from_kv(study::KeyValueConfig::from_file(session_path));
  const auto rows = io::load_event_log(events_path);
  std::map<std::string, std::map<Date, std::pair<std::vector<engine::EngineEvent>,
                                                 std::vector<engine::EngineEvent>>>>
      feed;
  for (const auto& row : rows) {
    const Date d = date_from_ns(row.event.order.timestamp);
    engine::EngineEvent e = row.event;
    e.order.timestamp -= ns_at_midnight(d);
    auto& slot = feed[row.symbol][d];
    (e.order.timestamp < scfg.continuous_close ? slot.first : slot.second).push_back(e);
  }
  std::vector<metrics::DailyStockMetrics> metric_rows;
  std::vector<io::AuctionResultRow> auction_rows;
  std::int64_t violations = 0;
  metrics::MetricsConfig mcfg;
  for (auto& [sym, by_date] : feed) {
    for (auto& [date, streams] : by_date) {
      auto by_ts = [](const engine::EngineEvent& a, const engine::EngineEvent& b) {
        return a.order.timestamp < b.order.timestamp;
      };
      std::stable_sort(streams.first.begin(), streams.first.end(), by_ts);
      std::stable_sort(streams.second.begin(), streams.second.end(), by_ts);
      const auto day = study::run_day(sym, date, streams.first, streams.second, table, scfg, mcfg);
      metric_rows.push_back(day.metrics);
      if (day.auction) {
        auction_rows.push_back(io::AuctionResultRow{sym, date, scfg.venue, *day.auction});
      }
      violations += day.stats.conservation_violations;
    }
  }
  io::write_metrics_csv((std::filesystem::path(out_dir) / "metrics_daily.csv").string(),
                        metric_rows);
  io::write_auction_results_csv(
      (std::filesystem::path(out_dir) / "auction_results.csv").string(), auction_rows);
  info("wrote metrics for " + std::to_string(metric_rows.size()) + " stock-days");
  return violations > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exchange simulation and market-microstructure analytics"};
  app.require_subcommand(1);

  std::string run_config;
  double run_group_factor = 0.0;
  auto* run = app.add_subcommand("run", "run the full study pipeline");
  run->add_option("--config", run_config, "study config file")->required();
  run->add_option("--group-factor", run_group_factor,
                  "tick-group threshold factor (overrides the config, default 1.5)");

  std::string exp_path, exp_out{"experiment.csv"};
  auto* simulate = app.add_subcommand("simulate", "run a matched-draw tick-size experiment");
  simulate->add_option("--experiment", exp_path, "experiment spec file")->required();
  simulate->add_option("--out", exp_out, "output csv");

  std::string ev_path, ev_out, ev_ticks, ev_session;
  auto* metrics = app.add_subcommand("metrics", "replay an event log into daily metrics");
  metrics->add_option("--events", ev_path, "event-log csv")->required();
  metrics->add_option("--out", ev_out, "output directory")->required();
  metrics->add_option("--tick-table", ev_ticks, "tick table csv");
  metrics->add_option("--session-config", ev_session, "session config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_config, run_group_factor);
    if (simulate->parsed()) return cmd_simulate(exp_path, exp_out);
    if (metrics->parsed()) return cmd_metrics(ev_path, ev_out, ev_ticks, ev_session);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
