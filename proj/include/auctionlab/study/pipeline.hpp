#pragma once

#include <map>
#include <string>
#include <vector>

#include "auctionlab/metrics/metrics.hpp"
#include "auctionlab/sim/flow.hpp"
#include "auctionlab/study/config.hpp"

namespace auctionlab::study {

struct StudyConfig {
  enum class Mode { replay, simulate };
  Mode mode{Mode::simulate};
  std::string out_dir{"out"};

  // replay inputs
  std::string events_path;
  std::string session_config_path;
  std::string market_caps_path;  // symbol,market_cap_eur

  std::string calendar_path;         // empty: synthetic weekday calendar
  std::string suspensions_path;      // symbol,from_date (optional)
  std::map<int, std::string> tick_tables;  // year -> csv path; empty in simulate: built-in regime pair
  int year_before{2017};
  int year_after{2018};
  double group_factor{1.5};
  double reversion_threshold_bps{10.0};
  std::vector<std::string> models{"descriptive", "panel", "reversion", "volume_interaction"};
  int ma_window{10};

  // simulate-mode shape
  int sim_stocks{9};
  int sim_days_per_year{24};
  std::uint64_t sim_seed{20180103};
  sim::FlowParams sim_flow;

  metrics::MetricsConfig metrics_cfg;
};

StudyConfig load_study_config(const std::string& path);

struct StudyReport {
  std::int64_t invariant_violations{};
  std::vector<std::string> outputs;
};

// The whole pipeline: build DailyStockMetrics per stock-day (replayed or
// simulated), classify tick groups, apply the calendar filter, fit every
// configured model and emit the report bundle. Deterministic: identical
// config and inputs give byte-identical outputs.
StudyReport run_study(const StudyConfig& cfg);

// The analysis half alone: from prebuilt per-day metrics to the report
// bundle. run_study ends here; exposed so the model pipeline can be driven
// from metric files or synthetic panels directly.
StudyReport run_analysis(const std::vector<metrics::DailyStockMetrics>& rows,
                         const std::map<std::string, double>& market_caps,
                         const std::map<std::string, BandId>& symbol_bands,
                         const StudyConfig& cfg);

}  // namespace auctionlab::study
