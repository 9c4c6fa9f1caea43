#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "auctionlab/core/types.hpp"

namespace auctionlab::econ {

// Design matrix not of full rank after transformation; names the columns.
struct SingularDesignError : std::runtime_error {
  explicit SingularDesignError(const std::string& what) : std::runtime_error(what) {}
};

struct EstimationError : std::runtime_error {
  explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

struct CoefEstimate {
  std::string name;
  double estimate{};
  double se{};       // plain OLS
  double p_value{};  // two-sided, OLS errors
  std::optional<double> se_cluster;
  std::optional<double> p_cluster;
  bool identified{true};
  std::string note;
};

struct RegressionResult {
  std::vector<CoefEstimate> coefficients;
  std::int64_t n_obs{};
  double r_squared{};
  double residual_df{};

  const CoefEstimate* find(std::string_view name) const noexcept {
    for (const auto& c : coefficients) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

// One stock-day row of the panel. ts_up/ts_down are the tick-group dummies,
// post_mifid flags the post-regime year, suspended the dark-pool suspension
// indicator, q1/q4 the per-stock-year auction-volume quartiles.
struct PanelObservation {
  StockId stock{};
  std::int32_t date_key{};  // any monotone day key
  double dep_var{};
  std::uint8_t ts_up{}, ts_down{}, post_mifid{};
  double log_market_cap{}, log_volume{}, close_price{}, volatility{};
  std::uint8_t suspended{};
  std::uint8_t q1{}, q4{};
};

struct PanelSpec {
  bool include_interactions{true};  // ts_up x post, ts_down x post
  bool include_controls{true};
  bool include_suspension{false};
  bool cluster_by_stock{true};
};

// Fixed-effect panel fit: stock effects absorbed by within-stock demeaning,
// OLS on the demeaned data. Reports the interaction coefficients
// ts_up_post / ts_down_post, the post_mifid level shift, the controls, and
// (flagged, not estimated) the group dummies the fixed effects absorb.
// Cluster-robust standard errors by stock alongside the plain ones.
RegressionResult fit_fe_panel(std::span<const PanelObservation> obs, const PanelSpec& spec = {});

struct ReversionDay {
  double auction_return_bps{};
  double overnight_return_bps{};
};

// OLS of the overnight return on the auction return, over days whose
// absolute auction return exceeds the threshold. Coefficients "c" and "b".
RegressionResult fit_mean_reversion(std::span<const ReversionDay> days, double threshold_bps);

struct VolumeInteractionDay {
  double auction_return_bps{};
  double overnight_return_bps{};
  bool q1{};
  bool q4{};
};

// Quartile-interaction model: intercept shifts c2/c3 and slope interactions
// b2/b3 on top of the median-volume slope b1; also reports the combined
// slopes b1+b2 (Q1) and b1+b3 (Q4) with covariance-aware errors.
RegressionResult fit_volume_interaction(std::span<const VolumeInteractionDay> days);

// Nearest-rank quartile flags for one stock-year of auction volumes:
// q1 = volume at or below the 25th percentile, q4 = at or above the 75th
// (and not q1, so the flags stay disjoint even on degenerate ties).
void volume_quartile_flags(std::span<const double> volumes, std::vector<std::uint8_t>& q1,
                           std::vector<std::uint8_t>& q4);

struct AvgIncrease {
  double mean_pct{};
  int n_used{};
  std::vector<std::size_t> excluded;  // nonpositive base values
};

// Mean over stocks of the per-stock percent change; explicitly not the
// change of the group means.
AvgIncrease avg_increase(std::span<const std::pair<double, double>> per_stock);

}  // namespace auctionlab::econ
