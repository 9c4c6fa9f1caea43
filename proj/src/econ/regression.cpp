#include "auctionlab/econ/regression.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "auctionlab/econ/stat_tests.hpp"

namespace auctionlab::econ {

namespace {

struct OlsFit {
  Eigen::VectorXd beta;
  Eigen::MatrixXd cov;  // s^2 (X'X)^-1
  Eigen::MatrixXd xtx_inv;
  Eigen::VectorXd residuals;
  double s2{};
  double rss{};
  double tss{};
  double df{};
};

// Plain OLS with an explicit residual degrees-of-freedom count (the panel
// fit charges the absorbed fixed effects here).
OlsFit ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
           const std::vector<std::string>& names, double absorbed_params) {
  const auto n = static_cast<double>(x.rows());
  const auto k = static_cast<double>(x.cols());
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < x.cols()) {
    // name the columns past the numerical rank
    std::string cols;
    const auto perm = qr.colsPermutation().indices();
    for (Eigen::Index i = qr.rank(); i < x.cols(); ++i) {
      if (!cols.empty()) cols += ", ";
      cols += names[static_cast<std::size_t>(perm[i])];
    }
    throw SingularDesignError("singular design: collinear columns {" + cols + "}");
  }
  OlsFit f;
  f.beta = qr.solve(y);
  f.residuals = y - x * f.beta;
  f.rss = f.residuals.squaredNorm();
  const double ymean = y.mean();
  f.tss = (y.array() - ymean).square().sum();
  f.df = n - k - absorbed_params;
  if (f.df < 1.0) f.df = 1.0;
  f.s2 = f.rss / f.df;
  f.xtx_inv = (x.transpose() * x).inverse();
  f.cov = f.s2 * f.xtx_inv;
  return f;
}

CoefEstimate make_coef(const std::string& name, double est, double se, double df) {
  CoefEstimate c;
  c.name = name;
  c.estimate = est;
  c.se = se;
  c.p_value = se > 0 ? student_t_two_sided_p(est / se, df) : (est == 0.0 ? 1.0 : 0.0);
  return c;
}

}  // namespace

RegressionResult fit_fe_panel(std::span<const PanelObservation> obs, const PanelSpec& spec) {
  if (obs.size() < 4) throw EstimationError("panel too small");

  std::map<StockId, std::vector<std::size_t>> by_stock;
  std::map<std::int32_t, int> dates;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    by_stock[obs[i].stock].push_back(i);
    dates[obs[i].date_key] = 1;
  }
  if (by_stock.size() < 2 || dates.size() < 2) {
    throw EstimationError("panel needs at least two stocks and two periods");
  }

  std::vector<std::string> names;
  if (spec.include_interactions) {
    names.insert(names.end(), {"ts_up_post", "ts_down_post"});
  }
  names.push_back("post_mifid");
  if (spec.include_controls) {
    names.insert(names.end(), {"log_market_cap", "log_volume", "close_price", "volatility"});
  }
  if (spec.include_suspension) names.push_back("suspended");
  const auto k = static_cast<Eigen::Index>(names.size());
  const auto n = static_cast<Eigen::Index>(obs.size());

  Eigen::MatrixXd x(n, k);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const PanelObservation& o = obs[static_cast<std::size_t>(i)];
    y[i] = o.dep_var;
    Eigen::Index c = 0;
    if (spec.include_interactions) {
      x(i, c++) = static_cast<double>(o.ts_up) * o.post_mifid;
      x(i, c++) = static_cast<double>(o.ts_down) * o.post_mifid;
    }
    x(i, c++) = static_cast<double>(o.post_mifid);
    if (spec.include_controls) {
      x(i, c++) = o.log_market_cap;
      x(i, c++) = o.log_volume;
      x(i, c++) = o.close_price;
      x(i, c++) = o.volatility;
    }
    if (spec.include_suspension) x(i, c++) = static_cast<double>(o.suspended);
  }

  // within transformation: demean y and every regressor by stock
  for (const auto& [stock, idx] : by_stock) {
    Eigen::VectorXd xs = Eigen::VectorXd::Zero(k);
    double ys = 0;
    for (std::size_t i : idx) {
      ys += y[static_cast<Eigen::Index>(i)];
      xs += x.row(static_cast<Eigen::Index>(i)).transpose();
    }
    const double m = static_cast<double>(idx.size());
    ys /= m;
    xs /= m;
    for (std::size_t i : idx) {
      y[static_cast<Eigen::Index>(i)] -= ys;
      x.row(static_cast<Eigen::Index>(i)) -= xs.transpose();
    }
  }

  const auto groups = static_cast<double>(by_stock.size());
  OlsFit f = ols(x, y, names, groups);

  RegressionResult out;
  out.n_obs = static_cast<std::int64_t>(obs.size());
  out.residual_df = f.df;
  out.r_squared = f.tss > 0 ? 1.0 - f.rss / f.tss : 0.0;  // within R^2
  for (Eigen::Index c = 0; c < k; ++c) {
    out.coefficients.push_back(
        make_coef(names[static_cast<std::size_t>(c)], f.beta[c], std::sqrt(f.cov(c, c)), f.df));
  }

  if (spec.cluster_by_stock) {
    // CR1 sandwich: meat summed per stock, small-sample factor, t(G-1)
    Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
    for (const auto& [stock, idx] : by_stock) {
      Eigen::VectorXd xe = Eigen::VectorXd::Zero(k);
      for (std::size_t i : idx) {
        xe += x.row(static_cast<Eigen::Index>(i)).transpose() *
              f.residuals[static_cast<Eigen::Index>(i)];
      }
      meat += xe * xe.transpose();
    }
    const double nn = static_cast<double>(obs.size());
    const double kk = static_cast<double>(k);
    const double c1 = groups / (groups - 1.0) * (nn - 1.0) / (nn - kk);
    const Eigen::MatrixXd vc = c1 * f.xtx_inv * meat * f.xtx_inv;
    for (Eigen::Index c = 0; c < k; ++c) {
      const double se = std::sqrt(std::max(0.0, vc(c, c)));
      out.coefficients[static_cast<std::size_t>(c)].se_cluster = se;
      out.coefficients[static_cast<std::size_t>(c)].p_cluster =
          se > 0 ? student_t_two_sided_p(f.beta[c] / se, groups - 1.0)
                 : (f.beta[c] == 0.0 ? 1.0 : 0.0);
    }
  }

  if (!spec.include_interactions) return out;
  // the time-invariant group dummies are absorbed by the stock effects
  for (const char* name : {"ts_up", "ts_down"}) {
    CoefEstimate c;
    c.name = name;
    c.identified = false;
    c.p_value = 1.0;
    c.note = "absorbed by stock fixed effects; not identified";
    out.coefficients.push_back(c);
  }
  return out;
}

RegressionResult fit_mean_reversion(std::span<const ReversionDay> days, double threshold_bps) {
  std::vector<const ReversionDay*> kept;
  for (const auto& d : days) {
    if (std::abs(d.auction_return_bps) > threshold_bps) kept.push_back(&d);
  }
  if (kept.size() < 3) {
    throw EstimationError("mean reversion: fewer than 3 days above threshold");
  }
  const auto n = static_cast<Eigen::Index>(kept.size());
  Eigen::MatrixXd x(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = kept[static_cast<std::size_t>(i)]->auction_return_bps;
    y[i] = kept[static_cast<std::size_t>(i)]->overnight_return_bps;
  }
  OlsFit f = ols(x, y, {"c", "b"}, 0.0);
  RegressionResult out;
  out.n_obs = n;
  out.residual_df = f.df;
  out.r_squared = f.tss > 0 ? 1.0 - f.rss / f.tss : 0.0;
  out.coefficients.push_back(make_coef("c", f.beta[0], std::sqrt(f.cov(0, 0)), f.df));
  out.coefficients.push_back(make_coef("b", f.beta[1], std::sqrt(f.cov(1, 1)), f.df));
  return out;
}

RegressionResult fit_volume_interaction(std::span<const VolumeInteractionDay> days) {
  std::size_t n1 = 0, n4 = 0, nmid = 0;
  for (const auto& d : days) {
    if (d.q1) {
      ++n1;
    } else if (d.q4) {
      ++n4;
    } else {
      ++nmid;
    }
  }
  if (n1 == 0 || n4 == 0 || nmid == 0) {
    throw EstimationError("volume interaction: empty quartile cell");
  }
  const auto n = static_cast<Eigen::Index>(days.size());
  Eigen::MatrixXd x(n, 6);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& d = days[static_cast<std::size_t>(i)];
    x(i, 0) = 1.0;
    x(i, 1) = d.q1 ? 1.0 : 0.0;
    x(i, 2) = d.q4 ? 1.0 : 0.0;
    x(i, 3) = d.auction_return_bps;
    x(i, 4) = d.q1 ? d.auction_return_bps : 0.0;
    x(i, 5) = d.q4 ? d.auction_return_bps : 0.0;
    y[i] = d.overnight_return_bps;
  }
  const std::vector<std::string> names{"c1", "c2", "c3", "b1", "b2", "b3"};
  OlsFit f = ols(x, y, names, 0.0);
  RegressionResult out;
  out.n_obs = n;
  out.residual_df = f.df;
  out.r_squared = f.tss > 0 ? 1.0 - f.rss / f.tss : 0.0;
  for (Eigen::Index c = 0; c < 6; ++c) {
    out.coefficients.push_back(
        make_coef(names[static_cast<std::size_t>(c)], f.beta[c], std::sqrt(f.cov(c, c)), f.df));
  }
  // combined slopes, reported the way the tables are read
  auto combined = [&](const std::string& name, int a, int b) {
    const double est = (b < 0) ? f.beta[a] : f.beta[a] + f.beta[b];
    double var = f.cov(a, a);
    if (b >= 0) var += f.cov(b, b) + 2.0 * f.cov(a, b);
    out.coefficients.push_back(make_coef(name, est, std::sqrt(std::max(0.0, var)), f.df));
  };
  combined("slope_q1", 3, 4);
  combined("slope_q23", 3, -1);
  combined("slope_q4", 3, 5);
  return out;
}

void volume_quartile_flags(std::span<const double> volumes, std::vector<std::uint8_t>& q1,
                           std::vector<std::uint8_t>& q4) {
  const std::size_t n = volumes.size();
  q1.assign(n, 0);
  q4.assign(n, 0);
  if (n == 0) return;
  std::vector<double> sorted(volumes.begin(), volumes.end());
  std::sort(sorted.begin(), sorted.end());
  auto nearest_rank = [&](double p) {
    const auto r = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
    return sorted[std::max<std::size_t>(1, r) - 1];
  };
  const double p25 = nearest_rank(0.25);
  const double p75 = nearest_rank(0.75);
  for (std::size_t i = 0; i < n; ++i) {
    if (volumes[i] <= p25) {
      q1[i] = 1;
    } else if (volumes[i] >= p75) {
      q4[i] = 1;
    }
  }
}

AvgIncrease avg_increase(std::span<const std::pair<double, double>> per_stock) {
  AvgIncrease out;
  double acc = 0;
  for (std::size_t i = 0; i < per_stock.size(); ++i) {
    const auto& [v_before, v_after] = per_stock[i];
    if (v_before <= 0.0) {
      out.excluded.push_back(i);
      continue;
    }
    acc += 100.0 * (v_after - v_before) / v_before;
    ++out.n_used;
  }
  out.mean_pct = out.n_used > 0 ? acc / out.n_used : 0.0;
  return out;
}

}  // namespace auctionlab::econ
