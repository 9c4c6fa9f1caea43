#include <doctest.h>

#include <cmath>
#include <random>

#include "auctionlab/econ/regression.hpp"
#include "auctionlab/econ/stat_tests.hpp"

using namespace auctionlab;
using namespace auctionlab::econ;

namespace {

// planted-panel generator: dep = b1 up*post + b2 down*post + b5 post
// + controls + stock effect + noise
std::vector<PanelObservation> make_panel(int n_stocks, int n_days, double b1, double b2,
                                         double b5, double noise_sd, std::uint64_t seed,
                                         bool with_controls = true) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<PanelObservation> obs;
  obs.reserve(static_cast<std::size_t>(n_stocks) * n_days);
  for (int s = 0; s < n_stocks; ++s) {
    const double fe = 5.0 * gauss(rng);
    const int group = s % 3;  // 0 flat, 1 up, 2 down
    for (int d = 0; d < n_days; ++d) {
      PanelObservation o;
      o.stock = static_cast<StockId>(s + 1);
      o.date_key = d;
      o.ts_up = group == 1;
      o.ts_down = group == 2;
      o.post_mifid = d >= n_days / 2;
      o.log_market_cap = with_controls ? 20.0 + 0.1 * gauss(rng) : 0.0;
      o.log_volume = with_controls ? 15.0 + 0.5 * gauss(rng) : 0.0;
      o.close_price = with_controls ? 100.0 + gauss(rng) : 0.0;
      o.volatility = with_controls ? 0.01 + 0.001 * gauss(rng) : 0.0;
      o.dep_var = b1 * o.ts_up * o.post_mifid + b2 * o.ts_down * o.post_mifid +
                  b5 * o.post_mifid + 0.3 * o.log_market_cap + 0.2 * o.log_volume +
                  0.05 * o.close_price + 40.0 * o.volatility + fe +
                  noise_sd * gauss(rng);
      obs.push_back(o);
    }
  }
  return obs;
}

}  // namespace

TEST_CASE("fe panel recovers planted coefficients exactly on noiseless data") {
  const auto obs = make_panel(6, 10, 2.25, -2.59, 0.0017, 0.0, 42);
  const auto r = fit_fe_panel(obs);
  CHECK(r.find("ts_up_post")->estimate == doctest::Approx(2.25).epsilon(1e-9));
  CHECK(r.find("ts_down_post")->estimate == doctest::Approx(-2.59).epsilon(1e-9));
  CHECK(r.find("post_mifid")->estimate == doctest::Approx(0.0017).epsilon(1e-7));
  CHECK(r.find("log_volume")->estimate == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(!r.find("ts_up")->identified);
  CHECK(!r.find("ts_down")->identified);
}

TEST_CASE("constant dependent variable fits zero slopes") {
  auto obs = make_panel(6, 8, 0, 0, 0, 0.0, 7);
  for (auto& o : obs) o.dep_var = 3.14;
  const auto r = fit_fe_panel(obs);
  CHECK(r.find("ts_up_post")->estimate == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.find("ts_down_post")->estimate == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.find("post_mifid")->estimate == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("tiny panel matches hand-computed demeaned OLS") {
  // 3 stocks x 4 days, single effective regressor (post), no controls
  std::vector<PanelObservation> obs;
  const double dep[3][4] = {{1.0, 2.0, 4.0, 5.0}, {0.0, 1.0, 2.0, 2.0}, {3.0, 3.0, 6.0, 7.0}};
  for (int s = 0; s < 3; ++s) {
    for (int d = 0; d < 4; ++d) {
      PanelObservation o;
      o.stock = static_cast<StockId>(s + 1);
      o.date_key = d;
      o.post_mifid = d >= 2;
      o.dep_var = dep[s][d];
      obs.push_back(o);
    }
  }
  PanelSpec spec;
  spec.include_controls = false;
  spec.include_interactions = false;
  const auto r = fit_fe_panel(obs, spec);
  // within-demeaned OLS on one regressor: beta = sum(x~ y~) / sum(x~^2);
  // x~ = +-1/2, per stock contribution (mean(post) - mean(pre)) / 2 * 2
  // stock deltas: (4.5-1.5)=3, (2-0.5)=1.5, (6.5-3)=3.5 -> mean where each
  // stock contributes equally: beta = (3 + 1.5 + 3.5) / 3 = 8/3
  CHECK(r.find("post_mifid")->estimate == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("fixed effects absorb stock-level shifts") {
  const auto base = make_panel(6, 10, 1.0, -1.0, 0.5, 0.3, 11);
  auto shifted = base;
  for (auto& o : shifted) o.dep_var += 17.0 * static_cast<double>(o.stock);
  const auto r1 = fit_fe_panel(base);
  const auto r2 = fit_fe_panel(shifted);
  for (const char* name : {"ts_up_post", "ts_down_post", "post_mifid"}) {
    CHECK(r1.find(name)->estimate == doctest::Approx(r2.find(name)->estimate).epsilon(1e-9));
  }
}

TEST_CASE("singular designs are reported with the collinear columns") {
  // every stock in the up group: ts_up*post == post
  auto obs = make_panel(6, 10, 1.0, 0.0, 0.5, 0.1, 13);
  for (auto& o : obs) {
    o.ts_up = 1;
    o.ts_down = 0;
  }
  CHECK_THROWS_AS(fit_fe_panel(obs), SingularDesignError);
  try {
    fit_fe_panel(obs);
  } catch (const SingularDesignError& e) {
    CHECK(std::string(e.what()).find("collinear") != std::string::npos);
  }
}

TEST_CASE("mean reversion regression") {
  SUBCASE("exact slope on exact data") {
    std::vector<ReversionDay> days;
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
      const double r_ca = static_cast<double>(rng() % 400) - 200.0;
      days.push_back(ReversionDay{r_ca, -0.5 * r_ca});
    }
    const auto r = fit_mean_reversion(days, 0.0);
    CHECK(r.find("b")->estimate == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(r.find("c")->estimate == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("zero overnight returns fit a zero slope") {
    std::vector<ReversionDay> days;
    for (int i = 0; i < 50; ++i) {
      days.push_back(ReversionDay{20.0 + i, 0.0});
    }
    const auto r = fit_mean_reversion(days, 10.0);
    CHECK(r.find("b")->estimate == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("threshold filter agrees with a textbook OLS oracle") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 5.0);
    std::vector<ReversionDay> days;
    for (int i = 0; i < 300; ++i) {
      const double r_ca = 60.0 * std::sin(i * 0.7) + gauss(rng);
      days.push_back(ReversionDay{r_ca, -0.297 * r_ca + gauss(rng)});
    }
    const double threshold = 10.0;
    // oracle: brute filter + closed-form slope
    std::vector<double> x, y;
    for (const auto& d : days) {
      if (std::abs(d.auction_return_bps) > threshold) {
        x.push_back(d.auction_return_bps);
        y.push_back(d.overnight_return_bps);
      }
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx += x[i];
      my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
    }
    const auto r = fit_mean_reversion(days, threshold);
    CHECK(r.n_obs == static_cast<std::int64_t>(x.size()));
    CHECK(r.find("b")->estimate == doctest::Approx(sxy / sxx).epsilon(1e-9));
    // planted slope recovered within its own confidence bounds
    const auto* b = r.find("b");
    CHECK(std::abs(b->estimate - (-0.297)) < 3.0 * b->se);
  }
  SUBCASE("too few observations after the filter") {
    std::vector<ReversionDay> days{{5.0, 1.0}, {6.0, 1.0}, {200.0, 1.0}};
    CHECK_THROWS_AS(fit_mean_reversion(days, 10.0), EstimationError);
  }
}

TEST_CASE("volume interaction regression") {
  SUBCASE("planted interaction coefficients") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<VolumeInteractionDay> days;
    for (int i = 0; i < 4000; ++i) {
      VolumeInteractionDay d;
      d.auction_return_bps = 40.0 * std::sin(i * 1.3) + gauss(rng);
      const int cell = i % 4;
      d.q1 = cell == 0;
      d.q4 = cell == 3;
      const double slope = -0.3 + (d.q1 ? -0.12 : 0.0) + (d.q4 ? 0.25 : 0.0);
      d.overnight_return_bps = slope * d.auction_return_bps + 0.5 * gauss(rng);
      days.push_back(d);
    }
    const auto r = fit_volume_interaction(days);
    CHECK(r.find("b1")->estimate == doctest::Approx(-0.3).epsilon(0.05));
    CHECK(r.find("slope_q1")->estimate == doctest::Approx(-0.42).epsilon(0.05));
    CHECK(r.find("slope_q4")->estimate == doctest::Approx(-0.05).epsilon(0.3));
    CHECK(r.find("slope_q23")->estimate == r.find("b1")->estimate);
  }
  SUBCASE("null interactions collapse to the base slope") {
    std::mt19937_64 rng(15);
    std::normal_distribution<double> gauss(0.0, 0.5);
    std::vector<VolumeInteractionDay> days;
    for (int i = 0; i < 3000; ++i) {
      VolumeInteractionDay d;
      d.auction_return_bps = 30.0 * std::cos(i * 0.9) + gauss(rng);
      d.q1 = i % 4 == 0;
      d.q4 = i % 4 == 3;
      d.overnight_return_bps = -0.3 * d.auction_return_bps + gauss(rng);
      days.push_back(d);
    }
    const auto r = fit_volume_interaction(days);
    const auto* b1 = r.find("b1");
    CHECK(std::abs(r.find("slope_q1")->estimate - b1->estimate) < 0.05);
    CHECK(std::abs(r.find("slope_q4")->estimate - b1->estimate) < 0.05);
  }
  SUBCASE("empty quartile cell is an error") {
    std::vector<VolumeInteractionDay> days;
    for (int i = 0; i < 100; ++i) {
      days.push_back(VolumeInteractionDay{1.0 * i, -0.3 * i, false, false});
    }
    CHECK_THROWS_AS(fit_volume_interaction(days), EstimationError);
  }
}

TEST_CASE("nearest-rank quartile flags") {
  // 10 volumes: p25 = 3rd smallest, p75 = 8th smallest
  const std::vector<double> vols{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::vector<std::uint8_t> q1, q4;
  volume_quartile_flags(vols, q1, q4);
  int n1 = 0, n4 = 0;
  for (std::size_t i = 0; i < vols.size(); ++i) {
    if (q1[i]) {
      ++n1;
      CHECK(vols[i] <= 30);
    }
    if (q4[i]) {
      ++n4;
      CHECK(vols[i] >= 80);
    }
    CHECK(!(q1[i] && q4[i]));
  }
  CHECK(n1 == 3);
  CHECK(n4 == 3);
}

TEST_CASE("average increase is the mean of per-stock changes") {
  std::vector<std::pair<double, double>> stocks{{100, 110}, {200, 180}};
  auto r = avg_increase(stocks);
  CHECK(r.mean_pct == doctest::Approx(0.0));
  CHECK(r.n_used == 2);

  r = avg_increase(std::vector<std::pair<double, double>>{{0.002, 0.005}});
  CHECK(r.mean_pct == doctest::Approx(150.0));

  SUBCASE("mean of ratios differs from ratio of means") {
    // three stocks where the two orders of averaging disagree
    std::vector<std::pair<double, double>> g{{10, 20}, {100, 110}, {1000, 1000}};
    const auto inc = avg_increase(g);
    double before = 0, after = 0;
    for (const auto& [b, a] : g) {
      before += b;
      after += a;
    }
    const double ratio_of_means = 100.0 * (after - before) / before;
    CHECK(inc.mean_pct == doctest::Approx((100.0 + 10.0 + 0.0) / 3.0));
    CHECK(std::abs(inc.mean_pct - ratio_of_means) > 20.0);
  }
  SUBCASE("nonpositive bases are excluded and reported") {
    std::vector<std::pair<double, double>> g{{0.0, 5.0}, {10.0, 11.0}};
    const auto r2 = avg_increase(g);
    CHECK(r2.n_used == 1);
    REQUIRE(r2.excluded.size() == 1);
    CHECK(r2.excluded[0] == 0);
  }
}

TEST_CASE("student t and welch") {
  // t = 2.776 is the 0.025 tail at 4 degrees of freedom
  CHECK(student_t_two_sided_p(2.776, 4.0) == doctest::Approx(0.05).epsilon(2e-3));
  CHECK(student_t_two_sided_p(1.96, 1e6) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(student_t_two_sided_p(0.0, 10.0) == doctest::Approx(1.0));

  const std::vector<double> a{1, 2, 3, 4};
  const std::vector<double> b{3, 4, 5, 6};
  const auto t = welch_t_test(a, b);
  CHECK(t.statistic == doctest::Approx(-2.19089).epsilon(1e-4));
  CHECK(t.df == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(t.p_value == doctest::Approx(0.0707).epsilon(2e-2));
}

TEST_CASE("wilcoxon signed rank") {
  SUBCASE("exact small-sample case enumerated by hand") {
    const std::vector<double> diffs{1.0, 2.0, 3.0};
    const auto r = wilcoxon_signed_rank(diffs);
    CHECK(r.exact);
    CHECK(r.w_plus == doctest::Approx(6.0));
    CHECK(r.p_value == doctest::Approx(0.25));
  }
  SUBCASE("exact p equals the brute-force enumeration") {
    std::mt19937_64 rng(101);
    for (int iter = 0; iter < 50; ++iter) {
      const int n = 3 + static_cast<int>(rng() % 9);
      std::vector<double> diffs;
      for (int i = 0; i < n; ++i) {
        diffs.push_back((static_cast<double>(rng() % 19) - 9.0) / 2.0);
      }
      std::vector<double> nonzero;
      for (double d : diffs) {
        if (d != 0) nonzero.push_back(d);
      }
      if (nonzero.size() < 2) continue;
      const auto ranks = midranks_of_abs(nonzero);
      double w_plus = 0;
      for (std::size_t i = 0; i < nonzero.size(); ++i) {
        if (nonzero[i] > 0) w_plus += ranks[i];
      }
      // enumerate all sign assignments
      const int m = static_cast<int>(ranks.size());
      int below = 0, above = 0;
      for (int mask = 0; mask < (1 << m); ++mask) {
        double w = 0;
        for (int i = 0; i < m; ++i) {
          if (mask & (1 << i)) w += ranks[static_cast<std::size_t>(i)];
        }
        if (w <= w_plus) ++below;
        if (w >= w_plus) ++above;
      }
      const double expect = std::min(
          1.0, 2.0 * std::min(below, above) / std::pow(2.0, m));
      const auto r = wilcoxon_signed_rank(diffs);
      CHECK(r.exact);
      CHECK(r.p_value == doctest::Approx(expect).epsilon(1e-12));
    }
  }
  SUBCASE("normal approximation tracks the exact tail for moderate n") {
    std::mt19937_64 rng(202);
    for (int iter = 0; iter < 40; ++iter) {
      const int n = 13 + static_cast<int>(rng() % 13);  // 13..25
      std::vector<double> diffs;
      for (int i = 0; i < n; ++i) {
        double d = 0;
        while (d == 0) d = static_cast<double>(rng() % 200) - 99.5;
        diffs.push_back(d);
      }
      const auto ranks = midranks_of_abs(diffs);
      double w_plus = 0;
      for (std::size_t i = 0; i < diffs.size(); ++i) {
        if (diffs[i] > 0) w_plus += ranks[i];
      }
      const double exact = signed_rank_exact_p(w_plus, ranks);
      const double approx = signed_rank_normal_p(w_plus, ranks);
      CHECK(std::abs(exact - approx) < 0.02);
    }
  }
}

TEST_CASE("two sample tests") {
  SUBCASE("identical samples are maximally insignificant") {
    const std::vector<double> a{1.0, 2.0, 3.0, 4.0};
    const auto r = two_sample_tests(a, a);
    CHECK(r.t_p == doctest::Approx(1.0));
    CHECK(r.wilcoxon_p == doctest::Approx(1.0));
  }
  SUBCASE("a large shift is detected by both tests") {
    std::mt19937_64 rng(303);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> group, control;
    for (int i = 0; i < 60; ++i) {
      group.push_back(5.0 + gauss(rng));
      control.push_back(gauss(rng));
    }
    const auto r = two_sample_tests(group, control);
    CHECK(r.t_p < 0.05);
    CHECK(r.wilcoxon_p < 0.05);
  }
}
