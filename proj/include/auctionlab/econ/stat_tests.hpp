#pragma once

#include <span>
#include <vector>

namespace auctionlab::econ {

double normal_cdf(double z) noexcept;

// Two-sided p-value of a t statistic with `df` degrees of freedom, via the
// regularized incomplete beta function.
double student_t_two_sided_p(double t, double df);

struct TTestResult {
  double statistic{};
  double df{};
  double p_value{};
};

// Welch unequal-variance t-test. Zero-variance samples degenerate to p = 1
// (equal means) or p = 0 (different means) instead of dividing by zero.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

struct WilcoxonResult {
  double w_plus{};   // positive-rank sum
  int n_used{};      // after dropping zero differences
  double p_value{};  // two-sided
  bool exact{};      // enumeration vs normal approximation
};

// One-sample Wilcoxon signed-rank test of median zero. Exact enumeration for
// n <= exact_max_n, otherwise normal approximation with continuity and tie
// corrections. Midranks handle tied magnitudes.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> diffs, int exact_max_n = 12);

// Exact two-sided tail probability of W+ over all sign assignments of the
// given midranks (computed by distribution counting, equivalent to the 2^n
// enumeration).
double signed_rank_exact_p(double w_plus, std::span<const double> ranks);

/// Continuity-corrected normal approximation of the same tail.
double signed_rank_normal_p(double w_plus, std::span<const double> ranks);

/// Midranks of the absolute values (ties share the average rank).
std::vector<double> midranks_of_abs(std::span<const double> diffs);

struct TwoSampleTests {
  double t_p{};
  double wilcoxon_p{};
};

// Compares a group of per-stock changes against a control group: Welch
// t-test on the two samples, and a signed-rank test of the group's
// deviations from the control mean (the samples need not be equally sized).
TwoSampleTests two_sample_tests(std::span<const double> group, std::span<const double> control);

}  // namespace auctionlab::econ
