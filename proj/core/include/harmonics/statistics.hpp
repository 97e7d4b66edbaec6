#pragma once

#include <cstddef>
#include <span>

namespace harmonics {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// Student-t distribution function P(T <= t) with df degrees of freedom
/// (df may be fractional, as Welch-Satterthwaite produces).
double student_t_cdf(double t, double df);

/// P(|T| >= |t|).
double student_t_two_sided(double t, double df);

struct SampleSummary {
  std::size_t count = 0;
  double mean = 0.0;
  /// Unbiased (n - 1) variance; zero for a single observation.
  double variance = 0.0;
  double stddev = 0.0;
};

SampleSummary summarize(std::span<const double> sample);

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

/// Unequal-variance two-sample test with Welch-Satterthwaite df.
/// Degenerate zero-variance samples: equal means give t = 0, p = 1;
/// different means give t = +/-inf, p = 0.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

/// One-sample t on paired differences, same zero-variance conventions.
TTestResult paired_t_test(std::span<const double> diffs);

/// (mean_a - mean_b)^2 / (var_a + var_b), unbiased variances.
double fisher_score(std::span<const double> a, std::span<const double> b);

}  // namespace harmonics
