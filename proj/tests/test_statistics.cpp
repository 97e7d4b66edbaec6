#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <gtest/gtest.h>

#include "harmonics/error.hpp"
#include "harmonics/statistics.hpp"

namespace {

namespace bm = boost::math;

double oracle_two_sided(double t, double df) {
  return 2.0 * bm::cdf(bm::complement(bm::students_t(df), std::abs(t)));
}

TEST(IncompleteBeta, MatchesReference) {
  for (double a : {0.5, 1.0, 2.5, 7.0, 30.0}) {
    for (double b : {0.5, 1.0, 3.0, 15.0}) {
      for (double x : {0.0, 0.01, 0.2, 0.5, 0.77, 0.99, 1.0}) {
        EXPECT_NEAR(harmonics::incomplete_beta(a, b, x), bm::ibeta(a, b, x), 1e-12)
            << a << ' ' << b << ' ' << x;
      }
    }
  }
  EXPECT_THROW(harmonics::incomplete_beta(-1.0, 1.0, 0.5), harmonics::Error);
  EXPECT_THROW(harmonics::incomplete_beta(1.0, 1.0, 1.5), harmonics::Error);
}

TEST(StudentT, DistributionFunctionMatchesReference) {
  for (double df : {1.0, 2.0, 3.7, 10.0, 29.5, 200.0}) {
    for (double t : {-8.0, -2.0, -0.3, 0.0, 0.4, 1.96, 5.0}) {
      EXPECT_NEAR(harmonics::student_t_cdf(t, df), bm::cdf(bm::students_t(df), t), 1e-12);
      EXPECT_NEAR(harmonics::student_t_two_sided(t, df), oracle_two_sided(t, df), 1e-12);
    }
  }
}

TEST(StudentT, TableCriticalValues) {
  EXPECT_NEAR(harmonics::student_t_two_sided(2.228, 10.0), 0.05, 5e-4);
  EXPECT_NEAR(harmonics::student_t_two_sided(2.042, 30.0), 0.05, 5e-4);
}

TEST(StudentT, InfiniteStatistic) {
  EXPECT_EQ(harmonics::student_t_two_sided(std::numeric_limits<double>::infinity(), 5.0), 0.0);
  EXPECT_EQ(harmonics::student_t_cdf(-std::numeric_limits<double>::infinity(), 5.0), 0.0);
  EXPECT_THROW(harmonics::student_t_cdf(1.0, 0.0), harmonics::Error);
}

TEST(Summary, UnbiasedVariance) {
  const std::vector<double> x{2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0};
  const auto s = harmonics::summarize(x);
  EXPECT_EQ(s.count, 8u);
  EXPECT_DOUBLE_EQ(s.mean, 5.0);
  EXPECT_DOUBLE_EQ(s.variance, 32.0 / 7.0);
  EXPECT_DOUBLE_EQ(s.stddev, std::sqrt(32.0 / 7.0));
  const std::vector<double> one{3.0};
  EXPECT_EQ(harmonics::summarize(one).variance, 0.0);
}

TEST(Welch, MatchesIndependentComputation) {
  const std::vector<double> a{19.1, 22.4, 18.7, 25.0, 21.3, 17.9};
  const std::vector<double> b{15.2, 16.8, 12.9, 18.4, 14.1, 19.9, 13.3, 16.0};
  const auto sa = harmonics::summarize(a);
  const auto sb = harmonics::summarize(b);
  const double va = sa.variance / 6.0, vb = sb.variance / 8.0;
  const double t = (sa.mean - sb.mean) / std::sqrt(va + vb);
  const double df = (va + vb) * (va + vb) / (va * va / 5.0 + vb * vb / 7.0);
  const auto r = harmonics::welch_t_test(a, b);
  EXPECT_NEAR(r.t, t, 1e-12);
  EXPECT_NEAR(r.df, df, 1e-10);
  EXPECT_NEAR(r.p_value, oracle_two_sided(t, df), 1e-12);
  const auto swapped = harmonics::welch_t_test(b, a);
  EXPECT_NEAR(swapped.t, -t, 1e-12);
  EXPECT_NEAR(swapped.p_value, r.p_value, 1e-15);
}

TEST(Welch, ZeroVarianceConventions) {
  const std::vector<double> c1{2.0, 2.0, 2.0};
  const std::vector<double> c2{2.0, 2.0};
  const std::vector<double> c3{5.0, 5.0, 5.0};
  const auto same = harmonics::welch_t_test(c1, c2);
  EXPECT_EQ(same.t, 0.0);
  EXPECT_EQ(same.p_value, 1.0);
  const auto diff = harmonics::welch_t_test(c1, c3);
  EXPECT_TRUE(std::isinf(diff.t));
  EXPECT_LT(diff.t, 0.0);
  EXPECT_EQ(diff.p_value, 0.0);
}

TEST(Welch, RejectsTinySamples) {
  const std::vector<double> one{1.0};
  const std::vector<double> two{1.0, 2.0};
  try {
    harmonics::welch_t_test(one, two);
    FAIL();
  } catch (const harmonics::Error& e) {
    EXPECT_EQ(e.kind(), harmonics::ErrorKind::InsufficientSamples);
  }
}

TEST(Paired, MatchesOneSampleTest) {
  const std::vector<double> d{0.3, -0.1, 0.5, 0.2, 0.4, 0.0, 0.6};
  const auto s = harmonics::summarize(d);
  const double t = s.mean / (s.stddev / std::sqrt(7.0));
  const auto r = harmonics::paired_t_test(d);
  EXPECT_NEAR(r.t, t, 1e-12);
  EXPECT_EQ(r.df, 6.0);
  EXPECT_NEAR(r.p_value, oracle_two_sided(t, 6.0), 1e-12);
  const std::vector<double> zeros(5, 0.0);
  EXPECT_EQ(harmonics::paired_t_test(zeros).p_value, 1.0);
  const std::vector<double> shift(5, 0.25);
  EXPECT_EQ(harmonics::paired_t_test(shift).p_value, 0.0);
}

TEST(Fisher, Formula) {
  const std::vector<double> a{1.0, 2.0, 3.0};
  const std::vector<double> b{4.0, 6.0, 8.0};
  EXPECT_DOUBLE_EQ(harmonics::fisher_score(a, b), 16.0 / (1.0 + 4.0));
  const std::vector<double> c{1.0, 1.0};
  try {
    harmonics::fisher_score(c, c);
    FAIL();
  } catch (const harmonics::Error& e) {
    EXPECT_EQ(e.kind(), harmonics::ErrorKind::ZeroVariance);
  }
}

TEST(Welch, NullPValuesLookUniform) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> p;
  for (int r = 0; r < 500; ++r) {
    std::vector<double> a(12), b(17);
    for (double& x : a) x = g(rng);
    for (double& x : b) x = 3.0 * g(rng);
    p.push_back(harmonics::welch_t_test(a, b).p_value);
  }
  std::sort(p.begin(), p.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double lo = static_cast<double>(i) / p.size();
    const double hi = static_cast<double>(i + 1) / p.size();
    ks = std::max({ks, p[i] - lo, hi - p[i]});
  }
  // Asymptotic Kolmogorov critical value at 0.01: 1.628 / sqrt(n).
  EXPECT_LT(ks, 1.628 / std::sqrt(500.0));
}

}  // namespace
