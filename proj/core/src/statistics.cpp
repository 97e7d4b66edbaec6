#include "harmonics/statistics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "harmonics/error.hpp"

namespace harmonics {

namespace {

constexpr double kEpsilon = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxTerms = 10000;

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxTerms; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEpsilon) return h;
  }
  throw Error(ErrorKind::OutOfRange,
              "incomplete beta continued fraction did not converge");
}

void require_size(std::span<const double> s, std::size_t min, const char* what) {
  if (s.size() < min) {
    throw Error(ErrorKind::InsufficientSamples,
                std::string(what) + " needs at least " + std::to_string(min) +
                    " observations, got " + std::to_string(s.size()));
  }
}

TTestResult degenerate(double numerator) {
  if (numerator == 0.0) return {0.0, 0.0, 1.0};
  const double inf = std::numeric_limits<double>::infinity();
  return {numerator > 0.0 ? inf : -inf, 0.0, 0.0};
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "incomplete_beta arguments out of range");
  }
  if (x == 0.0 || x == 1.0) return x;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double df) {
  if (!(df > 0.0)) {
    throw Error(ErrorKind::OutOfRange, "degrees of freedom must be positive");
  }
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return incomplete_beta(0.5 * df, 0.5, x);
}

double student_t_cdf(double t, double df) {
  const double tail = 0.5 * student_t_two_sided(t, df);
  return t >= 0.0 ? 1.0 - tail : tail;
}

SampleSummary summarize(std::span<const double> sample) {
  SampleSummary s;
  s.count = sample.size();
  if (sample.empty()) return s;
  double sum = 0.0;
  for (double v : sample) sum += v;
  s.mean = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : sample) ss += (v - s.mean) * (v - s.mean);
    s.variance = ss / static_cast<double>(s.count - 1);
  }
  s.stddev = std::sqrt(s.variance);
  return s;
}

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  require_size(a, 2, "welch_t_test sample a");
  require_size(b, 2, "welch_t_test sample b");
  const auto sa = summarize(a);
  const auto sb = summarize(b);
  const double va = sa.variance / static_cast<double>(sa.count);
  const double vb = sb.variance / static_cast<double>(sb.count);
  const double se2 = va + vb;
  const double diff = sa.mean - sb.mean;
  if (se2 == 0.0) return degenerate(diff);
  const double t = diff / std::sqrt(se2);
  const double df = se2 * se2 /
                    (va * va / static_cast<double>(sa.count - 1) +
                     vb * vb / static_cast<double>(sb.count - 1));
  return {t, df, student_t_two_sided(t, df)};
}

TTestResult paired_t_test(std::span<const double> diffs) {
  require_size(diffs, 2, "paired_t_test");
  const auto s = summarize(diffs);
  if (s.variance == 0.0) return degenerate(s.mean);
  const double t = s.mean / (s.stddev / std::sqrt(static_cast<double>(s.count)));
  const double df = static_cast<double>(s.count - 1);
  return {t, df, student_t_two_sided(t, df)};
}

double fisher_score(std::span<const double> a, std::span<const double> b) {
  require_size(a, 2, "fisher_score sample a");
  require_size(b, 2, "fisher_score sample b");
  const auto sa = summarize(a);
  const auto sb = summarize(b);
  const double denom = sa.variance + sb.variance;
  if (denom == 0.0) {
    throw Error(ErrorKind::ZeroVariance, "fisher_score: both samples constant");
  }
  const double diff = sa.mean - sb.mean;
  return diff * diff / denom;
}

}  // namespace harmonics
