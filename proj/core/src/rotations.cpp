#include "harmonics/rotations.hpp"

#include <cmath>
#include <random>
#include <string>

#include "harmonics/error.hpp"

namespace harmonics {

namespace {

constexpr double kUnitTolerance = 1e-12;

WeiszfeldOptions mean_tangent_options(const SyntheticOptions& o,
                                      std::size_t count) {
  WeiszfeldOptions w;
  w.lambda = 1.0 / static_cast<double>(count);
  w.gamma = o.step;
  w.tolerance = o.tolerance;
  w.max_iterations = o.max_iterations;
  return w;
}

std::vector<StiefelPoint> as_points(const std::vector<RotationSample>& samples) {
  std::vector<StiefelPoint> points;
  points.reserve(samples.size());
  for (const auto& s : samples) points.emplace_back(Matrix(s.matrix));
  return points;
}

}  // namespace

UnitQuaternion::UnitQuaternion(double a, double b, double c, double d)
    : a_(a), b_(b), c_(c), d_(d) {
  const double norm2 = a * a + b * b + c * c + d * d;
  if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > kUnitTolerance) {
    throw Error(ErrorKind::OutOfRange,
                "quaternion is not unit length (|q|^2 = " +
                    std::to_string(norm2) + ")");
  }
}

UnitQuaternion UnitQuaternion::from_axis_angle(const Eigen::Vector3d& axis,
                                               double angle) {
  const double len = axis.norm();
  if (!(len > 0.0)) {
    throw Error(ErrorKind::OutOfRange, "rotation axis must be nonzero");
  }
  const Eigen::Vector3d u = axis / len;
  const double s = std::sin(0.5 * angle);
  return UnitQuaternion(std::cos(0.5 * angle), s * u.x(), s * u.y(), s * u.z());
}

Eigen::Matrix3d quaternion_to_rotation(const UnitQuaternion& q) {
  const double a = q.a(), b = q.b(), c = q.c(), d = q.d();
  Eigen::Matrix3d r;
  r << 1 - 2 * c * c - 2 * d * d, 2 * b * c - 2 * a * d, 2 * a * c + 2 * b * d,
      2 * b * c + 2 * a * d, 1 - 2 * b * b - 2 * d * d, 2 * c * d - 2 * a * b,
      2 * b * d - 2 * a * c, 2 * a * b + 2 * c * d, 1 - 2 * b * b - 2 * c * c;
  return r;
}

std::vector<RotationSample> sample_rotations(int count, double sigma,
                                             AxisMode mode, std::uint64_t seed,
                                             const Eigen::Vector3d& fixed_axis) {
  if (count < 1) throw Error(ErrorKind::OutOfRange, "count must be positive");
  if (!(sigma >= 0.0)) {
    throw Error(ErrorKind::OutOfRange, "sigma must be nonnegative");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<RotationSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    RotationSample s;
    if (mode == AxisMode::kRandom) {
      Eigen::Vector3d v;
      do {
        v = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
      } while (v.norm() < 1e-12);
      s.axis = v.normalized();
    } else {
      s.axis = fixed_axis.normalized();
    }
    s.angle = sigma * gauss(rng);
    s.quaternion = UnitQuaternion::from_axis_angle(s.axis, s.angle);
    s.matrix = quaternion_to_rotation(s.quaternion);
    out.push_back(s);
  }
  return out;
}

SyntheticReport run_synthetic_experiment(const SyntheticOptions& options) {
  if (options.init_index < 0 || options.init_index >= options.count) {
    throw Error(ErrorKind::OutOfRange, "init_index outside the sample range");
  }
  SyntheticReport report;
  report.samples = sample_rotations(options.count, options.sigma, options.axis,
                                    options.seed);
  const std::vector<StiefelPoint> points = as_points(report.samples);
  const StiefelPoint truth = StiefelPoint::identity(3, 3);

  const ArithmeticMean arith = arithmetic_mean_harmonics(points);
  report.arithmetic_mean = arith.mean;
  report.arithmetic_deviation = arith.deviation;
  report.polar_distance =
      squared_distance(StiefelPoint(polar_factor(arith.mean)), truth);

  const WeiszfeldResult w =
      weiszfeld_mean(points, points[static_cast<std::size_t>(options.init_index)],
                     mean_tangent_options(options, points.size()));
  report.stiefel_mean = w.mean.matrix();
  report.stiefel_deviation = validate_on_manifold(w.mean.matrix()).deviation;
  report.stiefel_distance = squared_distance(w.mean, truth);
  report.trajectory = w.cost_trace;
  report.iterations = w.iterations;
  report.converged = w.converged;
  return report;
}

double initialization_spread(const std::vector<RotationSample>& samples,
                             const SyntheticOptions& options) {
  const std::vector<StiefelPoint> points = as_points(samples);
  const WeiszfeldOptions w = mean_tangent_options(options, points.size());
  std::vector<StiefelPoint> means;
  for (const auto& start : points) {
    means.push_back(weiszfeld_mean(points, start, w).mean);
  }
  double spread = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    for (std::size_t j = i + 1; j < means.size(); ++j) {
      spread = std::max(spread, squared_distance(means[i], means[j]));
    }
  }
  return spread;
}

}  // namespace harmonics
