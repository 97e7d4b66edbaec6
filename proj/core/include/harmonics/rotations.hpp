#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "harmonics/solver.hpp"

namespace harmonics {

/// a + b i + c j + d k with a^2 + b^2 + c^2 + d^2 = 1 (checked to 1e-12).
class UnitQuaternion {
 public:
  UnitQuaternion(double a, double b, double c, double d);

  /// cos(theta/2) + sin(theta/2) (u_x i + u_y j + u_z k); `axis` is
  /// normalized first.
  static UnitQuaternion from_axis_angle(const Eigen::Vector3d& axis,
                                        double angle);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }
  double d() const noexcept { return d_; }

 private:
  double a_, b_, c_, d_;
};

Eigen::Matrix3d quaternion_to_rotation(const UnitQuaternion& q);

enum class AxisMode {
  /// Every sample rotates about the same axis.
  kFixed,
  /// Each sample draws its own uniformly distributed unit axis.
  kRandom,
};

struct RotationSample {
  Eigen::Vector3d axis;
  double angle = 0.0;
  UnitQuaternion quaternion{1.0, 0.0, 0.0, 0.0};
  Eigen::Matrix3d matrix;
};

/// `count` rotations about the identity with angles drawn from N(0, sigma^2).
/// Deterministic for a given seed; sigma = 0 yields identities.
std::vector<RotationSample> sample_rotations(
    int count, double sigma, AxisMode mode, std::uint64_t seed,
    const Eigen::Vector3d& fixed_axis = Eigen::Vector3d::UnitZ());

struct SyntheticOptions {
  int count = 20;
  double sigma = std::numbers::pi / 15.0;
  AxisMode axis = AxisMode::kRandom;
  std::uint64_t seed = 0;
  /// Sample the Weiszfeld iteration starts from (zero-based).
  int init_index = 9;
  /// lambda = 1 / count and gamma = step. The chordal gradient sum is twice
  /// the mean log map near the optimum, so 0.5 is the Newton step.
  double step = 0.5;
  double tolerance = 1e-12;
  int max_iterations = 500;
};

struct SyntheticReport {
  std::vector<RotationSample> samples;
  Eigen::Matrix3d arithmetic_mean;
  double arithmetic_deviation = 0.0;
  /// d^2 to the identity of the closest rotation to the arithmetic mean.
  double polar_distance = 0.0;
  Eigen::Matrix3d stiefel_mean;
  double stiefel_deviation = 0.0;
  double stiefel_distance = 0.0;
  /// sum_s d^2(R_s, Psi) per Weiszfeld iteration.
  std::vector<double> trajectory;
  int iterations = 0;
  bool converged = false;
};

/// Arithmetic versus Stiefel mean of rotations sampled around the identity.
SyntheticReport run_synthetic_experiment(const SyntheticOptions& options);

/// Stiefel means started from every sample in turn; returns the largest
/// pairwise squared distance between them.
double initialization_spread(const std::vector<RotationSample>& samples,
                             const SyntheticOptions& options);

}  // namespace harmonics
