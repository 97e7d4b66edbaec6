#pragma once

#include <Eigen/Dense>

namespace harmonics {

using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr double kManifoldTolerance = 1e-8;

struct ManifoldCheck {
  bool on_manifold = false;
  /// max |X^T X - I|
  double deviation = 0.0;
};

ManifoldCheck validate_on_manifold(const Matrix& x,
                                   double tol = kManifoldTolerance);

/// A point of V(n, p): an n x p matrix with orthonormal columns.
class StiefelPoint {
 public:
  explicit StiefelPoint(Matrix x, double tol = kManifoldTolerance);

  static StiefelPoint identity(Index n, Index p);

  Index rows() const noexcept { return x_.rows(); }
  Index cols() const noexcept { return x_.cols(); }
  const Matrix& matrix() const noexcept { return x_; }

 private:
  Matrix x_;
};

/// Tangent at a base point under the skew condition X^T D + D^T X = 0.
/// The stricter X^T D = 0 is the special case A = 0 of the exponential map.
class TangentVector {
 public:
  TangentVector(StiefelPoint base, Matrix delta,
                double tol = kManifoldTolerance);

  const StiefelPoint& base() const noexcept { return base_; }
  const Matrix& matrix() const noexcept { return delta_; }

 private:
  StiefelPoint base_;
  Matrix delta_;
};

/// Ambient (chordal) squared distance p - tr(X^T Y), in [0, 2p]. This is not
/// the geodesic distance; it is the approximation the solver optimizes.
double squared_distance(const StiefelPoint& x, const StiefelPoint& y);

/// Maps a Euclidean gradient G to the manifold gradient G - X G^T X.
TangentVector project_to_tangent(const StiefelPoint& x, const Matrix& g);

/// Exponential map X B + Q C with [B; C] read off expm([[A, -R^T], [R, 0]]),
/// where A = X^T D and QR = (I - X X^T) D is a compact QR.
StiefelPoint exp_map(const StiefelPoint& x, const TangentVector& delta);

/// Same formula applied to an arbitrary n x p direction without the tangency
/// check. The result is re-orthonormalized when it drifts off the manifold.
StiefelPoint exp_map_unchecked(const StiefelPoint& x, const Matrix& delta);

/// Matrix exponential by scaling and squaring with a diagonal Pade approximant
/// of degree 3, 5, 7, 9 or 13 chosen from the 1-norm.
Matrix expm(const Matrix& m);

/// Closest matrix with orthonormal columns in Frobenius norm (U V^T of the
/// thin SVD).
Matrix polar_factor(const Matrix& m);

/// Flips columns so the entry of largest magnitude is positive. Ties (within
/// a relative 1e-9) go to the lowest row index. Idempotent.
void canonicalize_signs(Matrix& columns);

}  // namespace harmonics
