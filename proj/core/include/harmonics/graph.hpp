#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace harmonics {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Symmetric, nonnegative, zero-diagonal weight matrix of a connected graph.
/// The constructor enforces all four conditions and throws harmonics::Error
/// with a distinct kind for each violation.
class AdjacencyMatrix {
 public:
  explicit AdjacencyMatrix(Matrix weights);

  Index size() const noexcept { return weights_.rows(); }
  const Matrix& weights() const noexcept { return weights_; }

  /// Entrywise mean of a cohort; the result is validated again.
  static AdjacencyMatrix mean(std::span<const AdjacencyMatrix> cohort);

  /// Same for raw weight matrices that are not individually validated, e.g.
  /// subgraphs that are only connected once averaged.
  static AdjacencyMatrix mean(std::span<const Matrix> weights);

 private:
  Matrix weights_;
};

/// Number of connected components over nonzero weights (breadth-first search).
Index connected_components(const Matrix& weights);

class LaplacianMatrix {
 public:
  const Matrix& values() const noexcept { return values_; }
  const Vector& degrees() const noexcept { return degrees_; }
  Index size() const noexcept { return values_.rows(); }

 private:
  friend LaplacianMatrix build_laplacian(const AdjacencyMatrix& w);
  LaplacianMatrix(Matrix values, Vector degrees)
      : values_(std::move(values)), degrees_(std::move(degrees)) {}

  Matrix values_;
  Vector degrees_;
};

/// L = D - W.
LaplacianMatrix build_laplacian(const AdjacencyMatrix& w);

/// The p smallest eigenpairs in ascending order. Columns are sign-canonical
/// (see canonicalize_signs); for repeated eigenvalues any orthonormal basis of
/// the eigenspace may be returned, so compare projectors rather than columns.
struct EigenSystem {
  Vector eigenvalues;
  Matrix vectors;
};

EigenSystem eigensystem(const LaplacianMatrix& laplacian, Index p);

/// All eigenvalues of L, ascending.
Vector spectrum(const LaplacianMatrix& laplacian);

/// beta*I - L with beta = lambda_max(L) * (1 + kShiftMargin). Eigenvectors are
/// shared with L; eigenvalue order is reversed.
struct ShiftedLaplacian {
  Matrix values;
  double beta = 0.0;
  /// Set when L is the zero matrix; beta is then 0 and values is all zeros.
  bool degenerate = false;
};

inline constexpr double kShiftMargin = 1e-6;

ShiftedLaplacian shift_positive_definite(const LaplacianMatrix& laplacian);

struct ReconstructionPoint {
  Index p = 0;
  double error = 0.0;
};

/// Relative Frobenius error ||L - Phi_p Lambda_p Phi_p^T|| / ||L|| for
/// p = 1..p_max, using the p smallest eigenpairs. Nonincreasing in p and
/// exactly zero at p = n.
std::vector<ReconstructionPoint> reconstruction_error_curve(
    const LaplacianMatrix& laplacian, Index p_max);

/// Smallest p whose next-step decrease error(p) - error(p+1) falls below
/// fraction * error(1). Returns the last p of the curve when the decrease never
/// becomes marginal.
Index suggest_harmonic_count(std::span<const ReconstructionPoint> curve,
                             double fraction = 0.01);

}  // namespace harmonics
