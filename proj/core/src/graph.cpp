#include "harmonics/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "harmonics/error.hpp"
#include "harmonics/stiefel.hpp"

namespace harmonics {

namespace {

constexpr double kSymmetryTolerance = 1e-12;

Vector ascending_eigenvalues(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric,
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::EigenSolverFailure,
                "symmetric eigensolver did not converge");
  }
  return solver.eigenvalues();
}

}  // namespace

Index connected_components(const Matrix& weights) {
  const Index n = weights.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  Index components = 0;
  std::deque<Index> queue;
  for (Index start = 0; start < n; ++start) {
    if (seen[start]) continue;
    ++components;
    seen[start] = true;
    queue.push_back(start);
    while (!queue.empty()) {
      const Index u = queue.front();
      queue.pop_front();
      for (Index v = 0; v < n; ++v) {
        if (!seen[v] && weights(u, v) != 0.0) {
          seen[v] = true;
          queue.push_back(v);
        }
      }
    }
  }
  return components;
}

AdjacencyMatrix::AdjacencyMatrix(Matrix weights) : weights_(std::move(weights)) {
  const Index n = weights_.rows();
  if (n == 0 || weights_.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch,
                "adjacency matrix must be square and nonempty, got " +
                    std::to_string(weights_.rows()) + "x" +
                    std::to_string(weights_.cols()));
  }
  if (!weights_.allFinite()) {
    throw Error(ErrorKind::NonFinite, "adjacency matrix has non-finite entries");
  }
  const double scale = weights_.cwiseAbs().maxCoeff();
  const double asym = (weights_ - weights_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance * scale) {
    throw Error(ErrorKind::Asymmetric,
                "adjacency matrix is not symmetric (max |w_ij - w_ji| = " +
                    std::to_string(asym) + ")");
  }
  if (weights_.minCoeff() < 0.0) {
    throw Error(ErrorKind::NegativeWeight, "adjacency matrix has negative weights");
  }
  if (weights_.diagonal().cwiseAbs().maxCoeff() != 0.0) {
    throw Error(ErrorKind::NonZeroDiagonal,
                "adjacency matrix has self-loops (nonzero diagonal)");
  }
  weights_ = 0.5 * (weights_ + weights_.transpose()).eval();
  const Index parts = connected_components(weights_);
  if (parts != 1) {
    throw Error(ErrorKind::Disconnected,
                "graph is disconnected (" + std::to_string(parts) +
                    " components)");
  }
}

namespace {

template <typename Get, typename Range>
Matrix entrywise_mean(const Range& cohort, Get get) {
  if (cohort.empty()) {
    throw Error(ErrorKind::EmptyInput, "cannot average an empty cohort");
  }
  const Index n = get(cohort.front()).rows();
  Matrix sum = Matrix::Zero(n, n);
  for (const auto& w : cohort) {
    if (get(w).rows() != n || get(w).cols() != n) {
      throw Error(ErrorKind::DimensionMismatch,
                  "cohort networks differ in node count");
    }
    sum += get(w);
  }
  return sum / static_cast<double>(cohort.size());
}

}  // namespace

AdjacencyMatrix AdjacencyMatrix::mean(std::span<const AdjacencyMatrix> cohort) {
  return AdjacencyMatrix(entrywise_mean(
      cohort, [](const AdjacencyMatrix& a) -> const Matrix& { return a.weights(); }));
}

AdjacencyMatrix AdjacencyMatrix::mean(std::span<const Matrix> weights) {
  return AdjacencyMatrix(
      entrywise_mean(weights, [](const Matrix& m) -> const Matrix& { return m; }));
}

LaplacianMatrix build_laplacian(const AdjacencyMatrix& w) {
  Vector degrees = w.weights().rowwise().sum();
  Matrix values = -w.weights();
  values.diagonal() += degrees;
  return LaplacianMatrix(std::move(values), std::move(degrees));
}

Vector spectrum(const LaplacianMatrix& laplacian) {
  return ascending_eigenvalues(laplacian.values());
}

EigenSystem eigensystem(const LaplacianMatrix& laplacian, Index p) {
  const Index n = laplacian.size();
  if (p < 1 || p > n) {
    throw Error(ErrorKind::OutOfRange, "harmonic count p = " +
                                           std::to_string(p) +
                                           " outside [1, " +
                                           std::to_string(n) + "]");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(laplacian.values());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::EigenSolverFailure,
                "symmetric eigensolver did not converge");
  }
  EigenSystem out{solver.eigenvalues().head(p),
                  solver.eigenvectors().leftCols(p)};
  canonicalize_signs(out.vectors);
  return out;
}

ShiftedLaplacian shift_positive_definite(const LaplacianMatrix& laplacian) {
  const Vector ev = ascending_eigenvalues(laplacian.values());
  const double lambda_max = ev(ev.size() - 1);
  ShiftedLaplacian out;
  const Index n = laplacian.size();
  if (lambda_max <= 0.0) {
    out.values = Matrix::Zero(n, n);
    out.beta = 0.0;
    out.degenerate = true;
    return out;
  }
  out.beta = lambda_max * (1.0 + kShiftMargin);
  out.values = -laplacian.values();
  out.values.diagonal().array() += out.beta;
  return out;
}

std::vector<ReconstructionPoint> reconstruction_error_curve(
    const LaplacianMatrix& laplacian, Index p_max) {
  const Index n = laplacian.size();
  if (p_max < 1 || p_max > n) {
    throw Error(ErrorKind::OutOfRange, "p_max = " + std::to_string(p_max) +
                                           " outside [1, " +
                                           std::to_string(n) + "]");
  }
  // ||L - Phi_p Lambda_p Phi_p^T||_F^2 is the sum of the squared discarded
  // eigenvalues, and ||L||_F^2 the sum of all of them.
  const Vector ev = ascending_eigenvalues(laplacian.values());
  Vector tail(n + 1);
  tail(n) = 0.0;
  for (Index k = n - 1; k >= 0; --k) tail(k) = tail(k + 1) + ev(k) * ev(k);
  const double total = tail(0);

  std::vector<ReconstructionPoint> curve;
  curve.reserve(static_cast<std::size_t>(p_max));
  for (Index p = 1; p <= p_max; ++p) {
    const double err = total > 0.0 ? std::sqrt(tail(p) / total) : 0.0;
    curve.push_back({p, err});
  }
  return curve;
}

Index suggest_harmonic_count(std::span<const ReconstructionPoint> curve,
                             double fraction) {
  if (curve.empty()) {
    throw Error(ErrorKind::EmptyInput, "empty reconstruction curve");
  }
  if (!(fraction > 0.0)) {
    throw Error(ErrorKind::OutOfRange, "fraction must be positive");
  }
  const double threshold = fraction * curve.front().error;
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    if (curve[i].error - curve[i + 1].error < threshold) return curve[i].p;
  }
  return curve.back().p;
}

}  // namespace harmonics
