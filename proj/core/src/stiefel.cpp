#include "harmonics/stiefel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "harmonics/error.hpp"

namespace harmonics {

namespace {

constexpr double kBaseMatchTolerance = 1e-12;
constexpr double kSignTieTolerance = 1e-9;

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": shapes " + std::to_string(a.rows()) +
                    "x" + std::to_string(a.cols()) + " and " +
                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                    " differ");
  }
}

// Pade coefficients b_0..b_m of the diagonal [m/m] approximant to exp.
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0,
                                          420.0,   30.0,    1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0,
                                          277200.0,   25200.0,   1512.0,
                                          56.0,       1.0};
constexpr std::array<double, 10> kPade9 = {
    17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
    2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

// Largest 1-norms for which each degree meets double-precision backward error.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <std::size_t N>
Matrix pade_low_degree(const Matrix& a, const std::array<double, N>& b) {
  const Index k = a.rows();
  const Matrix ident = Matrix::Identity(k, k);
  const Matrix a2 = a * a;
  Matrix even_power = ident;
  Matrix odd_sum = b[1] * ident;
  Matrix even_sum = b[0] * ident;
  for (std::size_t j = 2; j < N; j += 2) {
    even_power = even_power * a2;
    even_sum += b[j] * even_power;
    if (j + 1 < N) odd_sum += b[j + 1] * even_power;
  }
  const Matrix u = a * odd_sum;
  return (even_sum - u).partialPivLu().solve(even_sum + u);
}

Matrix pade13(const Matrix& a) {
  const auto& b = kPade13;
  const Index k = a.rows();
  const Matrix ident = Matrix::Identity(k, k);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
           b[5] * a4 + b[3] * a2 + b[1] * ident);
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                   b[4] * a4 + b[2] * a2 + b[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

ManifoldCheck validate_on_manifold(const Matrix& x, double tol) {
  if (x.cols() == 0 || x.cols() > x.rows() || !x.allFinite()) {
    return {false, std::numeric_limits<double>::infinity()};
  }
  const Matrix gram = x.transpose() * x;
  const double dev =
      (gram - Matrix::Identity(x.cols(), x.cols())).cwiseAbs().maxCoeff();
  return {dev <= tol, dev};
}

StiefelPoint::StiefelPoint(Matrix x, double tol) : x_(std::move(x)) {
  if (x_.cols() < 1 || x_.cols() > x_.rows()) {
    throw Error(ErrorKind::OutOfRange,
                "Stiefel point needs 1 <= p <= n, got " +
                    std::to_string(x_.rows()) + "x" +
                    std::to_string(x_.cols()));
  }
  if (!x_.allFinite()) {
    throw Error(ErrorKind::NonFinite, "Stiefel point has non-finite entries");
  }
  const auto check = validate_on_manifold(x_, tol);
  if (!check.on_manifold) {
    throw Error(ErrorKind::NotOnManifold,
                "columns are not orthonormal (max |X^T X - I| = " +
                    std::to_string(check.deviation) + ")");
  }
}

StiefelPoint StiefelPoint::identity(Index n, Index p) {
  return StiefelPoint(Matrix::Identity(n, p));
}

TangentVector::TangentVector(StiefelPoint base, Matrix delta, double tol)
    : base_(std::move(base)), delta_(std::move(delta)) {
  require_same_shape(base_.matrix(), delta_, "tangent vector");
  if (!delta_.allFinite()) {
    throw Error(ErrorKind::NonFinite, "tangent vector has non-finite entries");
  }
  const Matrix a = base_.matrix().transpose() * delta_;
  const double skew_residual = (a + a.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, delta_.cwiseAbs().maxCoeff());
  if (skew_residual > tol * scale) {
    throw Error(ErrorKind::NotTangent,
                "X^T D is not skew-symmetric (residual " +
                    std::to_string(skew_residual) + ")");
  }
}

double squared_distance(const StiefelPoint& x, const StiefelPoint& y) {
  require_same_shape(x.matrix(), y.matrix(), "squared_distance");
  return static_cast<double>(x.cols()) -
         (x.matrix().transpose() * y.matrix()).trace();
}

TangentVector project_to_tangent(const StiefelPoint& x, const Matrix& g) {
  require_same_shape(x.matrix(), g, "project_to_tangent");
  const Matrix& xm = x.matrix();
  Matrix delta = g - xm * (g.transpose() * xm);
  return TangentVector(x, std::move(delta));
}

Matrix expm(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "expm needs a square matrix");
  }
  if (!m.allFinite()) {
    throw Error(ErrorKind::NonFinite, "expm input has non-finite entries");
  }
  if (m.rows() == 0) return m;
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 <= kTheta3) return pade_low_degree(m, kPade3);
  if (norm1 <= kTheta5) return pade_low_degree(m, kPade5);
  if (norm1 <= kTheta7) return pade_low_degree(m, kPade7);
  if (norm1 <= kTheta9) return pade_low_degree(m, kPade9);

  int squarings = 0;
  if (norm1 > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
  }
  Matrix r = pade13(m / std::ldexp(1.0, squarings));
  for (int i = 0; i < squarings; ++i) r = (r * r).eval();
  return r;
}

Matrix polar_factor(const Matrix& m) {
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw Error(ErrorKind::SvdFailure, "SVD did not converge");
  }
  return svd.matrixU() * svd.matrixV().transpose();
}

StiefelPoint exp_map_unchecked(const StiefelPoint& x, const Matrix& delta) {
  require_same_shape(x.matrix(), delta, "exp_map");
  if (!delta.allFinite()) {
    throw Error(ErrorKind::NonFinite, "exp_map direction has non-finite entries");
  }
  const Matrix& xm = x.matrix();
  const Index n = xm.rows();
  const Index p = xm.cols();
  const Matrix a = xm.transpose() * delta;
  const Matrix normal = delta - xm * a;

  Matrix y;
  if (n == p || normal.isZero(0.0)) {
    // No orthogonal complement to move into: R = 0 and the block exponential
    // collapses. Small but nonzero R still goes through the full formula.
    y = xm * expm(a);
  } else {
    Eigen::HouseholderQR<Matrix> qr(normal);
    const Matrix q = qr.householderQ() * Matrix::Identity(n, p);
    const Matrix r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
    Matrix block = Matrix::Zero(2 * p, 2 * p);
    block.topLeftCorner(p, p) = a;
    block.topRightCorner(p, p) = -r.transpose();
    block.bottomLeftCorner(p, p) = r;
    const Matrix e = expm(block);
    y = xm * e.topLeftCorner(p, p) + q * e.bottomLeftCorner(p, p);
  }
  if (!validate_on_manifold(y, kManifoldTolerance).on_manifold) {
    y = polar_factor(y);
  }
  return StiefelPoint(std::move(y));
}

StiefelPoint exp_map(const StiefelPoint& x, const TangentVector& delta) {
  require_same_shape(x.matrix(), delta.matrix(), "exp_map");
  const double base_gap =
      (delta.base().matrix() - x.matrix()).cwiseAbs().maxCoeff();
  if (base_gap > kBaseMatchTolerance) {
    throw Error(ErrorKind::NotTangent,
                "tangent vector is based at a different point");
  }
  return exp_map_unchecked(x, delta.matrix());
}

void canonicalize_signs(Matrix& columns) {
  for (Index j = 0; j < columns.cols(); ++j) {
    auto col = columns.col(j);
    const double peak = col.cwiseAbs().maxCoeff();
    if (peak == 0.0) continue;
    const double cutoff = peak * (1.0 - kSignTieTolerance);
    for (Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) >= cutoff) {
        if (col(i) < 0.0) col = -col;
        break;
      }
    }
  }
}

}  // namespace harmonics
