#include "harmonics/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "harmonics/error.hpp"

namespace harmonics {

std::vector<AdjacencyMatrix> block_cohort(const BlockCohortOptions& o) {
  if (o.nodes < 2 || o.blocks < 1 || o.blocks > o.nodes || o.subjects < 1) {
    throw Error(ErrorKind::OutOfRange, "invalid block cohort dimensions");
  }
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const Index n = o.nodes;
  auto block_of = [&](Index i) { return i * o.blocks / n; };
  Matrix tmpl = Matrix::Zero(n, n);
  Eigen::MatrixXi ring = Eigen::MatrixXi::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const bool same = block_of(i) == block_of(j);
      const double density = same ? o.within_density : o.between_density;
      if (unit(rng) < density) {
        const double scale = same ? o.within_weight : o.between_weight;
        tmpl(i, j) = tmpl(j, i) = scale * (0.5 + unit(rng));
      }
    }
  }
  for (Index i = 0; i < n; ++i) {
    const Index j = (i + 1) % n;
    if (i == j) continue;
    tmpl(i, j) = tmpl(j, i) = std::max(tmpl(i, j), o.ring_weight);
    ring(i, j) = ring(j, i) = 1;
  }

  std::vector<AdjacencyMatrix> cohort;
  cohort.reserve(o.subjects);
  for (std::size_t s = 0; s < o.subjects; ++s) {
    Matrix w = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        if (tmpl(i, j) == 0.0) continue;
        const double factor =
            std::exp(o.jitter * gauss(rng) - 0.5 * o.jitter * o.jitter);
        const bool drop = ring(i, j) == 0 && unit(rng) < o.dropout;
        w(i, j) = w(j, i) = drop ? 0.0 : tmpl(i, j) * factor;
      }
    }
    if (o.normalize) w /= w.sum();
    cohort.emplace_back(std::move(w));
  }
  return cohort;
}

AdjacencyMatrix random_connected_graph(Index n, double density,
                                       std::mt19937_64& rng) {
  if (n < 1) throw Error(ErrorKind::OutOfRange, "node count must be positive");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto weight = [&] { return 0.1 + 0.9 * (1.0 - unit(rng)); };
  Matrix w = Matrix::Zero(n, n);
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  for (Index k = 1; k < n; ++k) {
    std::uniform_int_distribution<Index> pick(0, k - 1);
    const Index a = order[static_cast<std::size_t>(k)];
    const Index b = order[static_cast<std::size_t>(pick(rng))];
    w(a, b) = w(b, a) = weight();
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (w(i, j) == 0.0 && unit(rng) < density) w(i, j) = w(j, i) = weight();
    }
  }
  return AdjacencyMatrix(std::move(w));
}

StiefelPoint random_stiefel(Index n, Index p, std::mt19937_64& rng) {
  if (p < 1 || p > n) throw Error(ErrorKind::OutOfRange, "need 1 <= p <= n");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, p);
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < n; ++i) g(i, j) = gauss(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, p);
  const Matrix r = qr.matrixQR().topRows(p);
  for (Index j = 0; j < p; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return StiefelPoint(std::move(q));
}

std::vector<NodeSignal> planted_signal_cohort(const StiefelPoint& basis,
                                              const PlantedSignalOptions& o) {
  if (o.harmonic < 0 || o.harmonic >= basis.cols()) {
    throw Error(ErrorKind::OutOfRange, "planted harmonic outside the basis");
  }
  if (!(o.noise >= 0.0)) {
    throw Error(ErrorKind::OutOfRange, "noise level must be nonnegative");
  }
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Index n = basis.rows();
  std::vector<NodeSignal> out;
  out.reserve(2 * o.per_group);
  for (int g = 0; g < 2; ++g) {
    for (std::size_t s = 0; s < o.per_group; ++s) {
      NodeSignal sig;
      sig.group = g == 0 ? o.group_a : o.group_b;
      sig.subject = sig.group + "_" + std::to_string(s + 1);
      sig.values.resize(n);
      for (Index i = 0; i < n; ++i) sig.values(i) = o.noise * gauss(rng);
      if (g == 1) sig.values += o.amplitude * basis.matrix().col(o.harmonic);
      out.push_back(std::move(sig));
    }
  }
  return out;
}

}  // namespace harmonics
