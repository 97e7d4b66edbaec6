#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "harmonics/analysis.hpp"
#include "harmonics/graph.hpp"
#include "harmonics/rotations.hpp"
#include "harmonics/simulate.hpp"
#include "harmonics/solver.hpp"
#include "harmonics/statistics.hpp"
#include "harmonics/stiefel.hpp"

namespace {

using namespace harmonics;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Matrix random_orthonormal(Index n, Index p, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(n, p);
  for (Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(n, p);
}

Verdict rotation_recovery() {
  int off_manifold = 0;
  bool every_seed = true;
  double worst_dev = 0.0, worst_gap = -1e300;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (AxisMode mode : {AxisMode::kRandom, AxisMode::kFixed}) {
      SyntheticOptions o;
      o.seed = seed;
      o.axis = mode;
      const SyntheticReport r = run_synthetic_experiment(o);
      worst_dev = std::max(worst_dev, r.stiefel_deviation);
      worst_gap = std::max(worst_gap, r.stiefel_distance - r.polar_distance);
      if (!(r.stiefel_deviation <= 1e-8 && r.stiefel_distance <= r.polar_distance + 1e-9)) {
        every_seed = false;
      }
      if (mode == AxisMode::kRandom && r.arithmetic_deviation > 1e-3) ++off_manifold;
    }
  }
  return {every_seed && off_manifold >= 19,
          fmt("max stiefel deviation %.2e, max d2(stiefel)-d2(polar) %.2e, "
              "arithmetic off-manifold in %d/20 random-axis seeds",
              worst_dev, worst_gap, off_manifold)};
}

Verdict gpi_oracle() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<Index> size(6, 30);
  double worst_trace = 0.0, worst_proj = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = size(rng);
    const Index p = std::uniform_int_distribution<Index>(1, std::min<Index>(10, n - 1))(rng);
    const AdjacencyMatrix w = random_connected_graph(n, 0.35, rng);
    const ShiftedLaplacian shifted = shift_positive_definite(build_laplacian(w));
    Eigen::SelfAdjointEigenSolver<Matrix> es(shifted.values);
    const Matrix top = es.eigenvectors().rightCols(p);
    const double oracle_trace = es.eigenvalues().tail(p).sum();
    const StiefelPoint start(random_orthonormal(n, p, rng));
    const GpiResult r = gpi_refine(shifted, start, start, 0.0, 1e-13, 20000);
    const Matrix& phi = r.phi.matrix();
    const double trace = (phi.transpose() * shifted.values * phi).trace();
    worst_trace = std::max(worst_trace, std::abs(trace - oracle_trace));
    worst_proj = std::max(
        worst_proj, (phi * phi.transpose() - top * top.transpose()).norm());
  }
  return {worst_trace <= 1e-6 && worst_proj <= 1e-6,
          fmt("max trace error %.2e, max projector error %.2e over 50 graphs",
              worst_trace, worst_proj)};
}

Verdict outer_descent() {
  BlockCohortOptions co;
  co.nodes = 20;
  co.subjects = 10;
  co.seed = 3;
  const auto cohort = block_cohort(co);
  SolverConfig config;
  config.harmonics = 5;
  config.lambda = 0.01;
  const HarmonicModel model = learn_common_harmonics(cohort, config);
  double worst_rise = 0.0;
  for (std::size_t k = 1; k < model.cost_trace.size(); ++k) {
    worst_rise = std::max(worst_rise, model.cost_trace[k] - model.cost_trace[k - 1]);
  }
  double worst_dev = validate_on_manifold(model.common.matrix()).deviation;
  for (const auto& phi : model.individuals) {
    worst_dev = std::max(worst_dev, validate_on_manifold(phi.matrix()).deviation);
  }
  return {worst_rise <= 1e-9 && model.converged && worst_dev <= 1e-8,
          fmt("%zu outer iterations, converged %s, max cost rise %.2e, "
              "max orthogonality deviation %.2e",
              model.cost_trace.size() - 1, model.converged ? "yes" : "no", worst_rise,
              worst_dev)};
}

Verdict exp_map_exactness() {
  std::mt19937_64 rng(4);
  double worst_geo = 0.0;
  int cases = 0;
  for (Index n : {2, 3, 5, 10, 40}) {
    for (int k = 0; k < 20; ++k, ++cases) {
      const double theta = -6.0 + 12.0 * k / 19.0;
      const Matrix frame = random_orthonormal(n, 2, rng);
      const StiefelPoint x(Matrix(frame.col(0)));
      const Matrix v = theta * frame.col(1);
      const StiefelPoint y = exp_map(x, TangentVector(x, v));
      const Matrix expected = std::cos(theta) * frame.col(0) + std::sin(theta) * frame.col(1);
      worst_geo = std::max(worst_geo, (y.matrix() - expected).cwiseAbs().maxCoeff());
    }
  }
  double worst_dev = 0.0;
  std::uniform_int_distribution<Index> size(2, 30);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = size(rng);
    const Index p = std::uniform_int_distribution<Index>(1, n)(rng);
    const StiefelPoint x(random_orthonormal(n, p, rng));
    Matrix raw(n, p);
    for (Index i = 0; i < raw.size(); ++i) raw.data()[i] = 2.0 * g(rng);
    const StiefelPoint y = exp_map(x, project_to_tangent(x, raw));
    worst_dev = std::max(worst_dev, validate_on_manifold(y.matrix()).deviation);
  }
  return {worst_geo <= 1e-10 && worst_dev <= 1e-8,
          fmt("max geodesic error %.2e over %d circle cases, max deviation %.2e "
              "over 1000 random maps",
              worst_geo, cases, worst_dev)};
}

Verdict parseval() {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 20;
    const StiefelPoint basis(random_orthonormal(n, n, rng));
    Vector f(n);
    for (Index i = 0; i < n; ++i) f(i) = 3.0 * g(rng);
    worst = std::max(worst, std::abs(energy_spectrum(f, basis).total - f.squaredNorm()));
  }
  return {worst <= 1e-10, fmt("max |E_total - |f|^2| = %.2e over 100 signals", worst)};
}

Verdict planted_detection() {
  int flagged = 0, total_detected = 0;
  double worst_p = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(600 + seed);
    const AdjacencyMatrix w = random_connected_graph(20, 0.3, rng);
    const StiefelPoint basis(eigensystem(build_laplacian(w), 20).vectors);
    PlantedSignalOptions o;
    o.harmonic = 4;
    o.amplitude = 2.0;
    o.per_group = 30;
    o.seed = 700 + seed;
    const auto report = group_energy_analysis(planted_signal_cohort(basis, o), basis);
    const double p = report.harmonics[4].test.p_value;
    worst_p = std::max(worst_p, p);
    if (p < 1e-6) ++flagged;
    if (report.total.test.p_value < 0.01) ++total_detected;
  }
  return {flagged >= 48 && total_detected >= 48,
          fmt("harmonic 5 flagged in %d/50 seeds (max p %.2e), total-energy shift "
              "detected in %d/50",
              flagged, worst_p, total_detected)};
}

Verdict replicability() {
  BlockCohortOptions co;
  co.nodes = 20;
  co.subjects = 30;
  co.seed = 8;
  const auto networks = block_cohort(co);
  ReplicabilityOptions o;
  o.replicates = 20;
  o.base_count = 24;
  o.extra_count = 3;
  o.seed = 9;
  o.solver.harmonics = 5;
  const ReplicabilityReport r = replicability_test(networks, o);
  return {r.manifold.total_failures <= r.pseudo.total_failures,
          fmt("element-wise failures: manifold %d, pseudo mean %d (of %d elements)",
              static_cast<int>(r.manifold.total_failures),
              static_cast<int>(r.pseudo.total_failures),
              static_cast<int>(r.manifold.failures.size()))};
}

double kolmogorov_p_value(std::vector<double> u) {
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d = std::max({d, (i + 1) / n - u[i], u[i] - i / n});
  }
  const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    q += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  }
  return std::clamp(q, 0.0, 1.0);
}

Verdict statistics_calibration() {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> p_values;
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<double> a(15), b(22);
    for (double& x : a) x = g(rng);
    for (double& x : b) x = 2.0 * g(rng);
    p_values.push_back(welch_t_test(a, b).p_value);
  }
  const double ks_p = kolmogorov_p_value(p_values);
  const double p10 = student_t_two_sided(2.228, 10.0);
  const double p30 = student_t_two_sided(2.042, 30.0);
  const bool ok = ks_p > 0.01 && std::abs(p10 - 0.05) <= 5e-4 && std::abs(p30 - 0.05) <= 5e-4;
  return {ok, fmt("KS p-value %.3f over 500 null Welch tests; two-sided p at "
                  "(10, 2.228) = %.5f, (30, 2.042) = %.5f",
                  ks_p, p10, p30)};
}

Verdict scale_smoke() {
  BlockCohortOptions co;
  co.nodes = 148;
  co.blocks = 8;
  co.subjects = 94;
  co.seed = 11;
  const auto cohort = block_cohort(co);
  SolverConfig config;
  config.harmonics = 60;
  config.threads = 1;
  const HarmonicModel model = learn_common_harmonics(cohort, config);
  double worst_rise = 0.0;
  for (std::size_t k = 1; k < model.cost_trace.size(); ++k) {
    worst_rise = std::max(worst_rise, model.cost_trace[k] - model.cost_trace[k - 1]);
  }
  double worst_dev = validate_on_manifold(model.common.matrix()).deviation;
  for (const auto& phi : model.individuals) {
    worst_dev = std::max(worst_dev, validate_on_manifold(phi.matrix()).deviation);
  }
  const bool finite = std::all_of(model.cost_trace.begin(), model.cost_trace.end(),
                                  [](double c) { return std::isfinite(c); });
  return {model.converged && worst_dev <= 1e-8 && worst_rise <= 1e-9 * model.cost_trace.front() &&
              finite,
          fmt("%zu outer iterations, converged %s, max deviation %.2e, max relative cost "
              "rise %.2e",
              model.cost_trace.size() - 1, model.converged ? "yes" : "no", worst_dev,
              worst_rise / model.cost_trace.front())};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "synthetic rotation recovery", 5.0, rotation_recovery},
      {2, "power iteration eigenvector oracle", 10.0, gpi_oracle},
      {3, "outer loop monotone descent", 0.0, outer_descent},
      {4, "exponential map exactness", 0.0, exp_map_exactness},
      {5, "energy preservation", 0.0, parseval},
      {6, "planted signal detection", 0.0, planted_detection},
      {7, "replicability comparison", 0.0, replicability},
      {8, "statistical kernel calibration", 0.0, statistics_calibration},
      {9, "scale smoke test", 600.0, scale_smoke},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0 && seconds > c.time_limit) {
      v.pass = false;
      v.detail += fmt("; exceeded %.0f s limit", c.time_limit);
    }
    if (!v.pass) ++failures;
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", c.id, c.name,
                v.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
