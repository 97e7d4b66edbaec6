#include "harmonics/solver.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "harmonics/error.hpp"
#include "harmonics/parallel.hpp"

namespace harmonics {

namespace {

constexpr double kStationarySlack = 1e-12;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::OutOfRange, what);
}

void require_shape(const Matrix& m, Index rows, Index cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + " has shape " + std::to_string(m.rows()) +
                    "x" + std::to_string(m.cols()) + ", expected " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  }
}

double gpi_objective(const Matrix& shifted, const Matrix& phi, const Matrix& psi,
                     double coupling) {
  return phi.cwiseProduct(shifted * phi).sum() +
         2.0 * coupling * phi.cwiseProduct(psi).sum();
}

// sum_s d^2(Phi_s, Psi) through the precomputed sum M = sum_s Phi_s.
double distance_sum(const Matrix& phi_sum, double count, const Matrix& psi) {
  return count * static_cast<double>(psi.cols()) -
         phi_sum.cwiseProduct(psi).sum();
}

}  // namespace

void SolverConfig::validate() const {
  require(lambda > 0.0, "lambda must be positive");
  require(gamma > 0.0, "gamma must be positive");
  require(gpi_tolerance > 0.0 && weiszfeld_tolerance > 0.0 &&
              outer_tolerance > 0.0,
          "tolerances must be positive");
  require(max_gpi_iterations >= 1 && max_weiszfeld_iterations >= 1 &&
              max_outer_iterations >= 1,
          "iteration caps must be at least 1");
  require(harmonics >= 1, "harmonic count p must be at least 1");
  require(threads >= 1, "thread count must be at least 1");
}

GpiResult gpi_refine(const ShiftedLaplacian& shifted, const StiefelPoint& psi,
                     const StiefelPoint& phi_init, double lambda,
                     double tolerance, int max_iterations,
                     GpiCoupling coupling) {
  const Index n = phi_init.rows();
  const Index p = phi_init.cols();
  require_shape(shifted.values, n, n, "shifted Laplacian");
  require_shape(psi.matrix(), n, p, "common harmonics");
  require(max_iterations >= 0, "max_iterations must be nonnegative");

  const double c = coupling == GpiCoupling::kStationary ? 0.5 * lambda : lambda;
  const Matrix& lt = shifted.values;
  const Matrix& target = psi.matrix();

  Matrix phi = phi_init.matrix();
  GpiResult out{phi_init, 0, false, {}};
  out.objective.push_back(gpi_objective(lt, phi, target, c));
  for (int k = 0; k < max_iterations; ++k) {
    Matrix theta = lt * phi;
    theta.noalias() += c * target;
    if (!theta.allFinite()) {
      throw Error(ErrorKind::NonFinite, "GPI produced a non-finite iterate");
    }
    Matrix next = polar_factor(theta);
    const double step = (next - phi).norm();
    phi = std::move(next);
    out.iterations = k + 1;
    out.objective.push_back(gpi_objective(lt, phi, target, c));
    if (step < tolerance) {
      out.converged = true;
      break;
    }
  }
  out.phi = StiefelPoint(std::move(phi));
  return out;
}

double total_squared_distance(std::span<const StiefelPoint> points,
                              const StiefelPoint& psi) {
  double sum = 0.0;
  for (const auto& phi : points) sum += squared_distance(phi, psi);
  return sum;
}

WeiszfeldResult weiszfeld_mean(std::span<const StiefelPoint> points,
                               const StiefelPoint& init,
                               const WeiszfeldOptions& options) {
  if (points.empty()) {
    throw Error(ErrorKind::EmptyInput, "weiszfeld_mean needs at least one point");
  }
  require(options.gamma > 0.0, "gamma must be positive");
  require(options.tolerance > 0.0, "tolerance must be positive");
  require(options.max_iterations >= 0, "max_iterations must be nonnegative");

  const Index n = init.rows();
  const Index p = init.cols();
  Matrix phi_sum = Matrix::Zero(n, p);
  for (const auto& phi : points) {
    require_shape(phi.matrix(), n, p, "manifold sample");
    phi_sum += phi.matrix();
  }
  const double count = static_cast<double>(points.size());

  // Evaluation error of m p - tr(M^T Psi). Near the mean the true change of
  // a step falls below it long before ||D|| reaches a tight tolerance.
  const double rounding = 16.0 * std::numeric_limits<double>::epsilon() *
                          std::max(1.0, count * static_cast<double>(p));

  WeiszfeldResult out{init, 0, false, 0, {}};
  double cost = distance_sum(phi_sum, count, init.matrix());
  out.cost_trace.push_back(cost);

  for (int k = 0; k < options.max_iterations; ++k) {
    const StiefelPoint& psi = out.mean;
    // Euclidean gradient of sum_s (p - tr(Phi_s^T Psi)) is -M; its manifold
    // gradient is sum_s (Psi Phi_s^T Psi - Phi_s).
    Matrix direction;
    if (options.tangent_projection) {
      direction = -options.lambda * project_to_tangent(psi, -phi_sum).matrix();
    } else {
      const Matrix& pm = psi.matrix();
      direction = -options.lambda * (pm * (phi_sum.transpose() * pm) - phi_sum);
    }
    if (direction.norm() < options.tolerance) {
      out.converged = true;
      break;
    }

    double step = options.gamma;
    std::optional<StiefelPoint> accepted;
    double accepted_cost = 0.0;
    double best_rejected = std::numeric_limits<double>::infinity();
    for (int halving = 0; halving <= kMaxHalvings; ++halving) {
      StiefelPoint candidate =
          options.tangent_projection
              ? exp_map(psi, TangentVector(psi, step * direction))
              : exp_map_unchecked(psi, step * direction);
      const double candidate_cost =
          distance_sum(phi_sum, count, candidate.matrix());
      if (!options.backtracking || candidate_cost <= cost + rounding) {
        accepted.emplace(std::move(candidate));
        accepted_cost = candidate_cost;
        break;
      }
      best_rejected = std::min(best_rejected, candidate_cost);
      step *= 0.5;
      ++out.halvings;
    }
    if (!accepted) {
      // Rounding-level increases at a stationary point are not failures.
      if (best_rejected - cost <=
          kStationarySlack * std::max(1.0, std::abs(cost))) {
        out.converged = true;
        break;
      }
      throw Error(ErrorKind::StepFailure,
                  "Weiszfeld step increased the distance sum after " +
                      std::to_string(kMaxHalvings) + " halvings");
    }
    out.mean = std::move(*accepted);
    cost = accepted_cost;
    out.cost_trace.push_back(cost);
    out.iterations = k + 1;
  }
  return out;
}

double objective_cost(std::span<const LaplacianMatrix> laplacians,
                      std::span<const StiefelPoint> individuals,
                      const StiefelPoint& common, double lambda) {
  if (laplacians.size() != individuals.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "objective_cost: Laplacian and harmonic counts differ");
  }
  const double p = static_cast<double>(common.cols());
  double cost = 0.0;
  for (std::size_t s = 0; s < laplacians.size(); ++s) {
    const Matrix& phi = individuals[s].matrix();
    require_shape(phi, common.rows(), common.cols(), "individual harmonics");
    require_shape(laplacians[s].values(), phi.rows(), phi.rows(), "Laplacian");
    cost += phi.cwiseProduct(laplacians[s].values() * phi).sum();
    cost += lambda * (p - phi.cwiseProduct(common.matrix()).sum());
  }
  return cost;
}

ArithmeticMean arithmetic_mean_harmonics(std::span<const StiefelPoint> points) {
  if (points.empty()) {
    throw Error(ErrorKind::EmptyInput, "arithmetic mean of an empty list");
  }
  const Index n = points.front().rows();
  const Index p = points.front().cols();
  Matrix sum = Matrix::Zero(n, p);
  for (const auto& x : points) {
    require_shape(x.matrix(), n, p, "manifold sample");
    sum += x.matrix();
  }
  ArithmeticMean out;
  out.mean = sum / static_cast<double>(points.size());
  out.deviation = validate_on_manifold(out.mean, 0.0).deviation;
  return out;
}

StiefelPoint pseudo_mean_harmonics(std::span<const AdjacencyMatrix> cohort,
                                   Index p) {
  const AdjacencyMatrix mean = AdjacencyMatrix::mean(cohort);
  return StiefelPoint(eigensystem(build_laplacian(mean), p).vectors);
}

HarmonicModel learn_common_harmonics(std::span<const AdjacencyMatrix> cohort,
                                     const SolverConfig& config) {
  config.validate();
  if (cohort.empty()) {
    throw Error(ErrorKind::EmptyInput, "cohort is empty");
  }
  const Index n = cohort.front().size();
  const Index p = config.harmonics;
  for (std::size_t s = 0; s < cohort.size(); ++s) {
    if (cohort[s].size() != n) {
      throw Error(ErrorKind::DimensionMismatch,
                  "network " + std::to_string(s) + " has " +
                      std::to_string(cohort[s].size()) + " nodes, expected " +
                      std::to_string(n));
    }
  }
  if (p > n) {
    throw Error(ErrorKind::OutOfRange, "p = " + std::to_string(p) +
                                           " exceeds node count " +
                                           std::to_string(n));
  }

  const std::size_t m = cohort.size();
  std::vector<LaplacianMatrix> laplacians;
  laplacians.reserve(m);
  for (const auto& w : cohort) laplacians.push_back(build_laplacian(w));

  std::vector<ShiftedLaplacian> shifted(m);
  std::vector<std::optional<StiefelPoint>> initial(m);
  parallel_for(m, config.threads, [&](std::size_t s) {
    shifted[s] = shift_positive_definite(laplacians[s]);
    initial[s].emplace(eigensystem(laplacians[s], p).vectors);
  });

  // Eigenvector signs are arbitrary; orient every subject's columns toward the
  // pseudo mean so sign flips do not count as distance.
  const StiefelPoint pseudo = pseudo_mean_harmonics(cohort, p);
  std::vector<StiefelPoint> phis;
  phis.reserve(m);
  for (auto& phi : initial) {
    Matrix x = phi->matrix();
    for (Index j = 0; j < p; ++j) {
      if (x.col(j).dot(pseudo.matrix().col(j)) < 0.0) x.col(j) *= -1.0;
    }
    phis.emplace_back(std::move(x));
  }

  HarmonicModel model{pseudo, phis, {}, {}, false};
  const GpiCoupling coupling =
      config.literal_mode ? GpiCoupling::kLiteral : GpiCoupling::kStationary;
  WeiszfeldOptions wopts;
  wopts.gamma = config.gamma;
  wopts.lambda = config.lambda;
  wopts.tolerance = config.weiszfeld_tolerance;
  wopts.max_iterations = config.max_weiszfeld_iterations;
  wopts.backtracking = !config.literal_mode;
  wopts.tangent_projection = !config.literal_mode;

  double old_cost =
      objective_cost(laplacians, model.individuals, model.common, config.lambda);
  model.cost_trace.push_back(old_cost);

  StiefelPoint psi = model.common;
  double best_cost = old_cost;
  std::vector<int> gpi_iterations(m, 0);

  for (int it = 1; it <= config.max_outer_iterations; ++it) {
    std::vector<std::optional<StiefelPoint>> refined(m);
    parallel_for(m, config.threads, [&](std::size_t s) {
      GpiResult r = gpi_refine(shifted[s], psi, phis[s], config.lambda,
                               config.gpi_tolerance, config.max_gpi_iterations,
                               coupling);
      gpi_iterations[s] = r.iterations;
      refined[s].emplace(std::move(r.phi));
    });
    for (std::size_t s = 0; s < m; ++s) phis[s] = std::move(*refined[s]);

    const StiefelPoint& start = config.literal_mode ? phis.front() : psi;
    WeiszfeldResult wres = weiszfeld_mean(phis, start, wopts);
    psi = std::move(wres.mean);

    const double cost = objective_cost(laplacians, phis, psi, config.lambda);
    OuterIteration rec;
    rec.iteration = it;
    rec.cost = cost;
    rec.change = std::abs(cost - old_cost);
    for (int g : gpi_iterations) {
      rec.gpi_iterations_total += g;
      rec.gpi_iterations_max = std::max(rec.gpi_iterations_max, g);
    }
    rec.weiszfeld_iterations = wres.iterations;
    rec.weiszfeld_converged = wres.converged;
    rec.distance_sum = wres.cost_trace.back();
    model.iterations.push_back(rec);
    model.cost_trace.push_back(cost);
    old_cost = cost;

    const bool done = rec.change < config.outer_tolerance;
    if (done || cost <= best_cost) {
      best_cost = std::min(best_cost, cost);
      model.common = psi;
      model.individuals = phis;
    }
    if (done) {
      model.converged = true;
      break;
    }
  }
  return model;
}

}  // namespace harmonics
