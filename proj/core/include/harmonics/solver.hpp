#pragma once

#include <span>
#include <vector>

#include "harmonics/graph.hpp"
#include "harmonics/stiefel.hpp"

namespace harmonics {

/// How the coupling term enters the power-iteration update.
enum class GpiCoupling {
  /// Theta = L~ Phi + (lambda / 2) Psi. The fixed points satisfy the KKT
  /// condition 2 L~ Phi + lambda Psi = 2 Phi Lambda, and every iteration
  /// increases tr(Phi^T L~ Phi) + lambda tr(Phi^T Psi).
  kStationary,
  /// Theta = L~ Phi + lambda Psi. Ascends the objective with coupling
  /// 2 lambda instead of lambda.
  kLiteral,
};

struct SolverConfig {
  double lambda = 0.01;
  double gamma = 0.01;
  double gpi_tolerance = 1e-8;
  double weiszfeld_tolerance = 1e-6;
  double outer_tolerance = 1e-6;
  int max_gpi_iterations = 500;
  int max_weiszfeld_iterations = 200;
  int max_outer_iterations = 100;
  Index harmonics = 60;
  /// Literal reference procedure: Weiszfeld restarts from the first subject,
  /// no backtracking, the raw mean-tangent direction goes to the exponential
  /// map without a tangency check, and GPI uses kLiteral.
  bool literal_mode = false;
  int threads = 1;

  /// Throws Error(OutOfRange) when a field violates its constraint.
  void validate() const;
};

struct GpiResult {
  StiefelPoint phi;
  int iterations = 0;
  bool converged = false;
  /// Objective ascended by the chosen coupling, starting with the initial
  /// point: tr(Phi^T L~ Phi) + lambda tr(Phi^T Psi) for kStationary, and
  /// 2 lambda in place of lambda for kLiteral.
  std::vector<double> objective;
};

/// Generalized power iteration for
///   max tr(Phi^T L~ Phi) + lambda tr(Phi^T Psi)  s.t.  Phi^T Phi = I.
/// Repeats Theta = L~ Phi + c Psi, Phi <- U V^T from the thin SVD of Theta,
/// until ||Phi_new - Phi_old||_F < tolerance or max_iterations is reached.
GpiResult gpi_refine(const ShiftedLaplacian& shifted, const StiefelPoint& psi,
                     const StiefelPoint& phi_init, double lambda,
                     double tolerance, int max_iterations,
                     GpiCoupling coupling = GpiCoupling::kStationary);

struct WeiszfeldOptions {
  double gamma = 0.01;
  double lambda = 0.01;
  double tolerance = 1e-6;
  int max_iterations = 200;
  /// Halve the step (at most kMaxHalvings times) until sum d^2 does not grow
  /// by more than its own rounding error.
  bool backtracking = true;
  /// Build the direction through project_to_tangent and the checked exp_map.
  bool tangent_projection = true;
};

inline constexpr int kMaxHalvings = 20;

struct WeiszfeldResult {
  StiefelPoint mean;
  int iterations = 0;
  bool converged = false;
  int halvings = 0;
  /// sum_s d^2(Phi_s, Psi) at the start point and after every accepted step.
  std::vector<double> cost_trace;
};

/// Frechet mean under the chordal distance by the Weiszfeld-style update
///   D = -lambda * sum_s (Psi Phi_s^T Psi - Phi_s),  Psi <- exp_Psi(gamma D),
/// stopping when ||D||_F < tolerance.
WeiszfeldResult weiszfeld_mean(std::span<const StiefelPoint> points,
                               const StiefelPoint& init,
                               const WeiszfeldOptions& options);

/// sum_s d^2(Phi_s, Psi).
double total_squared_distance(std::span<const StiefelPoint> points,
                              const StiefelPoint& psi);

struct OuterIteration {
  int iteration = 0;
  double cost = 0.0;
  double change = 0.0;
  int gpi_iterations_max = 0;
  int gpi_iterations_total = 0;
  int weiszfeld_iterations = 0;
  bool weiszfeld_converged = false;
  double distance_sum = 0.0;
};

struct HarmonicModel {
  StiefelPoint common;
  std::vector<StiefelPoint> individuals;
  /// Objective value at initialization followed by one entry per outer
  /// iteration.
  std::vector<double> cost_trace;
  std::vector<OuterIteration> iterations;
  bool converged = false;
};

/// Alternates per-subject GPI refinement and the Weiszfeld update of the
/// common basis until the objective changes by less than outer_tolerance.
/// Psi starts at the eigenbasis of the averaged network, each Phi_s at its own
/// truncated eigenbasis. On hitting max_outer_iterations the best-so-far
/// model is returned with converged = false.
HarmonicModel learn_common_harmonics(std::span<const AdjacencyMatrix> cohort,
                                     const SolverConfig& config);

/// sum_s tr(Phi_s^T L_s Phi_s) + lambda (p - tr(Phi_s^T Psi)), unshifted L.
double objective_cost(std::span<const LaplacianMatrix> laplacians,
                      std::span<const StiefelPoint> individuals,
                      const StiefelPoint& common, double lambda);

struct ArithmeticMean {
  Matrix mean;
  /// max |M^T M - I|; large for heterogeneous inputs.
  double deviation = 0.0;
};

ArithmeticMean arithmetic_mean_harmonics(std::span<const StiefelPoint> points);

/// Eigenbasis of the Laplacian of the entrywise-mean adjacency matrix.
StiefelPoint pseudo_mean_harmonics(std::span<const AdjacencyMatrix> cohort,
                                   Index p);

}  // namespace harmonics
