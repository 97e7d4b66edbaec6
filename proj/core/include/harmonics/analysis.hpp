#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "harmonics/graph.hpp"
#include "harmonics/solver.hpp"
#include "harmonics/statistics.hpp"
#include "harmonics/stiefel.hpp"

namespace harmonics {

/// One subject's per-node measurement (cortical thickness, SUVR, ...).
struct NodeSignal {
  std::string subject;
  std::string group;
  Vector values;
};

struct EnergySpectrum {
  /// alpha_h = <f, psi_h>
  Vector powers;
  /// E_h = alpha_h^2
  Vector energies;
  double total = 0.0;
};

EnergySpectrum energy_spectrum(const Vector& signal, const StiefelPoint& basis);

/// Power of f on the strictly positive and strictly negative parts of one
/// harmonic. Zero entries belong to neither part.
struct SplitPower {
  double positive = 0.0;
  /// |<f, psi_h^->|
  double negative = 0.0;
};

SplitPower split_power(const Vector& signal, const Vector& harmonic);

struct GroupPair {
  std::string a;
  std::string b;
};

/// The two group labels in order of first appearance, or `requested` after
/// checking both labels occur. Throws MissingGroup otherwise.
GroupPair resolve_groups(std::span<const NodeSignal> signals,
                         const std::optional<GroupPair>& requested = {});

struct GroupStatistic {
  SampleSummary a;
  SampleSummary b;
  TTestResult test;
  /// NaN when both groups are constant.
  double fisher = 0.0;
  bool significant = false;
};

struct GroupEnergyReport {
  GroupPair groups;
  double alpha = 0.01;
  std::vector<GroupStatistic> harmonics;
  GroupStatistic total;
  /// Zero-based harmonic indices with p < alpha.
  std::vector<Index> significant;
  /// Per input signal, same order as the input.
  std::vector<EnergySpectrum> spectra;
};

/// Welch tests and Fisher scores on every E_h and on E_total. No multiple
/// comparison correction is applied.
GroupEnergyReport group_energy_analysis(
    std::span<const NodeSignal> signals, const StiefelPoint& basis,
    double alpha = 0.01, const std::optional<GroupPair>& groups = {});

struct ProtocolOptions {
  double train_fraction = 0.6;
  int replicates = 50;
  std::uint64_t seed = 0;
  /// Threshold for the harmonic-power screen on the training split.
  double power_alpha = 0.01;
  /// Threshold for the |alpha+ - alpha-| test on the held-out split.
  double split_alpha = 1e-3;
};

struct ProtocolReplicate {
  std::vector<Index> power_significant;
  std::vector<Index> split_significant;
};

struct ProtocolReport {
  GroupPair groups;
  std::vector<ProtocolReplicate> replicates;
  SampleSummary power_counts;
  SampleSummary split_counts;
};

/// Repeated random split of each group: harmonics whose power alpha_h differs
/// between groups on the training part are retested on the held-out part
/// through |alpha_h+ - alpha_h-|.
ProtocolReport positive_negative_protocol(
    std::span<const NodeSignal> signals, const StiefelPoint& basis,
    const ProtocolOptions& options, const std::optional<GroupPair>& groups = {});

struct ReplicabilityOptions {
  int replicates = 50;
  /// Shared sample size; 0 scales 70 of 94 to the cohort.
  Index base_count = 0;
  /// Size of each of the two disjoint additions; 0 scales 5 of 94.
  Index extra_count = 0;
  std::uint64_t seed = 0;
  double alpha = 0.01;
  /// Solver settings; `threads` parallelizes over replicates.
  SolverConfig solver;
};

struct ReplicabilityMethod {
  /// 1 where the paired test across replicates rejects at alpha (n x p).
  Eigen::MatrixXi failures;
  Matrix p_values;
  /// Row sums of `failures`: failed harmonics per node.
  Eigen::VectorXi region_failures;
  int total_failures = 0;
};

struct ReplicabilityReport {
  Index base_count = 0;
  Index extra_count = 0;
  int replicates = 0;
  ReplicabilityMethod manifold;
  ReplicabilityMethod pseudo;
};

/// Test/retest resampling: each replicate draws a shared base sample and two
/// disjoint additions, learns the common harmonics on both cohorts with the
/// manifold solver and with the averaged-network baseline, and records the
/// sign-aligned bases. Each element is then tested across replicates with a
/// paired t-test.
ReplicabilityReport replicability_test(std::span<const AdjacencyMatrix> networks,
                                       const ReplicabilityOptions& options);

}  // namespace harmonics
