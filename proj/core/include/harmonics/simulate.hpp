#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "harmonics/analysis.hpp"
#include "harmonics/graph.hpp"
#include "harmonics/stiefel.hpp"

namespace harmonics {

/// Synthetic cohort: a shared block-structured template with per-subject
/// multiplicative log-normal jitter and random edge dropout. A weighted ring
/// keeps every subject connected. With `normalize`, each network's weights sum
/// to one, the scale of fiber-fraction connectomes.
struct BlockCohortOptions {
  Index nodes = 20;
  Index blocks = 4;
  std::size_t subjects = 10;
  double within_density = 0.8;
  double between_density = 0.15;
  double within_weight = 1.0;
  double between_weight = 0.2;
  double ring_weight = 0.1;
  double jitter = 0.25;
  double dropout = 0.05;
  bool normalize = true;
  std::uint64_t seed = 1;
};

std::vector<AdjacencyMatrix> block_cohort(const BlockCohortOptions& options);

/// Erdos-Renyi weights uniform in (0.1, 1] on top of a random spanning tree.
AdjacencyMatrix random_connected_graph(Index n, double density,
                                       std::mt19937_64& rng);

/// Haar-distributed point of V(n, p) (QR of a Gaussian matrix, sign-fixed).
StiefelPoint random_stiefel(Index n, Index p, std::mt19937_64& rng);

/// Two groups of Gaussian node signals; group b additionally carries
/// amplitude * basis.col(harmonic).
struct PlantedSignalOptions {
  std::size_t per_group = 30;
  Index harmonic = 4;
  double amplitude = 2.0;
  double noise = 0.5;
  std::string group_a = "A";
  std::string group_b = "B";
  std::uint64_t seed = 1;
};

std::vector<NodeSignal> planted_signal_cohort(const StiefelPoint& basis,
                                              const PlantedSignalOptions& options);

}  // namespace harmonics
