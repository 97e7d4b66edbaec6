#include "harmonics/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "harmonics/error.hpp"
#include "harmonics/parallel.hpp"

namespace harmonics {

namespace {

// Differences this small are rounding noise between bit-different but
// mathematically identical runs.
constexpr double kIdenticalDifference = 1e-12;

void require_length(const Vector& signal, Index n, const std::string& who) {
  if (signal.size() != n) {
    throw Error(ErrorKind::DimensionMismatch,
                who + ": signal has " + std::to_string(signal.size()) +
                    " values, basis has " + std::to_string(n) + " nodes");
  }
  if (!signal.allFinite()) {
    throw Error(ErrorKind::NonFinite, who + ": signal has non-finite values");
  }
}

GroupStatistic compare(const std::vector<double>& a, const std::vector<double>& b,
                       double alpha) {
  GroupStatistic s;
  s.a = summarize(a);
  s.b = summarize(b);
  s.test = welch_t_test(a, b);
  s.fisher = s.a.variance + s.b.variance > 0.0
                 ? fisher_score(a, b)
                 : std::numeric_limits<double>::quiet_NaN();
  s.significant = s.test.p_value < alpha;
  return s;
}

struct GroupMembers {
  std::vector<std::size_t> a;
  std::vector<std::size_t> b;
};

GroupMembers split_members(std::span<const NodeSignal> signals,
                           const GroupPair& groups) {
  GroupMembers m;
  for (std::size_t i = 0; i < signals.size(); ++i) {
    if (signals[i].group == groups.a) m.a.push_back(i);
    if (signals[i].group == groups.b) m.b.push_back(i);
  }
  return m;
}

std::vector<double> gather(const std::vector<std::size_t>& idx,
                           const std::vector<double>& values) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(values[i]);
  return out;
}

Index scaled_count(Index total, double fraction) {
  return std::max<Index>(1, static_cast<Index>(std::lround(
                                static_cast<double>(total) * fraction)));
}

ReplicabilityMethod summarize_differences(
    const std::vector<Matrix>& first, const std::vector<Matrix>& second,
    double alpha) {
  const Index n = first.front().rows();
  const Index p = first.front().cols();
  ReplicabilityMethod out;
  out.failures = Eigen::MatrixXi::Zero(n, p);
  out.p_values = Matrix::Ones(n, p);
  std::vector<double> diffs(first.size());
  for (Index i = 0; i < n; ++i) {
    for (Index h = 0; h < p; ++h) {
      for (std::size_t r = 0; r < first.size(); ++r) {
        const double d = first[r](i, h) - second[r](i, h);
        diffs[r] = std::abs(d) <= kIdenticalDifference ? 0.0 : d;
      }
      const double pv = paired_t_test(diffs).p_value;
      out.p_values(i, h) = pv;
      out.failures(i, h) = pv < alpha ? 1 : 0;
    }
  }
  out.region_failures = out.failures.rowwise().sum();
  out.total_failures = out.failures.sum();
  return out;
}

// Canonical signs on the first basis, then flip columns of the second so each
// pair of columns has a nonnegative inner product.
void align_signs(Matrix& first, Matrix& second) {
  canonicalize_signs(first);
  canonicalize_signs(second);
  for (Index h = 0; h < first.cols(); ++h) {
    if (first.col(h).dot(second.col(h)) < 0.0) second.col(h) *= -1.0;
  }
}

}  // namespace

EnergySpectrum energy_spectrum(const Vector& signal, const StiefelPoint& basis) {
  require_length(signal, basis.rows(), "energy_spectrum");
  EnergySpectrum out;
  out.powers = basis.matrix().transpose() * signal;
  out.energies = out.powers.array().square();
  out.total = out.energies.sum();
  return out;
}

SplitPower split_power(const Vector& signal, const Vector& harmonic) {
  require_length(signal, harmonic.size(), "split_power");
  double pos = 0.0;
  double neg = 0.0;
  for (Index i = 0; i < harmonic.size(); ++i) {
    if (harmonic(i) > 0.0) {
      pos += signal(i) * harmonic(i);
    } else if (harmonic(i) < 0.0) {
      neg += signal(i) * harmonic(i);
    }
  }
  return {pos, std::abs(neg)};
}

GroupPair resolve_groups(std::span<const NodeSignal> signals,
                         const std::optional<GroupPair>& requested) {
  std::vector<std::string> labels;
  for (const auto& s : signals) {
    if (std::find(labels.begin(), labels.end(), s.group) == labels.end()) {
      labels.push_back(s.group);
    }
  }
  auto present = [&](const std::string& g) {
    return std::find(labels.begin(), labels.end(), g) != labels.end();
  };
  if (requested) {
    for (const auto* g : {&requested->a, &requested->b}) {
      if (!present(*g)) {
        throw Error(ErrorKind::MissingGroup, "group '" + *g + "' has no subjects");
      }
    }
    if (requested->a == requested->b) {
      throw Error(ErrorKind::MissingGroup, "the two groups must differ");
    }
    return *requested;
  }
  if (labels.size() != 2) {
    throw Error(ErrorKind::MissingGroup,
                "expected exactly two groups, found " +
                    std::to_string(labels.size()));
  }
  return {labels[0], labels[1]};
}

GroupEnergyReport group_energy_analysis(std::span<const NodeSignal> signals,
                                        const StiefelPoint& basis, double alpha,
                                        const std::optional<GroupPair>& groups) {
  GroupEnergyReport report;
  report.groups = resolve_groups(signals, groups);
  report.alpha = alpha;
  const GroupMembers members = split_members(signals, report.groups);
  if (members.a.size() < 2 || members.b.size() < 2) {
    throw Error(ErrorKind::InsufficientSamples,
                "each group needs at least two subjects");
  }

  report.spectra.reserve(signals.size());
  for (const auto& s : signals) {
    report.spectra.push_back(energy_spectrum(s.values, basis));
  }

  const Index p = basis.cols();
  std::vector<double> column(signals.size());
  for (Index h = 0; h < p; ++h) {
    for (std::size_t i = 0; i < signals.size(); ++i) {
      column[i] = report.spectra[i].energies(h);
    }
    report.harmonics.push_back(
        compare(gather(members.a, column), gather(members.b, column), alpha));
    if (report.harmonics.back().significant) report.significant.push_back(h);
  }
  for (std::size_t i = 0; i < signals.size(); ++i) {
    column[i] = report.spectra[i].total;
  }
  report.total =
      compare(gather(members.a, column), gather(members.b, column), alpha);
  return report;
}

ProtocolReport positive_negative_protocol(std::span<const NodeSignal> signals,
                                          const StiefelPoint& basis,
                                          const ProtocolOptions& options,
                                          const std::optional<GroupPair>& groups) {
  if (!(options.train_fraction > 0.0 && options.train_fraction < 1.0)) {
    throw Error(ErrorKind::OutOfRange, "train_fraction must lie in (0, 1)");
  }
  if (options.replicates < 0) {
    throw Error(ErrorKind::OutOfRange, "replicates must be nonnegative");
  }
  ProtocolReport report;
  report.groups = resolve_groups(signals, groups);
  GroupMembers members = split_members(signals, report.groups);
  auto train_size = [&](std::size_t total) {
    return static_cast<std::size_t>(
        std::floor(options.train_fraction * static_cast<double>(total)));
  };
  for (const auto* g : {&members.a, &members.b}) {
    const std::size_t tr = train_size(g->size());
    if (tr < 2 || g->size() - tr < 2) {
      throw Error(ErrorKind::InsufficientSamples,
                  "each group needs at least two training and two held-out "
                  "subjects, group has " +
                      std::to_string(g->size()));
    }
  }

  const Index p = basis.cols();
  std::vector<Vector> powers;
  powers.reserve(signals.size());
  for (const auto& s : signals) {
    powers.push_back(energy_spectrum(s.values, basis).powers);
  }

  std::mt19937_64 rng(options.seed);
  std::vector<double> power_counts;
  std::vector<double> split_counts;
  for (int r = 0; r < options.replicates; ++r) {
    std::shuffle(members.a.begin(), members.a.end(), rng);
    std::shuffle(members.b.begin(), members.b.end(), rng);
    const std::size_t ta = train_size(members.a.size());
    const std::size_t tb = train_size(members.b.size());

    ProtocolReplicate rep;
    std::vector<double> xa(ta);
    std::vector<double> xb(tb);
    for (Index h = 0; h < p; ++h) {
      for (std::size_t i = 0; i < ta; ++i) xa[i] = powers[members.a[i]](h);
      for (std::size_t i = 0; i < tb; ++i) xb[i] = powers[members.b[i]](h);
      if (welch_t_test(xa, xb).p_value < options.power_alpha) {
        rep.power_significant.push_back(h);
      }
    }
    std::vector<double> ya(members.a.size() - ta);
    std::vector<double> yb(members.b.size() - tb);
    for (Index h : rep.power_significant) {
      const Vector harmonic = basis.matrix().col(h);
      auto kinetic = [&](std::size_t idx) {
        const SplitPower sp = split_power(signals[idx].values, harmonic);
        return std::abs(sp.positive - sp.negative);
      };
      for (std::size_t i = 0; i < ya.size(); ++i) ya[i] = kinetic(members.a[ta + i]);
      for (std::size_t i = 0; i < yb.size(); ++i) yb[i] = kinetic(members.b[tb + i]);
      if (welch_t_test(ya, yb).p_value < options.split_alpha) {
        rep.split_significant.push_back(h);
      }
    }
    power_counts.push_back(static_cast<double>(rep.power_significant.size()));
    split_counts.push_back(static_cast<double>(rep.split_significant.size()));
    report.replicates.push_back(std::move(rep));
  }
  report.power_counts = summarize(power_counts);
  report.split_counts = summarize(split_counts);
  return report;
}

ReplicabilityReport replicability_test(std::span<const AdjacencyMatrix> networks,
                                       const ReplicabilityOptions& options) {
  options.solver.validate();
  if (options.replicates < 2) {
    throw Error(ErrorKind::InsufficientSamples,
                "the paired test needs at least two replicates");
  }
  const Index m = static_cast<Index>(networks.size());
  ReplicabilityReport report;
  report.replicates = options.replicates;
  report.base_count = options.base_count > 0 ? options.base_count
                                             : scaled_count(m, 70.0 / 94.0);
  report.extra_count = options.extra_count > 0 ? options.extra_count
                                               : scaled_count(m, 5.0 / 94.0);
  if (report.base_count + 2 * report.extra_count > m) {
    throw Error(ErrorKind::InsufficientSamples,
                "cohort of " + std::to_string(m) + " cannot supply " +
                    std::to_string(report.base_count) + " shared + 2 x " +
                    std::to_string(report.extra_count) + " networks");
  }

  // Draw every split up front so results do not depend on the thread count.
  std::mt19937_64 rng(options.seed);
  std::vector<std::vector<std::size_t>> draws;
  std::vector<std::size_t> order(networks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (int r = 0; r < options.replicates; ++r) {
    std::shuffle(order.begin(), order.end(), rng);
    draws.push_back(order);
  }

  const auto base = static_cast<std::size_t>(report.base_count);
  const auto extra = static_cast<std::size_t>(report.extra_count);
  SolverConfig solver = options.solver;
  solver.threads = 1;

  const auto count = static_cast<std::size_t>(options.replicates);
  std::vector<Matrix> manifold_a(count), manifold_b(count);
  std::vector<Matrix> pseudo_a(count), pseudo_b(count);
  parallel_for(count, options.solver.threads, [&](std::size_t r) {
    const auto& d = draws[r];
    std::vector<AdjacencyMatrix> cohort_a;
    std::vector<AdjacencyMatrix> cohort_b;
    for (std::size_t i = 0; i < base; ++i) {
      cohort_a.push_back(networks[d[i]]);
      cohort_b.push_back(networks[d[i]]);
    }
    for (std::size_t i = 0; i < extra; ++i) {
      cohort_a.push_back(networks[d[base + i]]);
      cohort_b.push_back(networks[d[base + extra + i]]);
    }
    manifold_a[r] = learn_common_harmonics(cohort_a, solver).common.matrix();
    manifold_b[r] = learn_common_harmonics(cohort_b, solver).common.matrix();
    pseudo_a[r] = pseudo_mean_harmonics(cohort_a, solver.harmonics).matrix();
    pseudo_b[r] = pseudo_mean_harmonics(cohort_b, solver.harmonics).matrix();
    align_signs(manifold_a[r], manifold_b[r]);
    align_signs(pseudo_a[r], pseudo_b[r]);
  });

  report.manifold = summarize_differences(manifold_a, manifold_b, options.alpha);
  report.pseudo = summarize_differences(pseudo_a, pseudo_b, options.alpha);
  return report;
}

}  // namespace harmonics
