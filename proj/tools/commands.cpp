#include "commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "harmonics/analysis.hpp"
#include "harmonics/graph.hpp"
#include "harmonics/io.hpp"
#include "harmonics/rotations.hpp"
#include "harmonics/simulate.hpp"
#include "harmonics/solver.hpp"

namespace harmonics::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using io::format_double;

namespace {

constexpr Index kDefaultHarmonics = 60;

struct SolverFlags {
  SolverConfig config;
  std::optional<Index> p;
  bool strict = false;

  void add(CLI::App* cmd) {
    cmd->add_option("--p", p, "Harmonic count (default min(60, n))");
    cmd->add_option("--lambda", config.lambda, "Coupling weight")
        ->capture_default_str();
    cmd->add_option("--gamma", config.gamma, "Weiszfeld step size")
        ->capture_default_str();
    cmd->add_option("--eps1", config.gpi_tolerance, "GPI tolerance")
        ->capture_default_str();
    cmd->add_option("--eps2", config.weiszfeld_tolerance, "Weiszfeld tolerance")
        ->capture_default_str();
    cmd->add_option("--eps-outer", config.outer_tolerance,
                    "Outer-loop cost-change tolerance")
        ->capture_default_str();
    cmd->add_option("--max-iters", config.max_outer_iterations,
                    "Outer iteration cap")
        ->capture_default_str();
    cmd->add_option("--max-gpi-iters", config.max_gpi_iterations,
                    "GPI iteration cap")
        ->capture_default_str();
    cmd->add_option("--max-weiszfeld-iters", config.max_weiszfeld_iterations,
                    "Weiszfeld iteration cap")
        ->capture_default_str();
    cmd->add_option("--threads", config.threads, "Worker threads")
        ->capture_default_str();
    cmd->add_flag("--strict-paper", strict,
                  "Literal reference procedure (first-subject Weiszfeld start, "
                  "no backtracking, no tangent projection)");
  }

  SolverConfig resolve(Index n) const {
    SolverConfig c = config;
    c.harmonics = p.value_or(std::min(kDefaultHarmonics, n));
    c.literal_mode = strict;
    c.validate();
    return c;
  }
};

json config_json(const SolverConfig& c) {
  return {{"lambda", c.lambda},
          {"gamma", c.gamma},
          {"eps1", c.gpi_tolerance},
          {"eps2", c.weiszfeld_tolerance},
          {"eps_outer", c.outer_tolerance},
          {"max_outer_iterations", c.max_outer_iterations},
          {"max_gpi_iterations", c.max_gpi_iterations},
          {"max_weiszfeld_iterations", c.max_weiszfeld_iterations},
          {"harmonics", c.harmonics},
          {"literal_mode", c.literal_mode},
          {"threads", c.threads}};
}

/// NaN and infinities become null in the JSON output.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::Io, "cannot write " + path.string());
  return f;
}

void write_json(const fs::path& path, const json& doc) {
  open_out(path) << doc.dump(2) << '\n';
}

std::string file_stem_for(const std::string& subject) {
  std::string s = subject;
  for (char& ch : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' ||
                    ch == '_' || ch == '.';
    if (!ok) ch = '_';
  }
  return s;
}

std::string join_harmonics(const std::vector<Index>& hs) {
  std::string s;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(hs[i] + 1);
  }
  return s;
}

std::vector<AdjacencyMatrix> load_manifest_cohort(const std::string& path,
                                                  io::CohortManifest* manifest) {
  io::CohortManifest m = io::read_manifest(path);
  if (m.entries.empty()) {
    throw Error(ErrorKind::EmptyInput, "manifest " + path + " lists no subjects");
  }
  auto cohort = io::load_cohort(m);
  if (manifest) *manifest = std::move(m);
  return cohort;
}

// learn ----------------------------------------------------------------------

struct LearnArgs {
  std::string manifest;
  std::string out;
  SolverFlags solver;
};

int cmd_learn(const LearnArgs& a, std::ostream& out) {
  io::CohortManifest manifest;
  const auto cohort = load_manifest_cohort(a.manifest, &manifest);
  const SolverConfig config = a.solver.resolve(cohort.front().size());

  const HarmonicModel model = learn_common_harmonics(cohort, config);
  const StiefelPoint pseudo = pseudo_mean_harmonics(cohort, config.harmonics);
  const ArithmeticMean arith = arithmetic_mean_harmonics(model.individuals);

  const fs::path dir(a.out);
  fs::create_directories(dir / "phi");
  io::write_matrix(dir / "psi.txt", model.common.matrix());
  io::write_matrix(dir / "pseudo_mean.txt", pseudo.matrix());

  json subjects = json::array();
  for (std::size_t s = 0; s < cohort.size(); ++s) {
    const auto& e = manifest.entries[s];
    const std::string rel = "phi/" + file_stem_for(e.subject) + ".txt";
    io::write_matrix(dir / rel, model.individuals[s].matrix());
    subjects.push_back({{"id", e.subject}, {"group", e.group}, {"phi", rel}});
  }

  {
    std::ofstream trace = open_out(dir / "cost_trace.csv");
    trace << "iteration,cost,change,gpi_iterations_max,gpi_iterations_total,"
             "weiszfeld_iterations,weiszfeld_converged,distance_sum\n";
    trace << "0," << format_double(model.cost_trace.front()) << ",,,,,,\n";
    for (const auto& it : model.iterations) {
      trace << it.iteration << ',' << format_double(it.cost) << ','
            << format_double(it.change) << ',' << it.gpi_iterations_max << ','
            << it.gpi_iterations_total << ',' << it.weiszfeld_iterations << ','
            << (it.weiszfeld_converged ? 1 : 0) << ','
            << format_double(it.distance_sum) << '\n';
    }
  }

  const double final_cost = model.cost_trace.back();
  json doc = {
      {"nodes", model.common.rows()},
      {"harmonics", model.common.cols()},
      {"manifest", fs::absolute(a.manifest).string()},
      {"config", config_json(config)},
      {"converged", model.converged},
      {"outer_iterations", model.iterations.size()},
      {"initial_cost", model.cost_trace.front()},
      {"final_cost", final_cost},
      {"psi", "psi.txt"},
      {"pseudo_mean", "pseudo_mean.txt"},
      {"pseudo_mean_distance", squared_distance(model.common, pseudo)},
      {"arithmetic_mean_deviation", arith.deviation},
      {"psi_orthogonality_deviation",
       validate_on_manifold(model.common.matrix()).deviation},
      {"subjects", subjects},
  };
  write_json(dir / "model.json", doc);

  out << "subjects " << cohort.size() << ", n = " << model.common.rows()
      << ", p = " << model.common.cols() << '\n'
      << "outer iterations " << model.iterations.size() << ", cost "
      << format_double(model.cost_trace.front()) << " -> "
      << format_double(final_cost) << '\n'
      << (model.converged ? "converged" : "iteration cap reached") << "; model in "
      << dir.string() << '\n';
  return model.converged ? kSuccess : kConvergenceCap;
}

// analyze --------------------------------------------------------------------

struct AnalyzeArgs {
  std::string model;
  std::string basis;
  std::vector<std::string> signals;
  std::string out;
  double alpha = 0.01;
  std::vector<std::string> groups;
  int replicates = 50;
  double train_fraction = 0.6;
  double split_alpha = 1e-3;
  std::uint64_t seed = 0;
};

json statistic_json(const GroupStatistic& g) {
  return {{"mean_a", g.a.mean},         {"sd_a", g.a.stddev},
          {"mean_b", g.b.mean},         {"sd_b", g.b.stddev},
          {"t", number(g.test.t)},      {"df", number(g.test.df)},
          {"p_value", g.test.p_value}, {"fisher", number(g.fisher)},
          {"significant", g.significant}};
}

void write_statistic_row(std::ostream& f, const std::string& label,
                         const GroupStatistic& g) {
  f << label << ',' << format_double(g.a.mean) << ',' << format_double(g.a.stddev)
    << ',' << format_double(g.b.mean) << ',' << format_double(g.b.stddev) << ','
    << format_double(g.test.t) << ',' << format_double(g.test.df) << ','
    << format_double(g.test.p_value) << ',' << format_double(g.fisher) << ','
    << (g.significant ? 1 : 0) << '\n';
}

json analyze_table(const std::vector<NodeSignal>& signals,
                   const StiefelPoint& basis, const AnalyzeArgs& a,
                   const fs::path& dir, std::ostream& out) {
  std::optional<GroupPair> requested;
  if (!a.groups.empty()) requested = GroupPair{a.groups[0], a.groups[1]};
  const GroupEnergyReport report =
      group_energy_analysis(signals, basis, a.alpha, requested);
  const Index p = basis.cols();

  {
    std::ofstream f = open_out(dir / "spectra.csv");
    f << "subject_id,group";
    for (Index h = 0; h < p; ++h) f << ",E_" << h + 1;
    f << ",total\n";
    for (std::size_t i = 0; i < signals.size(); ++i) {
      f << signals[i].subject << ',' << signals[i].group;
      for (Index h = 0; h < p; ++h) {
        f << ',' << format_double(report.spectra[i].energies(h));
      }
      f << ',' << format_double(report.spectra[i].total) << '\n';
    }
  }
  {
    std::ofstream f = open_out(dir / "harmonics.csv");
    f << "harmonic,mean_" << report.groups.a << ",sd_" << report.groups.a
      << ",mean_" << report.groups.b << ",sd_" << report.groups.b
      << ",t,df,p_value,fisher,significant\n";
    for (Index h = 0; h < p; ++h) {
      write_statistic_row(f, std::to_string(h + 1),
                          report.harmonics[static_cast<std::size_t>(h)]);
    }
    write_statistic_row(f, "total", report.total);
  }

  json doc = {{"groups", {report.groups.a, report.groups.b}},
              {"alpha", a.alpha},
              {"subjects", signals.size()},
              {"harmonics", p},
              {"total_energy", statistic_json(report.total)}};
  json sig = json::array();
  for (Index h : report.significant) sig.push_back(h + 1);
  doc["significant_harmonics"] = sig;
  json per = json::array();
  for (const auto& g : report.harmonics) per.push_back(statistic_json(g));
  doc["per_harmonic"] = per;

  out << "groups " << report.groups.a << " vs " << report.groups.b << ": "
      << report.significant.size() << " of " << p
      << " harmonics significant at alpha " << a.alpha;
  if (!report.significant.empty()) {
    out << " (" << join_harmonics(report.significant) << ")";
  }
  out << "; total energy p = " << format_double(report.total.test.p_value)
      << '\n';

  if (a.replicates > 0) {
    ProtocolOptions po;
    po.replicates = a.replicates;
    po.train_fraction = a.train_fraction;
    po.seed = a.seed;
    po.power_alpha = a.alpha;
    po.split_alpha = a.split_alpha;
    const ProtocolReport proto =
        positive_negative_protocol(signals, basis, po, requested);
    std::ofstream f = open_out(dir / "protocol.csv");
    f << "replicate,power_significant,split_significant\n";
    for (std::size_t r = 0; r < proto.replicates.size(); ++r) {
      f << r + 1 << ',' << join_harmonics(proto.replicates[r].power_significant)
        << ',' << join_harmonics(proto.replicates[r].split_significant) << '\n';
    }
    doc["protocol"] = {{"replicates", a.replicates},
                       {"train_fraction", a.train_fraction},
                       {"power_alpha", a.alpha},
                       {"split_alpha", a.split_alpha},
                       {"seed", a.seed},
                       {"power_count_mean", proto.power_counts.mean},
                       {"power_count_sd", proto.power_counts.stddev},
                       {"split_count_mean", proto.split_counts.mean},
                       {"split_count_sd", proto.split_counts.stddev}};
    out << "positive/negative protocol: " << format_double(proto.split_counts.mean)
        << " harmonics retained on average over " << a.replicates
        << " replicates\n";
  }
  write_json(dir / "summary.json", doc);
  return doc;
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  if (a.model.empty() == a.basis.empty()) {
    throw Error(ErrorKind::EmptyInput, "give exactly one of --model or --basis");
  }
  const fs::path basis_path =
      a.basis.empty() ? fs::path(a.model) / "psi.txt" : fs::path(a.basis);
  const StiefelPoint basis(io::read_matrix(basis_path));
  const fs::path dir(a.out);
  for (const auto& table : a.signals) {
    const auto signals = io::read_signal_table(table);
    const fs::path sub =
        a.signals.size() == 1 ? dir : dir / fs::path(table).stem();
    out << fs::path(table).filename().string() << ": ";
    analyze_table(signals, basis, a, sub, out);
  }
  return kSuccess;
}

// replicability --------------------------------------------------------------

struct ReplicabilityArgs {
  std::string manifest;
  std::string out;
  SolverFlags solver;
  int replicates = 50;
  Index base = 0;
  Index extra = 0;
  double alpha = 0.01;
  std::uint64_t seed = 0;
};

void write_int_matrix(const fs::path& path, const Eigen::MatrixXi& m) {
  std::ofstream f = open_out(path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) f << (j ? "," : "") << m(i, j);
    f << '\n';
  }
}

int cmd_replicability(const ReplicabilityArgs& a, std::ostream& out) {
  const auto cohort = load_manifest_cohort(a.manifest, nullptr);
  ReplicabilityOptions o;
  o.solver = a.solver.resolve(cohort.front().size());
  o.replicates = a.replicates;
  o.base_count = a.base;
  o.extra_count = a.extra;
  o.alpha = a.alpha;
  o.seed = a.seed;
  const ReplicabilityReport r = replicability_test(cohort, o);

  const fs::path dir(a.out);
  write_int_matrix(dir / "manifold_failures.csv", r.manifold.failures);
  write_int_matrix(dir / "pseudo_failures.csv", r.pseudo.failures);
  io::write_matrix(dir / "manifold_p_values.txt", r.manifold.p_values);
  io::write_matrix(dir / "pseudo_p_values.txt", r.pseudo.p_values);
  {
    std::ofstream f = open_out(dir / "region_failures.csv");
    f << "node,manifold,pseudo\n";
    for (Index i = 0; i < r.manifold.region_failures.size(); ++i) {
      f << i + 1 << ',' << r.manifold.region_failures(i) << ','
        << r.pseudo.region_failures(i) << '\n';
    }
  }
  write_json(dir / "summary.json",
             {{"replicates", r.replicates},
              {"base_count", r.base_count},
              {"extra_count", r.extra_count},
              {"alpha", a.alpha},
              {"seed", a.seed},
              {"config", config_json(o.solver)},
              {"manifold_failures", r.manifold.total_failures},
              {"pseudo_failures", r.pseudo.total_failures}});
  out << "replicates " << r.replicates << " (" << r.base_count << " shared + 2 x "
      << r.extra_count << "): failures manifold " << r.manifold.total_failures
      << ", pseudo " << r.pseudo.total_failures << '\n';
  return kSuccess;
}

// pselect --------------------------------------------------------------------

struct PselectArgs {
  std::string manifest;
  std::string matrix;
  std::optional<Index> p_max;
  double fraction = 0.01;
  std::string out;
};

int cmd_pselect(const PselectArgs& a, std::ostream& out) {
  if (a.manifest.empty() == a.matrix.empty()) {
    throw Error(ErrorKind::EmptyInput, "give exactly one of --manifest or --matrix");
  }
  std::vector<std::string> names;
  std::vector<AdjacencyMatrix> cohort;
  if (!a.manifest.empty()) {
    io::CohortManifest m;
    cohort = load_manifest_cohort(a.manifest, &m);
    for (const auto& e : m.entries) names.push_back(e.subject);
  } else {
    cohort.emplace_back(io::read_matrix(a.matrix));
    names.push_back(fs::path(a.matrix).stem().string());
  }
  const Index n = cohort.front().size();
  const Index p_max = a.p_max.value_or(n);
  if (p_max < 1 || p_max > n) {
    throw Error(ErrorKind::OutOfRange, "p_max = " + std::to_string(p_max) +
                                           " must lie in [1, " +
                                           std::to_string(n) + "]");
  }

  std::vector<std::vector<ReconstructionPoint>> curves;
  for (const auto& w : cohort) {
    curves.push_back(reconstruction_error_curve(build_laplacian(w), p_max));
  }
  std::vector<ReconstructionPoint> mean(static_cast<std::size_t>(p_max));
  for (Index k = 0; k < p_max; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    mean[idx].p = k + 1;
    for (const auto& c : curves) mean[idx].error += c[idx].error;
    mean[idx].error /= static_cast<double>(curves.size());
  }
  const Index suggested = suggest_harmonic_count(mean, a.fraction);

  auto emit = [&](std::ostream& f) {
    f << "p";
    for (const auto& name : names) f << ',' << name;
    f << ",mean\n";
    for (Index k = 0; k < p_max; ++k) {
      const auto idx = static_cast<std::size_t>(k);
      f << k + 1;
      for (const auto& c : curves) f << ',' << format_double(c[idx].error);
      f << ',' << format_double(mean[idx].error) << '\n';
    }
  };
  if (a.out.empty()) {
    emit(out);
  } else {
    const fs::path dir(a.out);
    std::ofstream f = open_out(dir / "curve.csv");
    emit(f);
    write_json(dir / "summary.json", {{"p_max", p_max},
                                      {"fraction", a.fraction},
                                      {"subjects", names.size()},
                                      {"suggested_p", suggested}});
  }
  out << "suggested p: " << suggested << '\n';
  return kSuccess;
}

// synthetic ------------------------------------------------------------------

struct SyntheticArgs {
  int count = 20;
  double sigma = std::numbers::pi / 15.0;
  int seeds = 20;
  std::uint64_t seed = 0;
  std::string axis = "both";
  int init_index = 9;
  int max_iterations = 500;
  std::string out;
};

int cmd_synthetic(const SyntheticArgs& a, std::ostream& out) {
  if (a.seeds < 1) throw Error(ErrorKind::OutOfRange, "--seeds must be positive");
  std::vector<AxisMode> modes;
  if (a.axis != "fixed") modes.push_back(AxisMode::kRandom);
  if (a.axis != "random") modes.push_back(AxisMode::kFixed);

  std::optional<std::ofstream> table, traj;
  if (!a.out.empty()) {
    const fs::path dir(a.out);
    table.emplace(open_out(dir / "report.csv"));
    traj.emplace(open_out(dir / "trajectories.csv"));
    *table << "axis,seed,arithmetic_deviation,polar_distance,stiefel_distance,"
              "stiefel_deviation,iterations,converged\n";
    *traj << "axis,seed,iteration,distance_sum\n";
  }

  bool all_ok = true;
  out << "axis    seed  arith_dev      polar_d2       stiefel_d2     "
         "stiefel_dev  iters\n";
  for (AxisMode mode : modes) {
    const char* name = mode == AxisMode::kRandom ? "random" : "fixed";
    int arithmetic_failures = 0;
    bool mean_ok = true;
    for (int k = 0; k < a.seeds; ++k) {
      SyntheticOptions o;
      o.count = a.count;
      o.sigma = a.sigma;
      o.axis = mode;
      o.seed = a.seed + static_cast<std::uint64_t>(k);
      o.init_index = std::min(a.init_index, a.count - 1);
      o.max_iterations = a.max_iterations;
      const SyntheticReport r = run_synthetic_experiment(o);
      if (r.arithmetic_deviation > 1e-3) ++arithmetic_failures;
      mean_ok = mean_ok && r.stiefel_deviation <= 1e-8 &&
                r.stiefel_distance <= r.polar_distance + 1e-9;
      char line[160];
      std::snprintf(line, sizeof line,
                    "%-7s %4llu  %.6e  %.6e  %.6e  %.3e  %d\n", name,
                    static_cast<unsigned long long>(o.seed),
                    r.arithmetic_deviation, r.polar_distance, r.stiefel_distance,
                    r.stiefel_deviation, r.iterations);
      out << line;
      if (table) {
        *table << name << ',' << o.seed << ','
               << format_double(r.arithmetic_deviation) << ','
               << format_double(r.polar_distance) << ','
               << format_double(r.stiefel_distance) << ','
               << format_double(r.stiefel_deviation) << ',' << r.iterations
               << ',' << (r.converged ? 1 : 0) << '\n';
        for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
          *traj << name << ',' << o.seed << ',' << i << ','
                << format_double(r.trajectory[i]) << '\n';
        }
      }
    }
    out << name << ": Stiefel mean orthogonal and no farther than the "
        << "projected arithmetic mean in every seed: " << (mean_ok ? "yes" : "no")
        << "; arithmetic mean off the manifold in " << arithmetic_failures << '/'
        << a.seeds << " seeds\n";
    all_ok = all_ok && mean_ok;
    if (mode == AxisMode::kRandom && a.sigma > 0.0) {
      all_ok = all_ok && 20 * arithmetic_failures >= 19 * a.seeds;
    }
  }
  out << (all_ok ? "PASS" : "FAIL") << '\n';
  return all_ok ? kSuccess : kAcceptance;
}

// simulate -------------------------------------------------------------------

struct SimulateCohortArgs {
  BlockCohortOptions options;
  std::string out;
};

int cmd_simulate_cohort(const SimulateCohortArgs& a, std::ostream& out) {
  const auto cohort = block_cohort(a.options);
  const fs::path dir(a.out);
  io::CohortManifest manifest;
  const std::size_t half = (cohort.size() + 1) / 2;
  for (std::size_t s = 0; s < cohort.size(); ++s) {
    char id[32];
    std::snprintf(id, sizeof id, "s%03zu", s + 1);
    const fs::path file = fs::path("networks") / (std::string(id) + ".txt");
    io::write_matrix(dir / file, cohort[s].weights());
    manifest.entries.push_back({id, file, s < half ? "A" : "B"});
  }
  io::write_manifest(dir / "manifest.csv", manifest);
  out << "wrote " << cohort.size() << " networks and "
      << (dir / "manifest.csv").string() << '\n';
  return kSuccess;
}

struct SimulateSignalsArgs {
  std::string basis;
  Index harmonic = 5;
  PlantedSignalOptions options;
  std::string out;
};

int cmd_simulate_signals(SimulateSignalsArgs a, std::ostream& out) {
  const StiefelPoint basis(io::read_matrix(a.basis));
  a.options.harmonic = a.harmonic - 1;
  const auto signals = planted_signal_cohort(basis, a.options);
  io::write_signal_table(a.out, signals);
  out << "wrote " << signals.size() << " signals to " << a.out << '\n';
  return kSuccess;
}

}  // namespace

ExitCode exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::Io:
      return kParse;
    case ErrorKind::EmptyInput:
      return kUsage;
    case ErrorKind::EigenSolverFailure:
    case ErrorKind::SvdFailure:
    case ErrorKind::StepFailure:
      return kNumerical;
    default:
      return kValidation;
  }
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Common harmonic waves of brain-network cohorts"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  LearnArgs learn;
  auto* c_learn = app.add_subcommand("learn", "Learn common harmonics of a cohort");
  c_learn->add_option("manifest", learn.manifest, "Cohort manifest")->required();
  c_learn->add_option("--out", learn.out, "Model output directory")->required();
  learn.solver.add(c_learn);

  AnalyzeArgs analyze;
  auto* c_analyze =
      app.add_subcommand("analyze", "Group statistics of node signals on a basis");
  c_analyze->add_option("--model", analyze.model, "Model directory from learn");
  c_analyze->add_option("--basis", analyze.basis, "Basis matrix file");
  c_analyze->add_option("--signals", analyze.signals, "Signal table(s)")
      ->required();
  c_analyze->add_option("--out", analyze.out, "Report directory")->required();
  c_analyze->add_option("--alpha", analyze.alpha, "Significance level")
      ->capture_default_str();
  c_analyze->add_option("--groups", analyze.groups, "Two group labels")
      ->expected(2)
      ->delimiter(',');
  c_analyze->add_option("--replicates", analyze.replicates,
                        "Positive/negative protocol replicates (0 skips)")
      ->capture_default_str();
  c_analyze->add_option("--train-fraction", analyze.train_fraction)
      ->capture_default_str();
  c_analyze->add_option("--split-alpha", analyze.split_alpha,
                        "Threshold of the held-out split test")
      ->capture_default_str();
  c_analyze->add_option("--seed", analyze.seed)->capture_default_str();

  ReplicabilityArgs rep;
  auto* c_rep = app.add_subcommand("replicability", "Test/retest resampling");
  c_rep->add_option("manifest", rep.manifest, "Cohort manifest")->required();
  c_rep->add_option("--out", rep.out, "Report directory")->required();
  c_rep->add_option("--replicates", rep.replicates)->capture_default_str();
  c_rep->add_option("--base", rep.base, "Shared sample size (default 70/94 of m)");
  c_rep->add_option("--extra", rep.extra, "Size of each addition (default 5/94 of m)");
  c_rep->add_option("--alpha", rep.alpha)->capture_default_str();
  c_rep->add_option("--seed", rep.seed)->capture_default_str();
  rep.solver.add(c_rep);

  PselectArgs pselect;
  auto* c_psel =
      app.add_subcommand("pselect", "Reconstruction-error curve and suggested p");
  c_psel->add_option("--manifest", pselect.manifest, "Cohort manifest");
  c_psel->add_option("--matrix", pselect.matrix, "Single adjacency matrix");
  c_psel->add_option("--p-max", pselect.p_max, "Largest p (default n)");
  c_psel->add_option("--fraction", pselect.fraction,
                     "Marginal decrease, as a fraction of error(1)")
      ->capture_default_str();
  c_psel->add_option("--out", pselect.out, "Output directory (default stdout)");

  SyntheticArgs syn;
  auto* c_syn = app.add_subcommand("synthetic", "Rotation-averaging experiment");
  c_syn->add_option("--count", syn.count, "Rotations per seed")
      ->capture_default_str();
  c_syn->add_option("--sigma", syn.sigma, "Angle standard deviation")
      ->capture_default_str();
  c_syn->add_option("--seeds", syn.seeds, "Number of seeds")->capture_default_str();
  c_syn->add_option("--seed", syn.seed, "First seed")->capture_default_str();
  c_syn->add_option("--axis", syn.axis)
      ->check(CLI::IsMember({"random", "fixed", "both"}))
      ->capture_default_str();
  c_syn->add_option("--init-index", syn.init_index)->capture_default_str();
  c_syn->add_option("--max-iters", syn.max_iterations)->capture_default_str();
  c_syn->add_option("--out", syn.out, "Output directory");

  auto* c_sim = app.add_subcommand("simulate", "Generate demonstration data");
  c_sim->require_subcommand(1);
  SimulateCohortArgs simc;
  auto* c_simc = c_sim->add_subcommand("cohort", "Block-structured network cohort");
  c_simc->add_option("--nodes", simc.options.nodes)->capture_default_str();
  c_simc->add_option("--blocks", simc.options.blocks)->capture_default_str();
  c_simc->add_option("--subjects", simc.options.subjects)->capture_default_str();
  c_simc->add_option("--seed", simc.options.seed)->capture_default_str();
  c_simc->add_option("--out", simc.out, "Output directory")->required();
  SimulateSignalsArgs sims;
  auto* c_sims = c_sim->add_subcommand("signals", "Two-group planted-signal table");
  c_sims->add_option("--basis", sims.basis, "Basis matrix file")->required();
  c_sims->add_option("--harmonic", sims.harmonic, "Planted harmonic (1-based)")
      ->capture_default_str();
  c_sims->add_option("--amplitude", sims.options.amplitude)->capture_default_str();
  c_sims->add_option("--noise", sims.options.noise)->capture_default_str();
  c_sims->add_option("--per-group", sims.options.per_group)->capture_default_str();
  c_sims->add_option("--seed", sims.options.seed)->capture_default_str();
  c_sims->add_option("--out", sims.out, "Signal table path")->required();

  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (c_learn->parsed()) return cmd_learn(learn, out);
    if (c_analyze->parsed()) return cmd_analyze(analyze, out);
    if (c_rep->parsed()) return cmd_replicability(rep, out);
    if (c_psel->parsed()) return cmd_pselect(pselect, out);
    if (c_syn->parsed()) return cmd_synthetic(syn, out);
    if (c_simc->parsed()) return cmd_simulate_cohort(simc, out);
    if (c_sims->parsed()) return cmd_simulate_signals(sims, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error (io): " << e.what() << '\n';
    return kParse;
  }
  return kUsage;
}

}  // namespace harmonics::cli
