#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "harmonics/io.hpp"

namespace {

namespace fs = std::filesystem;
using harmonics::cli::ExitCode;
using json = nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "harmonics");
  std::ostringstream out, err;
  const int code = harmonics::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json load_json(const fs::path& p) { return json::parse(slurp(p)); }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("harmonics_cli_") +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& rel) const { return (dir_ / rel).string(); }

  void simulate_cohort(const std::string& rel, int subjects = 8, int nodes = 16) {
    const auto r = invoke({"simulate", "cohort", "--nodes", std::to_string(nodes), "--subjects",
                           std::to_string(subjects), "--seed", "3", "--out", path(rel)});
    ASSERT_EQ(r.code, ExitCode::kSuccess) << r.err;
  }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(invoke({}).code, ExitCode::kUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, ExitCode::kUsage);
  EXPECT_EQ(invoke({"learn"}).code, ExitCode::kUsage);
  EXPECT_EQ(invoke({"learn", "x.csv", "--out", "o", "--lambda", "abc"}).code, ExitCode::kUsage);
  EXPECT_EQ(invoke({"--help"}).code, ExitCode::kSuccess);
}

TEST_F(CliTest, LearnWritesModelAndIsDeterministic) {
  simulate_cohort("cohort");
  const auto manifest = path("cohort/manifest.csv");
  const auto a = invoke({"learn", manifest, "--p", "4", "--out", path("m1")});
  ASSERT_EQ(a.code, ExitCode::kSuccess) << a.err;
  const auto b = invoke({"learn", manifest, "--p", "4", "--threads", "3", "--out", path("m2")});
  ASSERT_EQ(b.code, ExitCode::kSuccess) << b.err;

  const auto model = load_json(dir_ / "m1/model.json");
  EXPECT_EQ(model["nodes"], 16);
  EXPECT_EQ(model["harmonics"], 4);
  EXPECT_TRUE(model["converged"].get<bool>());
  EXPECT_LE(model["final_cost"].get<double>(), model["initial_cost"].get<double>());
  EXPECT_LE(model["psi_orthogonality_deviation"].get<double>(), 1e-8);
  EXPECT_EQ(model["subjects"].size(), 8u);

  const auto psi = harmonics::io::read_matrix(dir_ / "m1/psi.txt");
  EXPECT_EQ(psi.rows(), 16);
  EXPECT_EQ(psi.cols(), 4);
  EXPECT_TRUE(fs::exists(dir_ / "m1/pseudo_mean.txt"));
  EXPECT_TRUE(fs::exists(dir_ / "m1/phi/s001.txt"));
  EXPECT_TRUE(fs::exists(dir_ / "m1/cost_trace.csv"));

  EXPECT_EQ(slurp(dir_ / "m1/psi.txt"), slurp(dir_ / "m2/psi.txt"));
  EXPECT_EQ(slurp(dir_ / "m1/cost_trace.csv"), slurp(dir_ / "m2/cost_trace.csv"));
}

TEST_F(CliTest, LearnReportsIterationCap) {
  simulate_cohort("cohort");
  const auto r = invoke({"learn", path("cohort/manifest.csv"), "--p", "4", "--max-iters", "1",
                         "--eps-outer", "1e-30", "--out", path("m")});
  EXPECT_EQ(r.code, ExitCode::kConvergenceCap);
  EXPECT_TRUE(fs::exists(dir_ / "m/psi.txt"));
  EXPECT_FALSE(load_json(dir_ / "m/model.json")["converged"].get<bool>());
}

TEST_F(CliTest, LearnInputErrors) {
  std::ofstream(dir_ / "empty.csv") << "subject_id,path,group\n";
  EXPECT_EQ(invoke({"learn", path("empty.csv"), "--out", path("m")}).code, ExitCode::kUsage);

  std::ofstream(dir_ / "bad.txt") << "0 1\n1 zz\n";
  std::ofstream(dir_ / "bad.csv") << "s,bad.txt\n";
  const auto parse = invoke({"learn", path("bad.csv"), "--out", path("m")});
  EXPECT_EQ(parse.code, ExitCode::kParse);
  EXPECT_NE(parse.err.find("bad.txt:2:"), std::string::npos);

  EXPECT_EQ(invoke({"learn", path("missing.csv"), "--out", path("m")}).code, ExitCode::kParse);

  std::ofstream(dir_ / "neg.txt") << "0 -1\n-1 0\n";
  std::ofstream(dir_ / "neg.csv") << "s,neg.txt\n";
  EXPECT_EQ(invoke({"learn", path("neg.csv"), "--out", path("m")}).code,
            ExitCode::kValidation);

  simulate_cohort("cohort");
  EXPECT_EQ(invoke({"learn", path("cohort/manifest.csv"), "--p", "0", "--out", path("m")}).code,
            ExitCode::kValidation);
  EXPECT_EQ(invoke({"learn", path("cohort/manifest.csv"), "--p", "17", "--out", path("m")}).code,
            ExitCode::kValidation);
  EXPECT_EQ(
      invoke({"learn", path("cohort/manifest.csv"), "--lambda=-1", "--out", path("m")}).code,
      ExitCode::kValidation);
}

TEST_F(CliTest, AnalyzeFindsPlantedHarmonic) {
  simulate_cohort("cohort");
  ASSERT_EQ(invoke({"learn", path("cohort/manifest.csv"), "--p", "8", "--out", path("m")}).code,
            ExitCode::kSuccess);
  const auto sim = invoke({"simulate", "signals", "--basis", path("m/psi.txt"), "--harmonic",
                           "3", "--per-group", "30", "--seed", "9", "--out", path("sig.csv")});
  ASSERT_EQ(sim.code, ExitCode::kSuccess) << sim.err;
  const auto r = invoke({"analyze", "--model", path("m"), "--signals", path("sig.csv"),
                         "--replicates", "5", "--out", path("report")});
  ASSERT_EQ(r.code, ExitCode::kSuccess) << r.err;
  const auto summary = load_json(dir_ / "report/summary.json");
  const auto& sig = summary["significant_harmonics"];
  EXPECT_NE(std::find(sig.begin(), sig.end(), 3), sig.end()) << summary.dump();
  EXPECT_TRUE(fs::exists(dir_ / "report/spectra.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "report/harmonics.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "report/protocol.csv"));

  EXPECT_EQ(invoke({"analyze", "--model", path("m"), "--signals", path("sig.csv"), "--groups",
                    "A,Z", "--out", path("r2")})
                .code,
            ExitCode::kValidation);
}

TEST_F(CliTest, PselectCurve) {
  simulate_cohort("cohort", 3);
  const auto r = invoke({"pselect", "--manifest", path("cohort/manifest.csv"), "--out", path("p")});
  ASSERT_EQ(r.code, ExitCode::kSuccess) << r.err;
  EXPECT_NE(r.out.find("suggested p:"), std::string::npos);
  const auto summary = load_json(dir_ / "p/summary.json");
  EXPECT_EQ(summary["p_max"], 16);
  const auto stdout_run = invoke({"pselect", "--matrix", path("cohort/networks/s001.txt"),
                                  "--p-max", "5"});
  ASSERT_EQ(stdout_run.code, ExitCode::kSuccess);
  EXPECT_EQ(stdout_run.out.rfind("p,", 0), 0u);
  EXPECT_EQ(invoke({"pselect", "--matrix", path("cohort/networks/s001.txt"), "--p-max", "17"})
                .code,
            ExitCode::kValidation);
}

TEST_F(CliTest, SyntheticPasses) {
  const auto r = invoke({"synthetic", "--seeds", "5", "--out", path("syn")});
  ASSERT_EQ(r.code, ExitCode::kSuccess) << r.out << r.err;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "syn/report.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "syn/trajectories.csv"));
  EXPECT_EQ(invoke({"synthetic", "--axis", "diagonal"}).code, ExitCode::kUsage);
}

TEST_F(CliTest, ReplicabilityWritesTables) {
  simulate_cohort("cohort", 12);
  const auto r = invoke({"replicability", path("cohort/manifest.csv"), "--p", "4",
                         "--replicates", "3", "--base", "8", "--extra", "2", "--out",
                         path("rep")});
  ASSERT_EQ(r.code, ExitCode::kSuccess) << r.err;
  for (const char* f : {"manifold_failures.csv", "pseudo_failures.csv", "manifold_p_values.txt",
                        "pseudo_p_values.txt", "region_failures.csv", "summary.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "rep" / f)) << f;
  }
  EXPECT_EQ(invoke({"replicability", path("cohort/manifest.csv"), "--p", "4", "--base", "11",
                    "--extra", "2", "--out", path("rep2")})
                .code,
            ExitCode::kValidation);
}

}  // namespace
