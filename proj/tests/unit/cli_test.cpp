#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace tripletctl::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tripletctl_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run_cli(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  json read_json(const std::string& name) const {
    std::ifstream f(dir_ / name);
    return json::parse(f);
  }

  std::string first_line(const std::string& name) const {
    std::ifstream f(dir_ / name);
    std::string line;
    std::getline(f, line);
    return line;
  }

  std::string out_dir() const { return dir_.string(); }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, LimitPrintsProbability) {
  ASSERT_EQ(run_cli({"limit"}), kExitOk);
  EXPECT_EQ(out_.str(), "0.316563835510\n");
  const double v = std::stod(out_.str());
  EXPECT_GE(v, 0.0);
  EXPECT_LE(v, 1.0);
}

TEST_F(CliTest, TqdWritesFilesWithConfig) {
  ASSERT_EQ(run_cli({"tqd", "--kind", "symmetric", "--e", "0.1", "--T", "10", "--out", out_dir()}), kExitOk)
      << err_.str();
  const json summary = read_json("tqd_summary.json");
  EXPECT_NEAR(summary["fidelity"].get<double>(), 0.9993, 5e-4);
  EXPECT_EQ(summary["config"]["kind"], "symmetric");
  EXPECT_EQ(summary["config"]["T"], 10.0);
  for (const char* csv : {"tqd_waveform.csv", "tqd_trajectory.csv"}) {
    EXPECT_EQ(first_line(csv).rfind("# config: {", 0), 0u) << csv;
  }
  EXPECT_NE(err_.str().find("# config:"), std::string::npos);
}

TEST_F(CliTest, TqdNonsymmetric) {
  ASSERT_EQ(run_cli({"tqd", "--kind", "nonsymmetric", "--out", out_dir()}), kExitOk);
  EXPECT_NEAR(read_json("tqd_summary.json")["fidelity"].get<double>(), 0.9991, 5e-4);
}

TEST_F(CliTest, InvalidParametersExitTwo) {
  EXPECT_EQ(run_cli({"tqd", "--T", "0", "--out", out_dir()}), kExitUsage);
  EXPECT_EQ(run_cli({"tqd", "--kind", "sideways", "--out", out_dir()}), kExitUsage);
  EXPECT_EQ(run_cli({"tqd", "--T", "abc"}), kExitUsage);
  EXPECT_EQ(run_cli({"tqd", "--bogus", "1"}), kExitUsage);
  EXPECT_EQ(run_cli({}), kExitUsage);
  EXPECT_EQ(run_cli({"repro", "fig99", "--out", out_dir()}), kExitUsage);
  EXPECT_EQ(run_cli({"tqd", "--steps", "10", "--out", out_dir()}), kExitUsage);
  EXPECT_EQ(run_cli({"optimize", "--mode", "spline", "--out", out_dir()}), kExitUsage);
}

TEST_F(CliTest, ConfigPrecedence) {
  const fs::path cfg = dir_ / "cfg.json";
  std::ofstream(cfg) << R"({"T": 5, "kind": "nonsymmetric", "e": 0.2})";
  ASSERT_EQ(run_cli({"tqd", "--config", cfg.string(), "--T", "10", "--out", out_dir()}), kExitOk) << err_.str();
  const json config = read_json("tqd_summary.json")["config"];
  EXPECT_EQ(config["T"], 10.0);
  EXPECT_EQ(config["kind"], "nonsymmetric");
  EXPECT_EQ(config["e"], 0.2);
}

TEST_F(CliTest, EmbeddedConfigReproducesOutput) {
  ASSERT_EQ(run_cli({"tqd", "--kind", "nonsymmetric", "--T", "7", "--steps", "500", "--out", out_dir()}), kExitOk);
  const fs::path first = dir_ / "first";
  fs::rename(dir_ / "tqd_trajectory.csv", dir_ / "first.csv");
  ASSERT_EQ(run_cli({"tqd", "--config", (dir_ / "tqd_summary.json").string(), "--out", first.string()}), kExitOk)
      << err_.str();
  EXPECT_EQ(read_json("first/tqd_summary.json")["config"]["T"], 7.0);
  auto payload = [](const fs::path& p) {
    std::ifstream f(p);
    std::string line, body;
    std::getline(f, line);
    while (std::getline(f, line)) body += line + "\n";
    return body;
  };
  EXPECT_EQ(payload(dir_ / "first.csv"), payload(first / "tqd_trajectory.csv"));
}

TEST_F(CliTest, ConfigErrors) {
  const fs::path cfg = dir_ / "cfg.json";
  std::ofstream(cfg) << R"({"bogus": 1})";
  EXPECT_EQ(run_cli({"tqd", "--config", cfg.string(), "--out", out_dir()}), kExitUsage);
  std::ofstream(cfg) << "not json";
  EXPECT_EQ(run_cli({"tqd", "--config", cfg.string(), "--out", out_dir()}), kExitUsage);
  EXPECT_EQ(run_cli({"tqd", "--config", (dir_ / "missing.json").string()}), kExitUsage);
}

TEST_F(CliTest, EvaluateSeriesRecordsConvention) {
  ASSERT_EQ(run_cli({"evaluate-series", "--out", out_dir()}), kExitOk);
  const json doc = read_json("evaluate_series.json");
  EXPECT_GE(doc["fidelity"].get<double>(), 0.99);
  EXPECT_EQ(doc["reproducing_convention"], doc["convention"]);
  EXPECT_EQ(doc["series"]["p"], 3);
}

TEST_F(CliTest, SimulateSources) {
  ASSERT_EQ(run_cli({"simulate", "--T", "1", "--omega", "1", "--method", "exp", "--out", out_dir()}), kExitOk);
  const double constant = read_json("simulate_summary.json")["fidelity"].get<double>();
  const fs::path series = dir_ / "series.json";
  std::ofstream(series) << R"({"p": 0, "coefficients": [[1.0, 0.0]]})";
  ASSERT_EQ(run_cli({"simulate", "--T", "1", "--series", series.string(), "--out", out_dir()}), kExitOk);
  EXPECT_NEAR(read_json("simulate_summary.json")["fidelity"].get<double>(), constant, 1e-9);
  EXPECT_EQ(run_cli({"simulate", "--series", series.string(), "--waveform", series.string()}), kExitUsage);
  EXPECT_EQ(run_cli({"simulate", "--method", "euler", "--out", out_dir()}), kExitUsage);
}

TEST_F(CliTest, SimulateWaveformFile) {
  const fs::path wf = dir_ / "wave.csv";
  std::ofstream(wf) << "t,delta,omega\n0,0,1\n1,0,1\n";
  ASSERT_EQ(run_cli({"simulate", "--waveform", wf.string(), "--out", out_dir()}), kExitOk) << err_.str();
  EXPECT_GT(read_json("simulate_summary.json")["fidelity"].get<double>(), 0.3);
}

TEST_F(CliTest, OptimizeSmall) {
  ASSERT_EQ(run_cli({"optimize", "--T", "2", "--segments", "50", "--restarts", "0", "--out", out_dir()}), kExitOk)
      << err_.str();
  const json report = read_json("optimize_report.json");
  EXPECT_GT(report["fidelity"].get<double>(), 0.93);
  EXPECT_EQ(report["seed"], 42);
  EXPECT_EQ(report["config"]["segments"], 50);
  EXPECT_EQ(first_line("optimize_trajectory.csv").rfind("# config:", 0), 0u);
}

TEST_F(CliTest, NumericFailureExitsThree) {
  EXPECT_EQ(run_cli({"optimize", "--T", "0.001", "--segments", "10", "--restarts", "0", "--out", out_dir()}),
            kExitNumeric);
}

TEST_F(CliTest, SweepDuration) {
  ASSERT_EQ(run_cli({"sweep-duration", "--T-values", "0.5,1,1.5", "--segments", "40", "--restarts", "1", "--out",
                     out_dir()}),
            kExitOk)
      << err_.str();
  EXPECT_EQ(first_line("sweep_duration.csv").rfind("# config:", 0), 0u);
}

TEST_F(CliTest, SweepDetuning) {
  ASSERT_EQ(run_cli({"sweep-detuning", "--T-values", "1.5", "--delta-values", "-0.1,0", "--segments", "40",
                     "--restarts", "0", "--out", out_dir()}),
            kExitOk)
      << err_.str();
  EXPECT_NE(out_.str().find("best delta"), std::string::npos);
}

TEST_F(CliTest, ReproTable) {
  ASSERT_EQ(run_cli({"repro", "table1", "--out", out_dir()}), kExitOk);
  EXPECT_EQ(read_json("table1.json")["config"]["experiment"], "table1");
}

TEST(CliExecutable, ExitCodes) {
  const std::string exe = TRIPLETCTL_EXECUTABLE;
  auto status = [&](const std::string& args) {
    const int raw = std::system((exe + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("limit"), 0);
  EXPECT_EQ(status("tqd --T 0"), 2);
  EXPECT_EQ(status("repro nope"), 2);
  EXPECT_EQ(status("--help"), 0);
}

}  // namespace
}  // namespace tripletctl::cli
