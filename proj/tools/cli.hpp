#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tripletctl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

// Fully resolved parameters of one CLI run. Precedence: command-line flags,
// then the --config JSON file, then built-in defaults. --config also accepts
// any JSON output file, reading its embedded "config" object.
struct ExperimentConfig {
  std::string experiment;
  std::string kind = "symmetric";
  double e = 0.1;
  double T = 10.0;
  double delta = 0.0;
  double omega = 0.0;
  double omega_bound = 1.0;
  double delta_bound = 1.0;
  std::string mode = "piecewise";    // optimize: piecewise | trig
  std::string delta_mode = "fixed";  // trig: fixed | trig-series
  int p = 3;
  int restarts = 8;
  std::uint64_t seed = 42;
  std::size_t steps = 4000;
  std::size_t segments = 1000;
  std::string method = "rk4";
  std::vector<double> T_values;
  std::vector<double> delta_values;
  std::string series;    // path to series JSON
  std::string waveform;  // path to waveform CSV
  unsigned threads = 0;
  std::string out = "out";
};

nlohmann::json to_json(const ExperimentConfig& config);
// Overrides only the keys present in `doc`; unknown keys are a usage error.
void merge_json(ExperimentConfig& config, const nlohmann::json& doc);

// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tripletctl::cli
