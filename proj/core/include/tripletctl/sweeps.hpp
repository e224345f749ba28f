#pragma once

#include <string>
#include <vector>

#include "tripletctl/optimal_control.hpp"

namespace tripletctl {

// Slack allowed when checking that best fidelity does not drop as T grows;
// covers re-discretizing a shorter solution onto the longer grid.
inline constexpr double kMonotoneSlack = 1e-5;

struct SweepCell {
  double duration = 0.0;
  double delta = 0.0;
  double fidelity = 0.0;
  bool ok = false;
  std::string error;
  int restarts = 0;
  std::uint64_t seed = 0;
  std::vector<double> omegas;  // best control, empty on failure
};

struct SweepOptions {
  OptimizerSettings settings{};
  std::size_t segments = kDefaultSegments;
  // 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

// optimize_piecewise for every (T, delta) pair, row-major in durations. Cell i
// uses seed settings.seed + i. Failures are recorded in the cell.
std::vector<SweepCell> sweep_detuning(const std::vector<double>& durations, const std::vector<double>& deltas,
                                      const SweepOptions& options = {});

// Best fidelity against T for one fixed delta. A cell that falls below its
// predecessor by more than kMonotoneSlack is re-run with twice the restarts and
// the predecessor's control (padded with omega = 0) as a warm start.
std::vector<SweepCell> sweep_duration(double delta, const std::vector<double>& durations,
                                      const SweepOptions& options = {});

// First index whose fidelity drops below its predecessor by more than slack, or -1.
int first_monotonicity_violation(const std::vector<SweepCell>& cells, double slack = kMonotoneSlack);

}  // namespace tripletctl
