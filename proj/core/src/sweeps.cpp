#include "tripletctl/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "tripletctl/errors.hpp"

namespace tripletctl {

namespace {

SweepCell run_cell(double duration, double delta, std::uint64_t seed, int restarts, const SweepOptions& options,
                   const std::vector<std::vector<double>>& warm = {}) {
  SweepCell cell;
  cell.duration = duration;
  cell.delta = delta;
  cell.seed = seed;
  cell.restarts = restarts;
  try {
    ControlProblem problem;
    problem.duration = duration;
    problem.delta_mode = FixedDelta{delta};
    problem.segments = options.segments;
    OptimizerSettings settings = options.settings;
    settings.seed = seed;
    settings.restarts = restarts;
    OptimizationReport report = optimize_piecewise(problem, settings, warm);
    cell.fidelity = report.fidelity;
    cell.omegas = std::move(report.controls.omegas);
    cell.ok = true;
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  return cell;
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

void require_grid(const std::vector<double>& values, const char* what) {
  if (values.empty()) throw ValidationError(std::string(what) + " grid must be non-empty");
}

}  // namespace

std::vector<SweepCell> sweep_detuning(const std::vector<double>& durations, const std::vector<double>& deltas,
                                      const SweepOptions& options) {
  require_grid(durations, "duration");
  require_grid(deltas, "detuning");
  const std::size_t count = durations.size() * deltas.size();
  std::vector<SweepCell> cells(count);
  parallel_for(count, options.threads, [&](std::size_t i) {
    cells[i] = run_cell(durations[i / deltas.size()], deltas[i % deltas.size()], options.settings.seed + i,
                        options.settings.restarts, options);
  });
  return cells;
}

std::vector<SweepCell> sweep_duration(double delta, const std::vector<double>& durations,
                                      const SweepOptions& options) {
  require_grid(durations, "duration");
  for (std::size_t i = 0; i < durations.size(); ++i) {
    if (!(durations[i] > 0.0)) throw ValidationError("sweep durations must be positive");
  }
  std::vector<SweepCell> cells(durations.size());
  parallel_for(cells.size(), options.threads, [&](std::size_t i) {
    cells[i] = run_cell(durations[i], delta, options.settings.seed + i, options.settings.restarts, options);
  });

  for (std::size_t i = 1; i < cells.size(); ++i) {
    const SweepCell& prev = cells[i - 1];
    if (!prev.ok || durations[i] <= durations[i - 1]) continue;
    if (cells[i].ok && cells[i].fidelity >= prev.fidelity - kMonotoneSlack) continue;
    std::vector<std::vector<double>> warm{
        resample_omegas(prev.omegas, prev.duration, durations[i], options.segments)};
    SweepCell retry =
        run_cell(durations[i], delta, options.settings.seed + i, 2 * options.settings.restarts, options, warm);
    if (retry.ok && (!cells[i].ok || retry.fidelity > cells[i].fidelity)) cells[i] = std::move(retry);
  }
  return cells;
}

int first_monotonicity_violation(const std::vector<SweepCell>& cells, double slack) {
  for (std::size_t i = 1; i < cells.size(); ++i) {
    if (!cells[i].ok || !cells[i - 1].ok) continue;
    if (cells[i].duration > cells[i - 1].duration && cells[i].fidelity < cells[i - 1].fidelity - slack) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

}  // namespace tripletctl
