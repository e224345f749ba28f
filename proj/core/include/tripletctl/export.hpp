#pragma once

// CSV and JSON formats. Every CSV starts with a "# config: {...}" line holding
// the resolved configuration, followed by the header row. Numbers are printed
// with 15 significant digits.

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tripletctl/optimal_control.hpp"
#include "tripletctl/propagator.hpp"
#include "tripletctl/shortcut.hpp"
#include "tripletctl/sweeps.hpp"
#include "tripletctl/trig_series.hpp"

namespace tripletctl {

std::string format_number(double value);

// t, re_c1, im_c1, re_c2, im_c2, re_c3, im_c3, pop1, pop2, pop3, delta, omega
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const nlohmann::json& config);

// t, delta, omega at `samples` + 1 uniform instants.
void write_waveform_csv(std::ostream& out, const ControlWaveform& waveform, std::size_t samples,
                        const nlohmann::json& config);

// T, fidelity_symmetric, fidelity_nonsymmetric
void write_fidelity_curve_csv(std::ostream& out, const std::vector<FidelityCurvePoint>& curve,
                              const nlohmann::json& config);

// T, delta, fidelity. Failed cells print fidelity as nan and add a comment line.
void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells, const nlohmann::json& config);

// Reads t, delta, omega rows (comment lines and a header row are skipped).
ControlWaveform read_waveform_csv(std::istream& in);

nlohmann::json problem_to_json(const ControlProblem& problem);

// {problem, seed, restarts, fidelity, iterations, exit_reason, gradient_norm,
//  best_start, start_fidelities, waveform: {kind, T, segments | coefficients}}
nlohmann::json report_to_json(const OptimizationReport& report);

// {"p": p, "coefficients": [[a0, b0], [a1, b1], ...]} in table order.
nlohmann::json series_to_json(const TrigSeries& series);

// Accepts the form above, {"a": [...], "b": [...]} or a bare array of pairs.
TrigSeries series_from_json(const nlohmann::json& doc);

}  // namespace tripletctl
