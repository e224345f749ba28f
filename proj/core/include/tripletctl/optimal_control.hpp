#pragma once

// Maximization of |c2(T)|^2 over bounded controls. Controls are discretized
// into equal segments (1000 by default); each segment is propagated exactly
// and gradients come from one backward adjoint sweep.

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "tripletctl/box_lbfgs.hpp"
#include "tripletctl/trig_series.hpp"
#include "tripletctl/waveform.hpp"

namespace tripletctl {

inline constexpr std::size_t kDefaultSegments = 1000;
inline constexpr int kDefaultRestarts = 8;
inline constexpr std::uint64_t kDefaultSeed = 42;

struct FixedDelta {
  double value = 0.0;
};
struct SeriesDelta {};

enum class OmegaForm { kPiecewise, kSeries };

const char* to_string(OmegaForm form);

struct ControlProblem {
  double duration = 2.5;
  double omega_bound = 1.0;
  double delta_bound = 1.0;
  std::variant<FixedDelta, SeriesDelta> delta_mode = FixedDelta{};
  OmegaForm omega_form = OmegaForm::kPiecewise;
  int harmonics = 0;  // series form only
  std::size_t segments = kDefaultSegments;

  void validate() const;

  bool delta_is_series() const { return std::holds_alternative<SeriesDelta>(delta_mode); }
  double fixed_delta() const;

  // Parameter layout: the omega block (segment values or 2p+1 coefficients),
  // then the delta block (2p+1 coefficients, or nothing for a fixed delta).
  std::size_t omega_parameter_count() const;
  std::size_t delta_parameter_count() const;
  std::size_t parameter_count() const { return omega_parameter_count() + delta_parameter_count(); }

  double segment_width() const { return duration / static_cast<double>(segments); }
};

struct SegmentControls {
  std::vector<double> deltas;
  std::vector<double> omegas;
};

// Segment values for a parameter vector. Series are sampled at segment midpoints.
SegmentControls segment_controls(const ControlProblem& problem, std::span<const double> parameters);

struct SegmentGradient {
  double fidelity = 0.0;
  std::vector<double> d_delta;
  std::vector<double> d_omega;
};

// Fidelity of a piecewise-constant control over [0, T] and its derivatives
// with respect to every segment value.
SegmentGradient segment_gradient(double duration, std::span<const double> deltas,
                                 std::span<const double> omegas);

struct FidelityGradient {
  double fidelity = 0.0;
  std::vector<double> gradient;
};

FidelityGradient adjoint_gradient(const ControlProblem& problem, std::span<const double> parameters);

struct OptimizerSettings {
  int restarts = kDefaultRestarts;
  std::uint64_t seed = kDefaultSeed;
  BoxLbfgsOptions lbfgs{};
  // Quadratic penalty weights for the series bounds, applied in turn.
  std::vector<double> penalty_weights{1e1, 1e3, 1e5};
};

struct OptimizationReport {
  ControlProblem problem;
  int restarts = 0;
  std::uint64_t seed = 0;
  double fidelity = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
  ExitReason exit_reason = ExitReason::kMaxIterations;
  int best_start = 0;
  std::vector<double> start_fidelities;
  SegmentControls controls;          // always the discretized controls
  std::optional<TrigSeries> series;  // series problems only

  ControlWaveform waveform() const;
  // Fraction of omega segments within tol of +-omega_bound.
  double saturation_fraction(double tol = 1e-3) const;
};

// Multi-start projected quasi-Newton ascent over the segment values of omega
// with a fixed delta. Start 0 is omega = +bound, starts 1..restarts are uniform
// random, then any warm starts. Throws NoConvergence if no start exceeds 1e-3.
OptimizationReport optimize_piecewise(const ControlProblem& problem, const OptimizerSettings& settings = {},
                                      const std::vector<std::vector<double>>& warm_starts = {});

// Series coefficients under penalized bounds, followed by a uniform rescale of
// any violating series onto the bound. Throws InfeasibleResult if the result
// still violates a bound by more than 1e-9 on the check grid.
OptimizationReport optimize_trig(const ControlProblem& problem, const OptimizerSettings& settings = {},
                                 const std::optional<TrigSeries>& warm_start = std::nullopt);

// optimize_trig over ascending harmonic counts, each warm-started from the
// previous optimum, so the reported fidelities never decrease.
std::vector<OptimizationReport> harmonic_scan(const ControlProblem& base, const std::vector<int>& harmonics,
                                              const OptimizerSettings& settings = {});

// Largest |omega|, |delta| of a series on the check grid (segment nodes and midpoints).
double series_max_abs(std::span<const double> coefficients, double duration, std::size_t segments);

// Resample a piecewise omega from one duration onto another segment grid,
// padding with omega = 0 beyond the source duration.
std::vector<double> resample_omegas(std::span<const double> omegas, double from_duration, double to_duration,
                                    std::size_t to_segments);

// Linear detuning sweep through the |dd>/|psi+> crossing with a Gaussian Rabi pulse.
struct AdiabaticPassage {
  double sweep_rate;  // A: delta(t) = A (t - T/2)
  double peak_rabi;
  double width;       // Gaussian standard deviation
  double duration;

  // A T = 8, peak 1, width T/6. Chosen for illustration only.
  static AdiabaticPassage defaults(double duration);
};

ControlWaveform adiabatic_baseline(const AdiabaticPassage& params);

}  // namespace tripletctl
