#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "tripletctl/model.hpp"
#include "tripletctl/waveform.hpp"

namespace tripletctl {

enum class PropagationMethod { kRk4, kPiecewiseExponential };

const char* to_string(PropagationMethod method);

inline constexpr std::size_t kDefaultSteps = 4000;
inline constexpr std::size_t kMinimumSteps = 100;
inline constexpr double kDriftLimit = 1e-8;

struct PropagateOptions {
  std::size_t steps = kDefaultSteps;
  PropagationMethod method = PropagationMethod::kRk4;
  // Raise the step count so that dt * ||H|| <= 0.01 everywhere. Short,
  // strong pulses need resolution proportional to their area, not to T.
  bool resolve_pulse_area = true;
  // Integrate i dc/dt = -H c instead; with a reversed waveform this undoes a
  // forward propagation.
  bool negate_hamiltonian = false;
};

// Sampled solution of the rotating-frame Schrodinger equation.
class Trajectory {
 public:
  Trajectory(std::vector<double> times, std::vector<StateVector> states,
             std::vector<ControlSample> controls);

  std::size_t size() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<StateVector>& states() const { return states_; }
  const std::vector<ControlSample>& controls() const { return controls_; }
  const StateVector& final_state() const { return states_.back(); }
  double duration() const { return times_.back(); }

 private:
  std::vector<double> times_;
  std::vector<StateVector> states_;
  std::vector<ControlSample> controls_;
};

struct PopulationTrace {
  std::vector<double> times;
  std::array<std::vector<double>, 3> populations;
};

// Step count actually used for `waveform` under `options`.
std::size_t resolved_steps(const ControlWaveform& waveform, const PropagateOptions& options);

// Full trajectory from a normalized initial state. Throws NonUnitaryDrift when
// |c|^2 leaves 1 by more than 1e-8, MethodMismatch when the exponential method
// is requested for a waveform that is not piecewise constant.
Trajectory propagate(const ControlWaveform& waveform, const TripletAmplitudes& c0,
                     const PropagateOptions& options = {});

// Final state only, for any (not necessarily normalized) initial vector. The
// drift guard is relative to |c0|^2.
StateVector evolve(const ControlWaveform& waveform, const StateVector& c0,
                   const PropagateOptions& options = {});

// |c2(T)|^2.
double fidelity(const Trajectory& traj);
double fidelity(const StateVector& final_state);

PopulationTrace population_trace(const Trajectory& traj);

// RK4 on the two-level Hamiltonian 1/2 [[delta, sqrt2 omega], [sqrt2 omega, -delta]].
Eigen::Vector2cd evolve_two_level(const ControlWaveform& waveform, const Eigen::Vector2cd& psi0,
                                  std::size_t steps = kDefaultSteps);

}  // namespace tripletctl
