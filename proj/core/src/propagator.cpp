#include "tripletctl/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "tripletctl/errors.hpp"
#include "tripletctl/spectral.hpp"

namespace tripletctl {

namespace {

constexpr double kMaxPhasePerStep = 0.01;

void check_drift(const StateVector& c, double reference_norm2, double t) {
  const double drift = std::abs(c.squaredNorm() - reference_norm2);
  if (!(drift <= kDriftLimit * std::max(1.0, reference_norm2))) {
    std::ostringstream msg;
    msg << "norm drift " << drift << " at t = " << t << " exceeds " << kDriftLimit
        << "; increase the step count";
    throw NonUnitaryDrift(msg.str());
  }
}

StateVector rk4_step(const Matrix3& h0, const Matrix3& hm, const Matrix3& h1,
                     const StateVector& c, double dt) {
  const Complex minus_i(0.0, -1.0);
  const StateVector k1 = minus_i * (h0.cast<Complex>() * c);
  const StateVector k2 = minus_i * (hm.cast<Complex>() * (c + 0.5 * dt * k1));
  const StateVector k3 = minus_i * (hm.cast<Complex>() * (c + 0.5 * dt * k2));
  const StateVector k4 = minus_i * (h1.cast<Complex>() * (c + dt * k3));
  return c + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Walks the grid and hands every (t, state) to `sink`, including t = 0.
template <class Sink>
StateVector integrate(const ControlWaveform& waveform, const StateVector& c0,
                      const PropagateOptions& options, Sink&& sink) {
  if (options.steps < kMinimumSteps) {
    throw ValidationError("propagation needs at least " + std::to_string(kMinimumSteps) + " steps");
  }
  const bool piecewise = waveform.kind() == WaveformKind::kPiecewiseConstant;
  if (options.method == PropagationMethod::kPiecewiseExponential && !piecewise) {
    throw MethodMismatch(std::string("piecewise-exponential propagation needs a piecewise-constant waveform, got ") +
                         to_string(waveform.kind()));
  }

  const double sign = options.negate_hamiltonian ? -1.0 : 1.0;
  const double T = waveform.duration();
  const double norm0 = c0.squaredNorm();
  std::size_t steps = resolved_steps(waveform, options);
  StateVector c = c0;
  sink(0.0, c);

  if (options.method == PropagationMethod::kPiecewiseExponential) {
    const auto deltas = waveform.segment_deltas();
    const auto omegas = waveform.segment_omegas();
    const std::size_t n = omegas.size();
    const std::size_t sub = std::max<std::size_t>(1, (steps + n - 1) / n);
    const double width = waveform.segment_width();
    const double dt = width / static_cast<double>(sub);
    for (std::size_t k = 0; k < n; ++k) {
      const SegmentExponential step(sign * hamiltonian_c(deltas[k], omegas[k]), dt);
      for (std::size_t j = 1; j <= sub; ++j) {
        c = step.apply(c);
        const double t = (k + 1 == n && j == sub)
                             ? T
                             : width * static_cast<double>(k) + dt * static_cast<double>(j);
        check_drift(c, norm0, t);
        sink(t, c);
      }
    }
    return c;
  }

  if (piecewise) {
    // Align steps with segment boundaries and freeze H over each step.
    const std::size_t n = waveform.segment_count();
    steps = ((steps + n - 1) / n) * n;
  }
  const double dt = T / static_cast<double>(steps);
  auto h_at = [&](double t) {
    const ControlSample s = waveform.at(t);
    return Matrix3(sign * hamiltonian_c(s.delta(), s.omega()));
  };
  for (std::size_t k = 0; k < steps; ++k) {
    const double t0 = dt * static_cast<double>(k);
    const double t1 = (k + 1 == steps) ? T : dt * static_cast<double>(k + 1);
    if (piecewise) {
      const Matrix3 h = h_at(0.5 * (t0 + t1));
      c = rk4_step(h, h, h, c, t1 - t0);
    } else {
      c = rk4_step(h_at(t0), h_at(0.5 * (t0 + t1)), h_at(t1), c, t1 - t0);
    }
    check_drift(c, norm0, t1);
    sink(t1, c);
  }
  return c;
}

}  // namespace

const char* to_string(PropagationMethod method) {
  switch (method) {
    case PropagationMethod::kRk4: return "rk4";
    case PropagationMethod::kPiecewiseExponential: return "piecewise-exponential";
  }
  return "unknown";
}

std::size_t resolved_steps(const ControlWaveform& waveform, const PropagateOptions& options) {
  std::size_t steps = options.steps;
  if (options.resolve_pulse_area) {
    const double dmax = waveform.max_abs_delta();
    const double spectral_bound = std::max(dmax, 4.0 + dmax) + std::numbers::sqrt2 * waveform.max_abs_omega();
    const double needed = std::ceil(waveform.duration() * spectral_bound / kMaxPhasePerStep);
    steps = std::max(steps, static_cast<std::size_t>(needed));
  }
  return steps;
}

Trajectory::Trajectory(std::vector<double> times, std::vector<StateVector> states,
                       std::vector<ControlSample> controls)
    : times_(std::move(times)), states_(std::move(states)), controls_(std::move(controls)) {
  if (times_.empty() || times_.size() != states_.size() || times_.size() != controls_.size()) {
    throw ValidationError("trajectory columns must be non-empty and of equal length");
  }
}

Trajectory propagate(const ControlWaveform& waveform, const TripletAmplitudes& c0,
                     const PropagateOptions& options) {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<ControlSample> controls;
  const std::size_t expected = resolved_steps(waveform, options) + 1;
  times.reserve(expected);
  states.reserve(expected);
  controls.reserve(expected);
  integrate(waveform, c0.vector(), options, [&](double t, const StateVector& c) {
    times.push_back(t);
    states.push_back(c);
    controls.push_back(waveform.at(t));
  });
  return {std::move(times), std::move(states), std::move(controls)};
}

StateVector evolve(const ControlWaveform& waveform, const StateVector& c0,
                   const PropagateOptions& options) {
  return integrate(waveform, c0, options, [](double, const StateVector&) {});
}

double fidelity(const StateVector& final_state) {
  return std::clamp(std::norm(final_state[1]), 0.0, 1.0);
}

double fidelity(const Trajectory& traj) { return fidelity(traj.final_state()); }

PopulationTrace population_trace(const Trajectory& traj) {
  PopulationTrace trace;
  trace.times = traj.times();
  for (auto& p : trace.populations) p.reserve(traj.size());
  for (const auto& c : traj.states()) {
    for (int i = 0; i < 3; ++i) trace.populations[i].push_back(std::norm(c[i]));
  }
  return trace;
}

Eigen::Vector2cd evolve_two_level(const ControlWaveform& waveform, const Eigen::Vector2cd& psi0,
                                  std::size_t steps) {
  if (steps < kMinimumSteps) {
    throw ValidationError("propagation needs at least " + std::to_string(kMinimumSteps) + " steps");
  }
  const double T = waveform.duration();
  const double dt = T / static_cast<double>(steps);
  const Complex minus_i(0.0, -1.0);
  auto rhs = [&](double t, const Eigen::Vector2cd& psi) -> Eigen::Vector2cd {
    return minus_i * (hamiltonian_two_level(waveform.at(std::min(t, T))).cast<Complex>() * psi);
  };
  Eigen::Vector2cd psi = psi0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = dt * static_cast<double>(k);
    const Eigen::Vector2cd k1 = rhs(t, psi);
    const Eigen::Vector2cd k2 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k1);
    const Eigen::Vector2cd k3 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k2);
    const Eigen::Vector2cd k4 = rhs(t + dt, psi + dt * k3);
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return psi;
}

}  // namespace tripletctl
