#include "tripletctl/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tripletctl/errors.hpp"

namespace tripletctl {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

bool all_finite(const StateVector& v) {
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  }
  return true;
}

}  // namespace

void PhysicalUnits::validate() const {
  if (!std::isfinite(xi) || xi <= 0.0) {
    throw ValidationError("coupling xi must be positive and finite, got " + std::to_string(xi));
  }
}

TripletAmplitudes::TripletAmplitudes() : amps_(1.0, 0.0, 0.0) {}

TripletAmplitudes::TripletAmplitudes(Complex c1, Complex c2, Complex c3)
    : TripletAmplitudes(StateVector(c1, c2, c3)) {}

TripletAmplitudes::TripletAmplitudes(const StateVector& v) : amps_(v) {
  if (!all_finite(v)) throw ValidationError("triplet amplitudes must be finite");
  const double n2 = v.squaredNorm();
  if (std::abs(n2 - 1.0) > kNormTolerance) {
    throw ValidationError("triplet amplitudes not normalized: |c|^2 = " + std::to_string(n2));
  }
}

std::array<double, 3> TripletAmplitudes::populations() const {
  return {std::norm(amps_[0]), std::norm(amps_[1]), std::norm(amps_[2])};
}

ControlSample::ControlSample(double t, double delta, double omega)
    : t_(t), delta_(delta), omega_(omega) {
  if (!std::isfinite(t) || !std::isfinite(delta) || !std::isfinite(omega)) {
    throw ValidationError("control sample must be finite");
  }
}

Matrix3 hamiltonian_c(double delta, double omega, double xi) {
  const double off = omega * kInvSqrt2;
  Matrix3 h;
  h << delta, off, 0.0,
       off, 0.0, off,
       0.0, off, 4.0 * xi - delta;
  return h;
}

Matrix3 hamiltonian_c(const ControlSample& sample, const PhysicalUnits& units) {
  units.validate();
  return hamiltonian_c(sample.delta(), sample.omega(), units.xi);
}

Matrix3 hamiltonian_c_omega_derivative() {
  Matrix3 d;
  d << 0.0, kInvSqrt2, 0.0,
       kInvSqrt2, 0.0, kInvSqrt2,
       0.0, kInvSqrt2, 0.0;
  return d;
}

Matrix3 hamiltonian_c_delta_derivative() {
  return Eigen::Vector3d(1.0, 0.0, -1.0).asDiagonal();
}

Matrix2 hamiltonian_two_level(const ControlSample& sample) {
  const double off = std::numbers::sqrt2 * sample.omega();
  Matrix2 h;
  h << sample.delta(), off,
       off, -sample.delta();
  return 0.5 * h;
}

TripletAmplitudes frame_transform(const TripletAmplitudes& amps, double t,
                                  const RotatingFrame& frame, const PhysicalUnits& units,
                                  FrameDirection direction) {
  units.validate();
  if (!std::isfinite(t) || !std::isfinite(frame.omega_rf)) {
    throw ValidationError("frame transform arguments must be finite");
  }
  const double w = frame.omega_rf;
  const double xi = units.xi;
  // Phases for lab -> rotating; the inverse negates them.
  Eigen::Vector3d phase(-(w + xi) * t, -xi * t, (w - xi) * t);
  if (direction == FrameDirection::kRotatingToLab) phase = -phase;

  StateVector out;
  for (int i = 0; i < 3; ++i) out[i] = amps[i] * std::polar(1.0, phase[i]);
  return TripletAmplitudes(out);
}

ControlSample polar_controls(double e0, double theta, double t) {
  if (!(e0 >= 0.0)) throw ValidationError("polar_controls requires e0 >= 0");
  return {t, e0 * std::cos(theta), e0 * std::sin(theta) * kInvSqrt2};
}

}  // namespace tripletctl
