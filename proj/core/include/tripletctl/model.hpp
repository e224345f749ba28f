#pragma once

// Rotating-frame model of two Ising-coupled spins restricted to the triplet
// manifold. Times are in units of 1/xi, fields in units of xi (hbar = 1).

#include <array>
#include <complex>

#include <Eigen/Core>

#include "tripletctl/errors.hpp"

namespace tripletctl {

using Complex = std::complex<double>;
using StateVector = Eigen::Vector3cd;
using Matrix3 = Eigen::Matrix3d;
using Matrix2 = Eigen::Matrix2d;

inline constexpr double kNormTolerance = 1e-10;

struct PhysicalUnits {
  double xi = 1.0;

  // Throws ValidationError unless xi is finite and positive.
  void validate() const;
};

// Amplitudes (c1, c2, c3) on |dd>, |psi+>, |uu>. Always normalized.
class TripletAmplitudes {
 public:
  TripletAmplitudes();  // |dd>
  TripletAmplitudes(Complex c1, Complex c2, Complex c3);
  explicit TripletAmplitudes(const StateVector& v);

  static TripletAmplitudes ground() { return {}; }
  static TripletAmplitudes bell() { return {0.0, 1.0, 0.0}; }

  const StateVector& vector() const { return amps_; }
  Complex operator[](int i) const { return amps_[i]; }
  std::array<double, 3> populations() const;
  double norm_squared() const { return amps_.squaredNorm(); }

 private:
  StateVector amps_;
};

// One evaluation of the control pair at time t.
class ControlSample {
 public:
  ControlSample() = default;
  ControlSample(double t, double delta, double omega);

  double time() const { return t_; }
  double delta() const { return delta_; }
  double omega() const { return omega_; }

 private:
  double t_ = 0.0;
  double delta_ = 0.0;
  double omega_ = 0.0;
};

struct RotatingFrame {
  double omega_rf;
};

enum class FrameDirection { kLabToRotating, kRotatingToLab };

// Tridiagonal H_c: diag(delta, 0, 4 xi - delta), off-diagonals omega/sqrt(2).
// Real symmetric, hence Hermitian.
Matrix3 hamiltonian_c(const ControlSample& sample, const PhysicalUnits& units = {});
Matrix3 hamiltonian_c(double delta, double omega, double xi = 1.0);

// dH_c/d(omega) and dH_c/d(delta); constant matrices.
Matrix3 hamiltonian_c_omega_derivative();
Matrix3 hamiltonian_c_delta_derivative();

// 1/2 [[delta, sqrt2 omega], [sqrt2 omega, -delta]] on {|dd>, |psi+>}.
Matrix2 hamiltonian_two_level(const ControlSample& sample);

// Diagonal phase map between lab amplitudes a and rotating-frame amplitudes c:
// c1 = a1 e^{-i(w+xi)t}, c2 = a2 e^{-i xi t}, c3 = a3 e^{i(w-xi)t}.
TripletAmplitudes frame_transform(const TripletAmplitudes& amps, double t,
                                  const RotatingFrame& frame, const PhysicalUnits& units,
                                  FrameDirection direction);

// delta = e0 cos(theta), omega = e0 sin(theta) / sqrt2.
ControlSample polar_controls(double e0, double theta, double t = 0.0);

}  // namespace tripletctl
