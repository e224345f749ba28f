#include <random>

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "tripletctl/model.hpp"
#include "tripletctl/spectral.hpp"

namespace tripletctl {
namespace {

TEST(SegmentExponential, MatchesTaylorOracle) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    const Matrix3 h = hamiltonian_c(u(rng), u(rng));
    const double dt = 0.5 * (u(rng) + 2.0);
    const SegmentExponential seg(h, dt);
    const Eigen::MatrixXcd ref = oracle::expm_minus_i(h, dt);
    EXPECT_LE((seg.unitary() - ref).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LE((seg.unitary() * seg.unitary().adjoint() - Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff(),
              1e-14);
  }
}

TEST(SegmentExponential, ApplyAdjointInverts) {
  const SegmentExponential seg(hamiltonian_c(0.3, 0.9), 0.7);
  const StateVector c(Complex(0.6, 0.0), Complex(0.0, 0.8), 0.0);
  EXPECT_LE((seg.apply_adjoint(seg.apply(c)) - c).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SegmentExponential, DerivativeMatchesFiniteDifference) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const StateVector c = StateVector(Complex(0.3, 0.1), Complex(-0.5, 0.2), Complex(0.1, 0.7)).normalized();
  for (int i = 0; i < 20; ++i) {
    const double d = u(rng), w = u(rng), dt = 0.8;
    const SegmentExponential seg(hamiltonian_c(d, w), dt);
    const double h = 1e-6;
    const StateVector fd_w = (oracle::expm_minus_i(hamiltonian_c(d, w + h), dt) * c -
                              oracle::expm_minus_i(hamiltonian_c(d, w - h), dt) * c) /
                             (2 * h);
    const StateVector fd_d = (oracle::expm_minus_i(hamiltonian_c(d + h, w), dt) * c -
                              oracle::expm_minus_i(hamiltonian_c(d - h, w), dt) * c) /
                             (2 * h);
    EXPECT_LE((seg.derivative_apply(hamiltonian_c_omega_derivative(), c) - fd_w).norm(), 1e-8);
    EXPECT_LE((seg.derivative_apply(hamiltonian_c_delta_derivative(), c) - fd_d).norm(), 1e-8);
  }
}

TEST(SegmentExponential, DegenerateSpectrum) {
  const Matrix3 h = hamiltonian_c(2.0, 0.0);
  const SegmentExponential seg(h, 1.1);
  const StateVector c(1.0, 0.0, 0.0);
  const double eps = 1e-6;
  const StateVector fd = (oracle::expm_minus_i(hamiltonian_c(2.0 + eps, 0.0), 1.1) * c -
                          oracle::expm_minus_i(hamiltonian_c(2.0 - eps, 0.0), 1.1) * c) /
                         (2 * eps);
  EXPECT_LE((seg.derivative_apply(hamiltonian_c_delta_derivative(), c) - fd).norm(), 1e-8);
}

}  // namespace
}  // namespace tripletctl
