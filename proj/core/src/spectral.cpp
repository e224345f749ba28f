#include "tripletctl/spectral.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace tripletctl {

namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

SegmentExponential::SegmentExponential(const Matrix3& h, double dt) : dt_(dt) {
  Eigen::SelfAdjointEigenSolver<Matrix3> solver(h);
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();

  Eigen::Vector3cd phases;
  for (int i = 0; i < 3; ++i) phases[i] = std::polar(1.0, -eigenvalues_[i] * dt);
  unitary_ = eigenvectors_.cast<Complex>() * phases.asDiagonal() *
             eigenvectors_.transpose().cast<Complex>();

  // (e^{-i l_i dt} - e^{-i l_j dt}) / (l_i - l_j), written so that the
  // degenerate limit -i dt e^{-i l dt} needs no special case.
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double mean = 0.5 * (eigenvalues_[i] + eigenvalues_[j]);
      const double half_gap = 0.5 * (eigenvalues_[i] - eigenvalues_[j]);
      divided_(i, j) = Complex(0.0, -dt) * std::polar(1.0, -mean * dt) * sinc(half_gap * dt);
    }
  }
}

StateVector SegmentExponential::derivative_apply(const Matrix3& dh, const StateVector& c) const {
  const Matrix3 dh_eig = eigenvectors_.transpose() * dh * eigenvectors_;
  const StateVector c_eig = eigenvectors_.transpose().cast<Complex>() * c;
  StateVector tmp;
  for (int i = 0; i < 3; ++i) {
    Complex acc = 0.0;
    for (int j = 0; j < 3; ++j) acc += divided_(i, j) * dh_eig(i, j) * c_eig[j];
    tmp[i] = acc;
  }
  return eigenvectors_.cast<Complex>() * tmp;
}

}  // namespace tripletctl
