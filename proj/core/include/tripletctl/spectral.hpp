#pragma once

#include <Eigen/Core>

#include "tripletctl/model.hpp"

namespace tripletctl {

// exp(-i H dt) for a real symmetric 3x3 H, kept in factored form so that the
// derivative with respect to a parameter of H can be formed without another
// decomposition.
class SegmentExponential {
 public:
  SegmentExponential() = default;
  SegmentExponential(const Matrix3& h, double dt);

  const Eigen::Vector3d& eigenvalues() const { return eigenvalues_; }
  const Eigen::Matrix3d& eigenvectors() const { return eigenvectors_; }
  const Eigen::Matrix3cd& unitary() const { return unitary_; }

  StateVector apply(const StateVector& c) const { return unitary_ * c; }
  StateVector apply_adjoint(const StateVector& c) const { return unitary_.adjoint() * c; }

  // (d/dp exp(-i H(p) dt)) c, given dH/dp. Uses the Daleckii-Krein divided
  // differences in the eigenbasis.
  StateVector derivative_apply(const Matrix3& dh, const StateVector& c) const;

 private:
  double dt_ = 0.0;
  Eigen::Vector3d eigenvalues_ = Eigen::Vector3d::Zero();
  Eigen::Matrix3d eigenvectors_ = Eigen::Matrix3d::Identity();
  Eigen::Matrix3cd divided_ = Eigen::Matrix3cd::Zero();
  Eigen::Matrix3cd unitary_ = Eigen::Matrix3cd::Identity();
};

}  // namespace tripletctl
