#pragma once

#include <Eigen/Dense>
#include <array>

#include "catamp/fock_state.hpp"

namespace catamp {

/// Two-mode quadrature moments in the ordering (x1, p1, x2, p2) with
/// x = a + a^+, p = -i(a - a^+); the vacuum has sigma = I.
struct CovarianceMatrix {
  Eigen::Matrix4d sigma = Eigen::Matrix4d::Identity();
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
};

/// Moments of the reduced state on `modes`. The input is normalized by its
/// trace first. Throws NumericalError when rho is not positive semidefinite to
/// -1e-9 (relative to its trace).
CovarianceMatrix covariance_matrix(const DensityOperator& rho, std::array<int, 2> modes);

}  // namespace catamp
