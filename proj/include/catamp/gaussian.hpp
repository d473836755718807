#pragma once

#include "catamp/moments.hpp"

namespace catamp {

/// Simon standard form: A = a I, B = b I, C = diag(c1, c2) with c1 >= |c2|.
struct StandardForm {
  double a = 1.0, b = 1.0, c1 = 0.0, c2 = 0.0;
};

/// Covariance matrix of a TMSV of parameter chi (chi = tanh r) whose second
/// mode passed a pure loss of transmissivity eta. chi must lie in [0, 1).
CovarianceMatrix lossy_tmsv_cm(double chi, double eta);

/// Throws std::domain_error unless sigma + i Omega >= 0 to -1e-9 relative.
void check_physical(const CovarianceMatrix& cm);

/// Standard form from the local symplectic invariants.
StandardForm standard_form(const CovarianceMatrix& cm);

/// Smallest symplectic eigenvalue of the partial transpose.
double ptranspose_symplectic_min(const CovarianceMatrix& cm);

/// Gaussian entanglement of formation in ebits.
double gaussian_eof(const CovarianceMatrix& cm);

/// max(0, -log2 of the smallest partially transposed symplectic eigenvalue)
double log_negativity(const CovarianceMatrix& cm);

/// cosh^2 r log2 cosh^2 r - sinh^2 r log2 sinh^2 r
double tmsv_entropy(double chi);

/// Limit of gaussian_eof(lossy_tmsv_cm(chi, eta)) as chi -> 1.
double deterministic_bound(double eta);

}  // namespace catamp
