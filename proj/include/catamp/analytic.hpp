#pragma once

// Closed-form predictions for the cat teleamplifier. Indices a, b and m0 are
// 1-based, matching omega_N^a with a = 1..N; coefficient vectors are stored
// 0-based, c[a-1] multiplying |omega^a alpha>.

#include <vector>

#include "catamp/fock_state.hpp"

namespace catamp {

/// {N, alpha, g, eta}; tau and beta follow from the gain and loss constraints.
struct ProtocolParams {
  int N = 2;
  cplx alpha = 0.5;
  double g = 1.0;
  double eta = 1.0;

  /// Throws std::domain_error on N < 2, g < 0 or eta outside (0, 1].
  void validate() const;
  /// eta g^2 / (1 + eta g^2)
  double tau() const;
  /// alpha sqrt(1/eta + g^2)
  cplx beta() const;
  /// Environment amplitude alpha sqrt(1 - eta) / sqrt(eta).
  cplx eps() const;
};

struct AmplifierPrediction {
  double success_prob = 0.0;         ///< single herald pattern
  std::vector<cplx> output_coeffs;   ///< unit-norm weights on |omega^b g alpha>
  cplx eps = 0.0;
  double fidelity = 0.0;             ///< against |g gamma>
};

/// <x|y> for coherent states
cplx coherent_overlap(cplx x, cplx y);

/// sum_{j,k} omega^{k-j} exp((omega^{k-j} - 1)|beta|^2): squared norm of the
/// unnormalized cat sum_b omega^b |omega^b beta>.
double cat_norm(int N, cplx beta);

/// <herald m0| tensor_m |(omega^a - omega^{b+m-1}) alpha / sqrt(N)>
cplx herald_amplitude(int N, cplx alpha, int a, int b, int m0);

/// Single-pattern success probability for the unnormalized input
/// sum_a c_a |omega^a alpha>. For eta < 1 the environment overlaps enter
/// through the factor exp((omega^{k-j} - 1)(|g alpha|^2 + |eps|^2)).
double success_prob_general(const ProtocolParams& p, const std::vector<cplx>& c);
/// <psi_in|psi_in> for the unnormalized input
double input_norm(int N, cplx alpha, const std::vector<cplx>& c);
/// success_prob_general divided by input_norm
double success_prob_general_normalized(const ProtocolParams& p, const std::vector<cplx>& c);

/// Coherent input (c_a = delta_{a,a'}); independent of a'.
double success_prob_coherent(const ProtocolParams& p);
/// Large-gain (or vanishing eta) limit exp(-2|alpha|^2)|alpha|^{2(N-1)} / N^{N-2}.
double p_lim_coherent(int N, double alpha);
double alpha_max(int N);
double p_max_lim(int N);

/// d_b = prod_{m=1}^{N-1} (gamma - omega^{b+m} alpha)
cplx d_coefficient(int N, cplx alpha, cplx gamma, int b);
/// Same quantity through the geometric-sum quotient, with the on-grid value
/// N omega^{b(N-1)} alpha^{N-1} substituted within 1e-9 |alpha| of the pole.
cplx d_coefficient_quotient(int N, cplx alpha, cplx gamma, int b);

/// Output, probability and fidelity for an arbitrary coherent input |gamma>.
/// eta < 1 is handled by tracing the correlated environment mode.
AmplifierPrediction arbitrary_coherent_prediction(const ProtocolParams& p, cplx gamma);

/// Normalized cat coefficients on |kN-1>, k = 1..k_max.
std::vector<cplx> cat_fock_coeffs(int N, cplx beta, int k_max);

cplx relay_env_amplitude(const ProtocolParams& p);

// Roots-of-unity identities used by the amplitude derivation.
cplx prod_one_minus_omega(int N);            ///< prod_{m=1}^{N-1} (1 - omega^m)
double sum_abs_one_minus_omega_sq(int N);    ///< sum_{m=1}^{N} |1 - omega^{m-1}|^2
cplx root_sum(int N, int n);                 ///< sum_{b=1}^{N} omega^{b(n+1)}

}  // namespace catamp
