#pragma once

#include <optional>
#include <vector>

#include "catamp/fock_state.hpp"
#include "catamp/gaussian.hpp"

namespace catamp {

/// Where the channel loss sits relative to the N-splitter.
enum class ChannelSplit {
  mid_span,        ///< sqrt(eta) on the traveling arm and sqrt(eta) on Bob's arm
  before_splitter  ///< all of eta on the traveling arm
};

struct DistillConfig {
  int N = 2;
  double chi = 0.25;
  double eta_channel = 0.05;
  double g = 1.0;
  /// Real cat amplitude; optimized per gain when empty.
  std::optional<double> beta;
  double eta_det = 0.7;
  double eta_res = 0.7;
  ChannelSplit split = ChannelSplit::mid_span;
  /// Fixed n_max for Bob's modes; chosen from |beta| otherwise.
  std::optional<int> cutoff;
  double leak_tol = kDefaultLeakTol;

  void validate() const;
};

struct DistillResult {
  bool heralded = false;  ///< false when the herald probability vanishes
  double eof = 0.0;
  double logneg = 0.0;
  double success_prob = 0.0;      ///< pattern m0 = 1
  double success_prob_all = 0.0;  ///< summed over the N accepted patterns
  CovarianceMatrix cm;
  double beta_used = 0.0;
  double norm_deficit = 0.0;
};

/// Amplitudes <pattern m0| U_SN |n, N-1-n, 0, ..., 0> for n = 0..N-1. Only
/// these inputs can produce the herald.
std::vector<cplx> herald_functional(int N, int m0);

/// Unnormalized heralded state of (Alice's kept mode, Bob's kept mode) for
/// pattern m0; its trace is the pattern probability.
DensityOperator distill_state(const DistillConfig& cfg, double beta, int m0 = 1);

/// Pipeline at cfg.beta, or at the optimized beta when cfg.beta is empty.
DistillResult run_distillation(const DistillConfig& cfg);

/// Search interval for beta: [0.1, 2 alpha_eff sqrt(1/eta + g^2)] with
/// alpha_eff^2 the mean photon number of the traveling arm.
std::pair<double, double> beta_search_interval(const DistillConfig& cfg);

/// Maximizes the EoF over beta: 16-point grid then Brent refinement.
DistillResult optimize_beta(const DistillConfig& cfg);

/// EoF of the lossy TMSV without any splitter (the N = 0 line).
double passthrough_eof(double chi, double eta);

}  // namespace catamp
