#pragma once

#include <vector>

#include "catamp/fock_state.hpp"

namespace catamp {

/// N-th root of unity used throughout: omega_N = exp(-2 pi i / N), raised to k.
cplx omega(int N, long k);

FockState vacuum(FockCutoff cutoff);
FockState make_fock(int n, FockCutoff cutoff);

/// Coherent state |alpha>. Throws TruncationError when the discarded Poisson
/// tail exceeds leak_tol.
FockState make_coherent(cplx alpha, FockCutoff cutoff, double leak_tol = kDefaultLeakTol);

/// Normalized N-component cat state (1/sqrt(norm)) sum_b omega^b |omega^b beta>,
/// built from its Fock expansion on |kN-1>. Well defined at beta = 0, where it
/// is |N-1>.
FockState make_cat(int N, cplx beta, FockCutoff cutoff, double leak_tol = kDefaultLeakTol);

/// sqrt(1-chi^2) sum_n chi^n |n,n>
FockState make_tmsv(double chi, FockCutoff cutoff, double leak_tol = kDefaultLeakTol);
/// Smallest per-mode cutoff holding a TMSV of parameter chi to leak_tol.
FockCutoff tmsv_cutoff(double chi, double leak_tol = kDefaultLeakTol);

/// Unnormalized sum_{a=1..N} c[a-1] |omega^a alpha>.
FockState coherent_superposition(int N, cplx alpha, const std::vector<cplx>& c,
                                 FockCutoff cutoff, double leak_tol = kDefaultLeakTol);

/// Outer product. Cutoffs may differ between factors and between modes.
FockState tensor(const std::vector<FockState>& states);
FockState tensor(const FockState& a, const FockState& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

/// Restricts `mode` to photon numbers <= cutoff.n_max(). The discarded weight
/// is added to the norm (trace) deficit.
FockState truncate_mode(const FockState& psi, int mode, FockCutoff cutoff);
DensityOperator truncate_mode(const DensityOperator& rho, int mode, FockCutoff cutoff);

}  // namespace catamp
