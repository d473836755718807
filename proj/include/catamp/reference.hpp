#pragma once

// Serial reference implementations of the kernels in kernels.hpp. They use
// different algorithms (closed-form binomial expansion, explicit multi-index
// bookkeeping) and exist for cross-checking and benchmarking only.

#include <span>
#include <vector>

#include "catamp/fock_state.hpp"
#include "catamp/kernels.hpp"

namespace catamp::reference {

void two_mode_unitary(const ModeShape& shape, std::span<const cplx> in,
                      std::span<cplx> out, int mode_i, int mode_j,
                      const kernels::Mat2& u);

void phase_shift(const ModeShape& shape, std::span<cplx> data, int mode, double phi);

void pure_loss(const ModeShape& shape, std::span<const cplx> rho,
               std::span<cplx> out, int mode, double eta);

void partial_trace(const ModeShape& shape, std::span<const cplx> rho,
                   std::span<const int> keep, std::span<cplx> out);

/// Applies the N-mode transformation u (row-major, y = u x on coherent
/// amplitudes) to `modes` of a pure state by expanding each input basis state
/// as a polynomial in creation operators. Exponential in photon number; meant
/// for small instances.
FockState apply_interferometer_direct(const FockState& psi,
                                      const std::vector<cplx>& u,
                                      std::span<const int> modes);

}  // namespace catamp::reference
