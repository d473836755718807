#pragma once

// Dense tensor kernels behind the Fock-space operations. Every kernel treats
// its buffer as a row-major tensor described by a ModeShape; a density matrix
// on M modes is the same buffer viewed as a 2M-mode tensor (ket modes first,
// then bra modes). The loops over untouched modes run under OpenMP; the
// serial versions in reference.hpp compute the same quantities by the direct
// closed forms and are used by the tests and the benchmark.

#include <array>
#include <span>
#include <vector>

#include "catamp/fock_state.hpp"

namespace catamp::kernels {

/// Row-major 2x2 matrix acting on coherent amplitudes of two modes:
/// (y_i, y_j) = U (x_i, x_j).
using Mat2 = std::array<cplx, 4>;

Mat2 conj(const Mat2& u);
Mat2 adjoint(const Mat2& u);

/// Fock representation of a two-mode transformation restricted to a fixed
/// total photon number n. Entry (p, q) is the amplitude of |p, n-p> produced
/// from |q, n-q>. Built by the ladder recursion
///   |q, n-q> = (U_00 a_i^+ + U_10 a_j^+) |q-1, n-q> / sqrt(q).
class SectorTable {
 public:
  explicit SectorTable(const Mat2& u);
  /// Advances to the next photon-number sector.
  void advance();
  int n() const noexcept { return n_; }
  const cplx& operator()(int p, int q) const { return cur_[p * (n_ + 1) + q]; }

 private:
  Mat2 u_;
  int n_ = 0;
  std::vector<cplx> cur_;
  std::vector<cplx> next_;
};

/// Flat offsets of every index combination of `modes` within `shape`.
std::vector<std::size_t> offsets_over(const ModeShape& shape,
                                      std::span<const int> modes);
/// All mode indices of `shape` except the ones listed.
std::vector<int> complement(const ModeShape& shape, std::span<const int> modes);

/// out = (two-mode unitary on modes i, j) in. Components pushed above a
/// mode's cutoff are dropped.
void two_mode_unitary(const ModeShape& shape, std::span<const cplx> in,
                      std::span<cplx> out, int mode_i, int mode_j,
                      const Mat2& u);

/// data *= exp(i phi n_mode)
void phase_shift(const ModeShape& shape, std::span<cplx> data, int mode,
                 double phi);

/// Pure-loss channel of transmissivity eta on `mode` of a density matrix over
/// `shape`, applied through its Kraus operators
///   K_k = sqrt((1-eta)^k / k!) eta^{n/2} a^k.
void pure_loss(const ModeShape& shape, std::span<const cplx> rho,
               std::span<cplx> out, int mode, double eta);

/// Reduced density matrix on `keep` (in the given order) of a density matrix.
void partial_trace(const ModeShape& shape, std::span<const cplx> rho,
                   std::span<const int> keep, std::span<cplx> out);

/// Reduced density matrix on `keep` of the pure state psi.
void partial_trace_pure(const ModeShape& shape, std::span<const cplx> psi,
                        std::span<const int> keep, std::span<cplx> out);

}  // namespace catamp::kernels
