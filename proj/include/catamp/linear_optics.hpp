#pragma once

#include <span>
#include <vector>

#include "catamp/fock_state.hpp"
#include "catamp/kernels.hpp"

namespace catamp {

/// Passive linear transformation on `dim` modes. Acts on coherent amplitudes
/// as y = S x, equivalently a_k^+ -> sum_m S(m, k) a_m^+.
class ScatteringMatrix {
 public:
  /// Throws std::domain_error unless entries form a unitary to `tol`.
  ScatteringMatrix(int dim, std::vector<cplx> entries, double tol = 1e-10);

  int dim() const noexcept { return dim_; }
  const cplx& operator()(int row, int col) const { return e_[row * dim_ + col]; }
  const std::vector<cplx>& entries() const noexcept { return e_; }

  /// max |S^+ S - I|
  double unitarity_error() const;
  std::vector<cplx> apply(std::span<const cplx> x) const;

  static ScatteringMatrix identity(int dim);

 private:
  int dim_;
  std::vector<cplx> e_;
};

/// (S_N)_{jk} = omega_N^{(j-1)(k-1)} / sqrt(N)
ScatteringMatrix dft_matrix(int N);

/// B2(tau) on (mode_i, mode_j): x -> (sqrt(tau) x_i - sqrt(1-tau) x_j,
/// sqrt(1-tau) x_i + sqrt(tau) x_j).
kernels::Mat2 beam_splitter_matrix(double tau);

/// Triangular factorization S = G_1^+ ... G_K^+ D into nearest-neighbour
/// two-mode rotations and a diagonal of phases.
struct MeshDecomposition {
  struct Rotation {
    int mode;           ///< acts on (mode, mode + 1)
    kernels::Mat2 u;    ///< G^+ restricted to the pair
  };
  std::vector<double> phases;       ///< arg D_kk
  std::vector<Rotation> rotations;  ///< in application order
};
MeshDecomposition decompose(const ScatteringMatrix& S);

FockState apply_two_mode(const FockState& psi, int mode_i, int mode_j, const kernels::Mat2& u);
DensityOperator apply_two_mode(const DensityOperator& rho, int mode_i, int mode_j,
                               const kernels::Mat2& u);

FockState apply_beam_splitter(const FockState& psi, int mode_i, int mode_j, double tau);
DensityOperator apply_beam_splitter(const DensityOperator& rho, int mode_i, int mode_j,
                                    double tau);

/// exp(i phi n) on `mode`
FockState apply_phase(const FockState& psi, int mode, double phi);
DensityOperator apply_phase(const DensityOperator& rho, int mode, double phi);

FockState apply_interferometer(const FockState& psi, const ScatteringMatrix& S,
                               std::span<const int> modes);
DensityOperator apply_interferometer(const DensityOperator& rho, const ScatteringMatrix& S,
                                     std::span<const int> modes);

}  // namespace catamp
