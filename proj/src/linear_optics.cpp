#include "catamp/linear_optics.hpp"

#include <algorithm>
#include <cmath>

#include "catamp/states.hpp"

namespace catamp {

ScatteringMatrix::ScatteringMatrix(int dim, std::vector<cplx> entries, double tol)
    : dim_(dim), e_(std::move(entries)) {
  if (dim < 1 || e_.size() != static_cast<std::size_t>(dim) * dim)
    throw std::domain_error("ScatteringMatrix: entries do not form a square matrix");
  if (unitarity_error() > tol) throw std::domain_error("ScatteringMatrix: not unitary");
}

double ScatteringMatrix::unitarity_error() const {
  double err = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < dim_; ++k) s += std::conj((*this)(k, i)) * (*this)(k, j);
      err = std::max(err, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  return err;
}

std::vector<cplx> ScatteringMatrix::apply(std::span<const cplx> x) const {
  if (static_cast<int>(x.size()) != dim_) throw std::domain_error("ScatteringMatrix::apply: size");
  std::vector<cplx> y(dim_, 0.0);
  for (int j = 0; j < dim_; ++j)
    for (int k = 0; k < dim_; ++k) y[j] += (*this)(j, k) * x[k];
  return y;
}

ScatteringMatrix ScatteringMatrix::identity(int dim) {
  std::vector<cplx> e(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int k = 0; k < dim; ++k) e[k * dim + k] = 1.0;
  return ScatteringMatrix(dim, std::move(e));
}

ScatteringMatrix dft_matrix(int N) {
  if (N < 1) throw std::domain_error("dft_matrix: N must be >= 1");
  std::vector<cplx> e(static_cast<std::size_t>(N) * N);
  const double s = 1.0 / std::sqrt(double(N));
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) e[j * N + k] = omega(N, static_cast<long>(j) * k) * s;
  return ScatteringMatrix(N, std::move(e), 1e-12);
}

kernels::Mat2 beam_splitter_matrix(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::domain_error("beam splitter: tau outside [0,1]");
  const double t = std::sqrt(tau), r = std::sqrt(1.0 - tau);
  return {t, -r, r, t};
}

MeshDecomposition decompose(const ScatteringMatrix& S) {
  const int n = S.dim();
  std::vector<cplx> v = S.entries();
  MeshDecomposition out;
  for (int c = 0; c + 1 < n; ++c) {
    for (int r = n - 1; r > c; --r) {
      const cplx a = v[(r - 1) * n + c];
      const cplx b = v[r * n + c];
      const double rho = std::hypot(std::abs(a), std::abs(b));
      if (std::abs(b) == 0.0 || rho == 0.0) continue;
      // G = [[a*, b*], [-b, a]] / rho zeroes row r of column c.
      const kernels::Mat2 g{std::conj(a) / rho, std::conj(b) / rho, -b / rho, a / rho};
      for (int k = 0; k < n; ++k) {
        const cplx x = v[(r - 1) * n + k], y = v[r * n + k];
        v[(r - 1) * n + k] = g[0] * x + g[1] * y;
        v[r * n + k] = g[2] * x + g[3] * y;
      }
      out.rotations.push_back({r - 1, kernels::adjoint(g)});
    }
  }
  std::reverse(out.rotations.begin(), out.rotations.end());
  for (int k = 0; k < n; ++k) out.phases.push_back(std::arg(v[k * n + k]));
  return out;
}

namespace {

void check_pair(int modes, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= modes || j >= modes)
    throw std::domain_error("two-mode operation: modes must be distinct and in range");
}

// Density matrix over `shape` viewed as a tensor over ket then bra modes.
ModeShape doubled(const ModeShape& shape) {
  auto dims = shape.dims();
  dims.insert(dims.end(), shape.dims().begin(), shape.dims().end());
  return ModeShape(std::move(dims));
}

}  // namespace

FockState apply_two_mode(const FockState& psi, int mode_i, int mode_j, const kernels::Mat2& u) {
  check_pair(psi.modes(), mode_i, mode_j);
  std::vector<cplx> out(psi.size());
  kernels::two_mode_unitary(psi.shape(), psi.amplitudes(), out, mode_i, mode_j, u);
  FockState res(psi.shape(), std::move(out));
  const double dropped = std::max(0.0, psi.norm_sq() - res.norm_sq());
  return FockState(psi.shape(), std::vector<cplx>(res.amplitudes().begin(), res.amplitudes().end()),
                   psi.norm_deficit() + dropped);
}

DensityOperator apply_two_mode(const DensityOperator& rho, int mode_i, int mode_j,
                               const kernels::Mat2& u) {
  const int M = rho.modes();
  check_pair(M, mode_i, mode_j);
  const auto big = doubled(rho.shape());
  std::vector<cplx> tmp(rho.data().size()), out(rho.data().size());
  kernels::two_mode_unitary(big, rho.data(), tmp, mode_i, mode_j, u);
  kernels::two_mode_unitary(big, tmp, out, M + mode_i, M + mode_j, kernels::conj(u));
  DensityOperator res(rho.shape(), std::move(out));
  const double dropped = std::max(0.0, rho.trace() - res.trace());
  return DensityOperator(rho.shape(), std::vector<cplx>(res.data().begin(), res.data().end()),
                         rho.trace_deficit() + dropped);
}

FockState apply_beam_splitter(const FockState& psi, int mode_i, int mode_j, double tau) {
  return apply_two_mode(psi, mode_i, mode_j, beam_splitter_matrix(tau));
}

DensityOperator apply_beam_splitter(const DensityOperator& rho, int mode_i, int mode_j,
                                    double tau) {
  return apply_two_mode(rho, mode_i, mode_j, beam_splitter_matrix(tau));
}

FockState apply_phase(const FockState& psi, int mode, double phi) {
  std::vector<cplx> out(psi.amplitudes().begin(), psi.amplitudes().end());
  kernels::phase_shift(psi.shape(), out, mode, phi);
  return FockState(psi.shape(), std::move(out), psi.norm_deficit());
}

DensityOperator apply_phase(const DensityOperator& rho, int mode, double phi) {
  const auto big = doubled(rho.shape());
  std::vector<cplx> out(rho.data().begin(), rho.data().end());
  kernels::phase_shift(big, out, mode, phi);
  kernels::phase_shift(big, out, rho.modes() + mode, -phi);
  return DensityOperator(rho.shape(), std::move(out), rho.trace_deficit());
}

namespace {

template <class State>
State run_mesh(State s, const ScatteringMatrix& S, std::span<const int> modes) {
  if (static_cast<int>(modes.size()) != S.dim())
    throw std::domain_error("apply_interferometer: mode list does not match matrix size");
  const auto mesh = decompose(S);
  for (int k = 0; k < S.dim(); ++k)
    if (mesh.phases[k] != 0.0) s = apply_phase(s, modes[k], mesh.phases[k]);
  for (const auto& rot : mesh.rotations)
    s = apply_two_mode(s, modes[rot.mode], modes[rot.mode + 1], rot.u);
  return s;
}

}  // namespace

FockState apply_interferometer(const FockState& psi, const ScatteringMatrix& S,
                               std::span<const int> modes) {
  return run_mesh(psi, S, modes);
}

DensityOperator apply_interferometer(const DensityOperator& rho, const ScatteringMatrix& S,
                                     std::span<const int> modes) {
  return run_mesh(rho, S, modes);
}

}  // namespace catamp
