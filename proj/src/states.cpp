#include "catamp/states.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

namespace catamp {

cplx omega(int N, long k) {
  long r = k % N;
  if (r < 0) r += N;
  return std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(r) / N);
}

FockState vacuum(FockCutoff cutoff) { return make_fock(0, cutoff); }

FockState make_fock(int n, FockCutoff cutoff) {
  if (n < 0 || n > cutoff.n_max()) throw std::domain_error("make_fock: n outside cutoff");
  std::vector<cplx> a(cutoff.dim(), 0.0);
  a[n] = 1.0;
  return FockState({cutoff}, std::move(a));
}

FockState make_coherent(cplx alpha, FockCutoff cutoff, double leak_tol) {
  const double mu2 = std::norm(alpha);
  const double leak = mu2 > 0.0 ? boost::math::gamma_p(cutoff.n_max() + 1.0, mu2) : 0.0;
  if (leak > leak_tol)
    throw TruncationError("make_coherent: cutoff " + std::to_string(cutoff.n_max()) +
                              " too small for |alpha|^2 = " + std::to_string(mu2),
                          1.0 - leak);
  std::vector<cplx> a(cutoff.dim());
  a[0] = std::exp(-0.5 * mu2);
  for (int n = 1; n < cutoff.dim(); ++n) a[n] = a[n - 1] * alpha / std::sqrt(double(n));
  return FockState({cutoff}, std::move(a), leak);
}

FockState make_cat(int N, cplx beta, FockCutoff cutoff, double leak_tol) {
  if (N < 2) throw std::domain_error("make_cat: N must be >= 2");
  if (cutoff.n_max() < N - 1) throw TruncationError("make_cat: cutoff below N-1", 0.0);
  // log weight of |kN-1> relative to k = 1: 2(k-1)N log|beta| + lgamma(N) - lgamma(kN)
  const double lb = std::log(std::abs(beta));
  const double mu2 = std::norm(beta);
  auto logw = [&](int k) {
    if (k == 1) return 0.0;
    return 2.0 * (k - 1) * N * lb + std::lgamma(double(N)) - std::lgamma(double(k) * N);
  };
  const int k_keep = (cutoff.n_max() + 1) / N;
  // The weights peak near kN ~ |beta|^2; sum far enough past both.
  const int k_all = std::max(k_keep, static_cast<int>((mu2 + 12.0 * std::sqrt(mu2) + 60.0) / N) + 2);
  double lmax = 0.0;
  for (int k = 1; k <= k_all; ++k) lmax = std::max(lmax, logw(k));
  double kept = 0.0, tail = 0.0;
  for (int k = 1; k <= k_all; ++k) {
    const double w = beta == cplx(0.0) ? (k == 1 ? 1.0 : 0.0) : std::exp(logw(k) - lmax);
    (k <= k_keep ? kept : tail) += w;
  }
  const double total = kept + tail;
  const double leak = tail / total;
  if (leak > leak_tol)
    throw TruncationError("make_cat: cutoff " + std::to_string(cutoff.n_max()) +
                              " too small for |beta| = " + std::to_string(std::abs(beta)),
                          1.0 - leak);
  std::vector<cplx> a(cutoff.dim(), 0.0);
  const double phase = std::arg(beta);
  for (int k = 1; k <= k_keep; ++k) {
    const double w = beta == cplx(0.0) ? (k == 1 ? 1.0 : 0.0) : std::exp(logw(k) - lmax);
    a[k * N - 1] = std::polar(std::sqrt(w / total), phase * (k * N - 1));
  }
  return FockState({cutoff}, std::move(a), leak);
}

FockCutoff tmsv_cutoff(double chi, double leak_tol) {
  if (chi < 0.0 || chi >= 1.0) throw std::domain_error("tmsv_cutoff: chi outside [0,1)");
  if (chi == 0.0) return FockCutoff(1);
  // chi^{2(n+1)} <= leak_tol
  int n = std::max(1, static_cast<int>(std::ceil(std::log(leak_tol) / (2.0 * std::log(chi)))) - 1);
  while (std::pow(chi, 2.0 * (n + 1)) > leak_tol) ++n;
  return FockCutoff(n);
}

FockState make_tmsv(double chi, FockCutoff cutoff, double leak_tol) {
  if (chi < 0.0 || chi >= 1.0) throw std::domain_error("make_tmsv: chi outside [0,1)");
  const double leak = std::pow(chi, 2.0 * (cutoff.n_max() + 1));
  if (leak > leak_tol)
    throw TruncationError("make_tmsv: cutoff " + std::to_string(cutoff.n_max()) +
                              " too small for chi = " + std::to_string(chi),
                          1.0 - leak);
  const int d = cutoff.dim();
  std::vector<cplx> a(static_cast<std::size_t>(d) * d, 0.0);
  double c = std::sqrt(1.0 - chi * chi);
  for (int n = 0; n < d; ++n, c *= chi) a[n * d + n] = c;
  return FockState({cutoff, cutoff}, std::move(a), leak);
}

FockState coherent_superposition(int N, cplx alpha, const std::vector<cplx>& c,
                                 FockCutoff cutoff, double leak_tol) {
  if (static_cast<int>(c.size()) != N)
    throw std::domain_error("coherent_superposition: need N coefficients");
  std::vector<cplx> a(cutoff.dim(), 0.0);
  double leak = 0.0;
  for (int k = 0; k < N; ++k) {
    const auto coh = make_coherent(omega(N, k + 1) * alpha, cutoff, leak_tol);
    leak = coh.norm_deficit();
    for (int n = 0; n < cutoff.dim(); ++n) a[n] += c[k] * coh[n];
  }
  return FockState({cutoff}, std::move(a), leak);
}

FockState tensor(const FockState& a, const FockState& b) {
  std::vector<int> dims = a.shape().dims();
  dims.insert(dims.end(), b.shape().dims().begin(), b.shape().dims().end());
  std::vector<cplx> out;
  out.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out.push_back(a[i] * b[j]);
  return FockState(ModeShape(std::move(dims)), std::move(out),
                   combine_deficit(a.norm_deficit(), b.norm_deficit()));
}

FockState tensor(const std::vector<FockState>& states) {
  if (states.empty()) throw std::domain_error("tensor: empty list");
  FockState acc = states.front();
  for (std::size_t k = 1; k < states.size(); ++k) acc = tensor(acc, states[k]);
  return acc;
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  std::vector<int> dims = a.shape().dims();
  dims.insert(dims.end(), b.shape().dims().begin(), b.shape().dims().end());
  const std::size_t da = a.dim(), db = b.dim(), d = da * db;
  std::vector<cplx> out(d * d);
  for (std::size_t r1 = 0; r1 < da; ++r1)
    for (std::size_t c1 = 0; c1 < da; ++c1) {
      const cplx x = a(r1, c1);
      for (std::size_t r2 = 0; r2 < db; ++r2)
        for (std::size_t c2 = 0; c2 < db; ++c2)
          out[(r1 * db + r2) * d + c1 * db + c2] = x * b(r2, c2);
    }
  return DensityOperator(ModeShape(std::move(dims)), std::move(out),
                         combine_deficit(a.trace_deficit(), b.trace_deficit()));
}

namespace {

// Flat indices of `shape` whose `mode` index is <= n_max, in order.
std::vector<std::size_t> kept_indices(const ModeShape& shape, int mode, int n_max) {
  std::vector<std::size_t> keep;
  const std::size_t s = shape.stride(mode);
  const int d = shape.dim(mode);
  for (std::size_t f = 0; f < shape.size(); ++f)
    if (static_cast<int>((f / s) % d) <= n_max) keep.push_back(f);
  return keep;
}

ModeShape with_dim(const ModeShape& shape, int mode, int dim) {
  auto dims = shape.dims();
  dims.at(mode) = dim;
  return ModeShape(std::move(dims));
}

}  // namespace

FockState truncate_mode(const FockState& psi, int mode, FockCutoff cutoff) {
  if (cutoff.dim() >= psi.shape().dim(mode)) return psi;
  const auto keep = kept_indices(psi.shape(), mode, cutoff.n_max());
  std::vector<cplx> out;
  out.reserve(keep.size());
  double kept = 0.0;
  for (auto f : keep) {
    out.push_back(psi[f]);
    kept += std::norm(psi[f]);
  }
  const double dropped = psi.norm_sq() - kept;
  return FockState(with_dim(psi.shape(), mode, cutoff.dim()), std::move(out),
                   psi.norm_deficit() + std::max(0.0, dropped));
}

DensityOperator truncate_mode(const DensityOperator& rho, int mode, FockCutoff cutoff) {
  if (cutoff.dim() >= rho.shape().dim(mode)) return rho;
  const auto keep = kept_indices(rho.shape(), mode, cutoff.n_max());
  const std::size_t d = keep.size();
  std::vector<cplx> out(d * d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) out[r * d + c] = rho(keep[r], keep[c]);
  DensityOperator res(with_dim(rho.shape(), mode, cutoff.dim()), std::move(out));
  const double dropped = rho.trace() - res.trace();
  return DensityOperator(res.shape(), std::vector<cplx>(res.data().begin(), res.data().end()),
                         rho.trace_deficit() + std::max(0.0, dropped));
}

}  // namespace catamp
