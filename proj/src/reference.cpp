#include "catamp/reference.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace catamp::reference {

namespace {

double binom(int n, int k) { return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0))); }

double sqrt_fact(int n) { return std::exp(0.5 * std::lgamma(n + 1.0)); }

cplx ipow(cplx z, int k) {
  cplx r = 1.0;
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

}  // namespace

void two_mode_unitary(const ModeShape& shape, std::span<const cplx> in,
                      std::span<cplx> out, int mode_i, int mode_j,
                      const kernels::Mat2& u) {
  const int di = shape.dim(mode_i);
  const int dj = shape.dim(mode_j);
  std::fill(out.begin(), out.end(), cplx(0.0));
  for (std::size_t f = 0; f < in.size(); ++f) {
    if (in[f] == cplx(0.0)) continue;
    auto idx = shape.unflat(f);
    const int q = idx[mode_i];
    const int r = idx[mode_j];
    const int n = q + r;
    // (U00 a_i^+ + U10 a_j^+)^q (U01 a_i^+ + U11 a_j^+)^r / sqrt(q! r!)
    for (int k = 0; k <= q; ++k) {
      for (int l = 0; l <= r; ++l) {
        const int p = k + l;
        if (p >= di || n - p >= dj) continue;
        const cplx c = binom(q, k) * binom(r, l) * ipow(u[0], k) * ipow(u[2], q - k) *
                       ipow(u[1], l) * ipow(u[3], r - l) * sqrt_fact(p) *
                       sqrt_fact(n - p) / (sqrt_fact(q) * sqrt_fact(r));
        idx[mode_i] = p;
        idx[mode_j] = n - p;
        out[shape.flat(idx)] += c * in[f];
      }
    }
  }
}

void phase_shift(const ModeShape& shape, std::span<cplx> data, int mode, double phi) {
  for (std::size_t f = 0; f < data.size(); ++f) {
    const int n = shape.unflat(f)[mode];
    data[f] *= std::exp(cplx(0.0, phi * n));
  }
}

void pure_loss(const ModeShape& shape, std::span<const cplx> rho,
               std::span<cplx> out, int mode, double eta) {
  const std::size_t dim = shape.size();
  const int d = shape.dim(mode);
  std::fill(out.begin(), out.end(), cplx(0.0));
  std::vector<cplx> tmp(dim * dim);
  // Sum over k of K_k rho K_k^+, each K_k built as an explicit lowering map.
  for (int k = 0; k < d; ++k) {
    auto amp = [&](int n) {  // <n-k| K_k |n>
      if (n < k) return 0.0;
      return std::sqrt(binom(n, k) * std::pow(eta, n - k) * std::pow(1.0 - eta, k));
    };
    std::fill(tmp.begin(), tmp.end(), cplx(0.0));
    for (std::size_t c = 0; c < dim; ++c) {
      for (std::size_t r = 0; r < dim; ++r) {
        auto idx = shape.unflat(r);
        const int n = idx[mode];
        if (n < k) continue;
        idx[mode] = n - k;
        tmp[shape.flat(idx) * dim + c] += amp(n) * rho[r * dim + c];
      }
    }
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) {
        auto idx = shape.unflat(c);
        const int n = idx[mode];
        if (n < k) continue;
        idx[mode] = n - k;
        out[r * dim + shape.flat(idx)] += amp(n) * tmp[r * dim + c];
      }
    }
  }
}

void partial_trace(const ModeShape& shape, std::span<const cplx> rho,
                   std::span<const int> keep, std::span<cplx> out) {
  const std::size_t dim = shape.size();
  std::vector<int> kdims;
  for (int m : keep) kdims.push_back(shape.dim(m));
  const ModeShape kshape(kdims);
  const auto traced = kernels::complement(shape, keep);
  std::fill(out.begin(), out.end(), cplx(0.0));
  for (std::size_t r = 0; r < dim; ++r) {
    const auto ir = shape.unflat(r);
    for (std::size_t c = 0; c < dim; ++c) {
      const auto ic = shape.unflat(c);
      bool diag = true;
      for (int t : traced) diag = diag && ir[t] == ic[t];
      if (!diag) continue;
      std::vector<int> kr, kc;
      for (int m : keep) {
        kr.push_back(ir[m]);
        kc.push_back(ic[m]);
      }
      out[kshape.flat(kr) * kshape.size() + kshape.flat(kc)] += rho[r * dim + c];
    }
  }
}

FockState apply_interferometer_direct(const FockState& psi, const std::vector<cplx>& u,
                                      std::span<const int> modes) {
  const int nm = static_cast<int>(modes.size());
  const auto& shape = psi.shape();
  std::vector<cplx> out(psi.size(), 0.0);
  using Poly = std::map<std::vector<int>, cplx>;
  for (std::size_t f = 0; f < psi.size(); ++f) {
    if (psi[f] == cplx(0.0)) continue;
    auto idx = shape.unflat(f);
    Poly poly{{std::vector<int>(nm, 0), cplx(1.0)}};
    double norm = 1.0;
    for (int k = 0; k < nm; ++k) {
      const int nk = idx[modes[k]];
      norm *= sqrt_fact(nk);
      for (int rep = 0; rep < nk; ++rep) {
        Poly next;
        for (const auto& [mono, c] : poly) {
          for (int m = 0; m < nm; ++m) {
            auto e = mono;
            ++e[m];
            next[e] += c * u[m * nm + k];
          }
        }
        poly.swap(next);
      }
    }
    for (const auto& [mono, c] : poly) {
      bool fits = true;
      double w = 1.0;
      for (int m = 0; m < nm; ++m) {
        fits = fits && mono[m] < shape.dim(modes[m]);
        w *= sqrt_fact(mono[m]);
      }
      if (!fits) continue;
      auto oidx = idx;
      for (int m = 0; m < nm; ++m) oidx[modes[m]] = mono[m];
      out[shape.flat(oidx)] += psi[f] * c * w / norm;
    }
  }
  return FockState(shape, std::move(out), psi.norm_deficit());
}

}  // namespace catamp::reference
