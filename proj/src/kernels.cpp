#include "catamp/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace catamp::kernels {

Mat2 conj(const Mat2& u) {
  return {std::conj(u[0]), std::conj(u[1]), std::conj(u[2]), std::conj(u[3])};
}

Mat2 adjoint(const Mat2& u) {
  return {std::conj(u[0]), std::conj(u[2]), std::conj(u[1]), std::conj(u[3])};
}

SectorTable::SectorTable(const Mat2& u) : u_(u), cur_{cplx(1.0)} {}

void SectorTable::advance() {
  const int n = n_ + 1;
  const int w = n + 1;
  next_.assign(static_cast<std::size_t>(w) * w, cplx(0.0));
  // Input |q, n-q>: raise mode i for q >= 1, otherwise raise mode j.
  for (int q = 0; q <= n; ++q) {
    const int prev_q = q >= 1 ? q - 1 : 0;
    const cplx ci = q >= 1 ? u_[0] : u_[1];  // coefficient of a_i^+
    const cplx cj = q >= 1 ? u_[2] : u_[3];  // coefficient of a_j^+
    const double norm = 1.0 / std::sqrt(static_cast<double>(q >= 1 ? q : n));
    for (int p = 0; p <= n; ++p) {
      cplx acc = 0.0;
      if (p >= 1) acc += ci * std::sqrt(static_cast<double>(p)) * cur_[(p - 1) * n + prev_q];
      if (p <= n - 1) acc += cj * std::sqrt(static_cast<double>(n - p)) * cur_[p * n + prev_q];
      next_[p * w + q] = acc * norm;
    }
  }
  cur_.swap(next_);
  n_ = n;
}

std::vector<std::size_t> offsets_over(const ModeShape& shape,
                                      std::span<const int> modes) {
  std::vector<std::size_t> out{0};
  for (int m : modes) {
    const std::size_t s = shape.stride(m);
    const int d = shape.dim(m);
    std::vector<std::size_t> next;
    next.reserve(out.size() * d);
    for (std::size_t base : out)
      for (int k = 0; k < d; ++k) next.push_back(base + k * s);
    out.swap(next);
  }
  return out;
}

std::vector<int> complement(const ModeShape& shape, std::span<const int> modes) {
  std::vector<int> rest;
  for (int m = 0; m < shape.modes(); ++m)
    if (std::find(modes.begin(), modes.end(), m) == modes.end()) rest.push_back(m);
  return rest;
}

void two_mode_unitary(const ModeShape& shape, std::span<const cplx> in,
                      std::span<cplx> out, int mode_i, int mode_j,
                      const Mat2& u) {
  const int di = shape.dim(mode_i);
  const int dj = shape.dim(mode_j);
  const std::size_t si = shape.stride(mode_i);
  const std::size_t sj = shape.stride(mode_j);
  const std::array<int, 2> pair{mode_i, mode_j};
  const auto rest = complement(shape, pair);
  const auto bases = offsets_over(shape, rest);
  const auto slices = static_cast<std::ptrdiff_t>(bases.size());

  std::fill(out.begin(), out.end(), cplx(0.0));
  SectorTable table(u);
  const int n_top = (di - 1) + (dj - 1);
  for (int n = 0; n <= n_top; ++n) {
    if (n > 0) table.advance();
    const int lo = std::max(0, n - (dj - 1));
    const int hi = std::min(n, di - 1);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t s = 0; s < slices; ++s) {
      const std::size_t base = bases[s];
      for (int p = lo; p <= hi; ++p) {
        cplx acc = 0.0;
        for (int q = lo; q <= hi; ++q)
          acc += table(p, q) * in[base + q * si + (n - q) * sj];
        out[base + p * si + (n - p) * sj] = acc;
      }
    }
  }
}

void phase_shift(const ModeShape& shape, std::span<cplx> data, int mode,
                 double phi) {
  const int d = shape.dim(mode);
  const std::size_t s = shape.stride(mode);
  std::vector<cplx> factor(d);
  for (int n = 0; n < d; ++n) factor[n] = std::polar(1.0, phi * n);
  const auto total = static_cast<std::ptrdiff_t>(data.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx)
    data[idx] *= factor[(idx / s) % d];
}

void pure_loss(const ModeShape& shape, std::span<const cplx> rho,
               std::span<cplx> out, int mode, double eta) {
  const std::size_t dim = shape.size();
  const int d = shape.dim(mode);
  const std::size_t s = shape.stride(mode);
  // kraus[n][k] = <n-k| K_k |n> = sqrt(C(n,k)) eta^{(n-k)/2} (1-eta)^{k/2}
  std::vector<double> kraus(static_cast<std::size_t>(d) * d, 0.0);
  for (int n = 0; n < d; ++n) {
    double log_binom = 0.0;
    for (int k = 0; k <= n; ++k) {
      if (k > 0) log_binom += std::log(static_cast<double>(n - k + 1)) - std::log(static_cast<double>(k));
      double v;
      if (k > 0 && eta == 1.0) v = 0.0;
      else if (k < n && eta == 0.0) v = 0.0;
      else {
        const double le = (n - k) > 0 ? 0.5 * (n - k) * std::log(eta) : 0.0;
        const double ll = k > 0 ? 0.5 * k * std::log1p(-eta) : 0.0;
        v = std::exp(0.5 * log_binom + le + ll);
      }
      kraus[n * d + k] = v;
    }
  }
  const auto rows = static_cast<std::ptrdiff_t>(dim);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const int mr = static_cast<int>((r / s) % d);
    for (std::size_t c = 0; c < dim; ++c) {
      const int mc = static_cast<int>((c / s) % d);
      const int kmax = d - 1 - std::max(mr, mc);
      cplx acc = 0.0;
      for (int k = 0; k <= kmax; ++k) {
        acc += kraus[(mr + k) * d + k] * kraus[(mc + k) * d + k] *
               rho[(r + k * s) * dim + (c + k * s)];
      }
      out[r * dim + c] = acc;
    }
  }
}

void partial_trace(const ModeShape& shape, std::span<const cplx> rho,
                   std::span<const int> keep, std::span<cplx> out) {
  const std::size_t dim = shape.size();
  const auto kept = offsets_over(shape, keep);
  const auto traced = offsets_over(shape, complement(shape, keep));
  const std::size_t dk = kept.size();
  const auto rows = static_cast<std::ptrdiff_t>(dk);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t a = 0; a < rows; ++a) {
    for (std::size_t b = 0; b < dk; ++b) {
      cplx acc = 0.0;
      for (std::size_t t : traced) acc += rho[(kept[a] + t) * dim + kept[b] + t];
      out[a * dk + b] = acc;
    }
  }
}

void partial_trace_pure(const ModeShape& shape, std::span<const cplx> psi,
                        std::span<const int> keep, std::span<cplx> out) {
  const auto kept = offsets_over(shape, keep);
  const auto traced = offsets_over(shape, complement(shape, keep));
  const std::size_t dk = kept.size();
  const auto rows = static_cast<std::ptrdiff_t>(dk);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t a = 0; a < rows; ++a) {
    for (std::size_t b = 0; b < dk; ++b) {
      cplx acc = 0.0;
      for (std::size_t t : traced) acc += psi[kept[a] + t] * std::conj(psi[kept[b] + t]);
      out[a * dk + b] = acc;
    }
  }
}

}  // namespace catamp::kernels
