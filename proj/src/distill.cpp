#include "catamp/distill.hpp"

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "catamp/channels.hpp"
#include "catamp/linear_optics.hpp"
#include "catamp/states.hpp"

namespace catamp {

namespace {

constexpr int kBetaGrid = 16;

bool in_unit(double x) { return x > 0.0 && x <= 1.0; }

// Transmissivities on the traveling arm and on Bob's transmitted arm, each
// including the detector efficiency (uniform loss commutes with the splitter).
std::pair<double, double> arm_losses(const DistillConfig& c) {
  if (c.split == ChannelSplit::mid_span) {
    const double s = std::sqrt(c.eta_channel);
    return {s * c.eta_det, s * c.eta_det};
  }
  return {c.eta_channel * c.eta_det, c.eta_det};
}

// Bob's (Bt, Bk) state after the Bt loss, restricted to Bt <= N-1. Each
// pure component of the resource passes the loss as explicit Kraus
// operators K_k |m+k> = sqrt(C(m+k, k) t^m (1-t)^k) |m>.
DensityOperator resource_block(const DistillConfig& cfg, double beta, double t) {
  const int N = cfg.N;
  const FockCutoff c = cfg.cutoff ? FockCutoff(*cfg.cutoff)
                                  : FockCutoff(std::max(auto_cutoff(beta).n_max(), N - 1));
  const auto cat = make_cat(N, beta, c, cfg.leak_tol);
  std::vector<std::pair<double, FockState>> parts;
  if (cfg.eta_res == 1.0)
    parts.emplace_back(1.0, cat);
  else
    parts = eigen_components(loss_channel(cat, 0, cfg.eta_res));

  const double tau = cfg.g * cfg.g / (1.0 + cfg.g * cfg.g);
  const int db = c.dim();
  const ModeShape shape({N, db});
  const std::size_t d = shape.size();
  std::vector<cplx> rho(d * d, 0.0);
  std::vector<cplx> v(d);
  double deficit = 0.0;
  for (const auto& [w, phi] : parts) {
    const auto psi = apply_beam_splitter(tensor(vacuum(c), phi), 0, 1, tau);
    deficit += w * combine_deficit(psi.norm_deficit(), cat.norm_deficit());
    for (int k = 0; k < db; ++k) {
      if (k > 0 && t == 1.0) break;
      std::fill(v.begin(), v.end(), 0.0);
      for (int m = 0; m < N && m + k < db; ++m) {
        const double coef = std::sqrt(boost::math::binomial_coefficient<double>(m + k, k) *
                                      std::pow(t, m) * std::pow(1.0 - t, k));
        for (int j = 0; j < db; ++j) v[m * db + j] = coef * psi[(m + k) * db + j];
      }
      for (std::size_t i = 0; i < d; ++i) {
        if (v[i] == cplx(0.0)) continue;
        const cplx wi = w * v[i];
        for (std::size_t jj = 0; jj < d; ++jj) rho[i * d + jj] += wi * std::conj(v[jj]);
      }
    }
  }
  return DensityOperator(shape, std::move(rho), deficit);
}

}  // namespace

void DistillConfig::validate() const {
  if (N < 2) throw std::domain_error("distill: N must be >= 2");
  if (!(chi >= 0.0 && chi < 1.0)) throw std::domain_error("distill: chi outside [0, 1)");
  if (!in_unit(eta_channel) || !in_unit(eta_det) || !in_unit(eta_res))
    throw std::domain_error("distill: transmissivities must lie in (0, 1]");
  if (!(g >= 0.0)) throw std::domain_error("distill: gain must be >= 0");
  if (beta && !(*beta >= 0.0)) throw std::domain_error("distill: beta must be >= 0");
}

std::vector<cplx> herald_functional(int N, int m0) {
  const HeraldPattern pat(N, m0);
  const FockCutoff c(N - 1);
  std::vector<int> all(N);
  for (int k = 0; k < N; ++k) all[k] = k;
  const auto u = dft_matrix(N);
  std::vector<cplx> h(N);
  for (int n = 0; n < N; ++n) {
    std::vector<FockState> in{make_fock(n, c), make_fock(N - 1 - n, c)};
    for (int k = 2; k < N; ++k) in.push_back(vacuum(c));
    const auto out = apply_interferometer(tensor(in), u, all);
    h[n] = out.amplitudes()[out.shape().flat(pat.counts())];
  }
  return h;
}

DensityOperator distill_state(const DistillConfig& cfg, double beta, int m0) {
  cfg.validate();
  const int N = cfg.N;
  const auto [t_travel, t_bob] = arm_losses(cfg);
  const FockCutoff herald_cut(N - 1);

  // Alice's TMSV, traveling arm through its loss, truncated to the herald sector.
  const auto tmsv = make_tmsv(cfg.chi, tmsv_cutoff(cfg.chi, cfg.leak_tol), cfg.leak_tol);
  const auto lossy = loss_channel(tmsv, 1, t_travel);
  const auto cut_a = truncate_mode(lossy, 1, herald_cut);
  const DensityOperator rho_a(cut_a.shape(), {cut_a.data().begin(), cut_a.data().end()},
                              lossy.trace_deficit());

  // Bob's resource B2(tau)|0>|cat>, with tau = g^2/(1+g^2).
  const auto rho_b = resource_block(cfg, beta, t_bob);

  // rho_out = sum h(n) h*(n') <n|rho_a|n'>_{A'} (x) <N-1-n|rho_b|N-1-n'>_{Bt}
  const auto h = herald_functional(N, m0);
  const int da = rho_a.shape().dim(0), db = rho_b.shape().dim(1);
  ModeShape out_shape({da, db});
  const std::size_t d = out_shape.size();
  std::vector<cplx> out(d * d, 0.0);
  const std::size_t dim_a = rho_a.dim(), dim_b = rho_b.dim();
  for (int n = 0; n < N; ++n) {
    for (int np = 0; np < N; ++np) {
      const cplx w = h[n] * std::conj(h[np]);
      if (w == cplx(0.0)) continue;
      const int m = N - 1 - n, mp = N - 1 - np;
      for (int i = 0; i < da; ++i)
        for (int ip = 0; ip < da; ++ip) {
          const cplx a = w * rho_a.data()[(i * N + n) * dim_a + (ip * N + np)];
          if (a == cplx(0.0)) continue;
          for (int k = 0; k < db; ++k)
            for (int kp = 0; kp < db; ++kp)
              out[(i * db + k) * d + (ip * db + kp)] +=
                  a * rho_b.data()[(m * db + k) * dim_b + (mp * db + kp)];
        }
    }
  }
  DensityOperator rho(out_shape, std::move(out),
                      combine_deficit(rho_a.trace_deficit(), rho_b.trace_deficit()));
  if (m0 == 1) return rho;
  return apply_phase(rho, 1, -2.0 * std::numbers::pi * (m0 - 1) / N);
}

namespace {

DistillResult evaluate(const DistillConfig& cfg, double beta) {
  DistillResult r;
  r.beta_used = beta;
  const auto rho = distill_state(cfg, beta, 1);
  r.norm_deficit = rho.trace_deficit();
  r.success_prob = rho.trace();
  r.success_prob_all = r.success_prob;
  for (int m0 = 2; m0 <= cfg.N; ++m0) r.success_prob_all += distill_state(cfg, beta, m0).trace();
  if (!(r.success_prob > 0.0)) return r;
  r.heralded = true;
  r.cm = covariance_matrix(rho, {0, 1});
  r.eof = gaussian_eof(r.cm);
  r.logneg = log_negativity(r.cm);
  return r;
}

}  // namespace

DistillResult run_distillation(const DistillConfig& cfg) {
  cfg.validate();
  if (!cfg.beta) return optimize_beta(cfg);
  return evaluate(cfg, *cfg.beta);
}

std::pair<double, double> beta_search_interval(const DistillConfig& cfg) {
  cfg.validate();
  const double alpha_eff = cfg.chi / std::sqrt(1.0 - cfg.chi * cfg.chi);
  const double hi = 2.0 * alpha_eff * std::sqrt(1.0 / cfg.eta_channel + cfg.g * cfg.g);
  return {0.1, std::max(hi, 0.2)};
}

DistillResult optimize_beta(const DistillConfig& cfg) {
  cfg.validate();
  const auto [lo, hi] = beta_search_interval(cfg);
  const double step = (hi - lo) / (kBetaGrid - 1);
  std::vector<DistillResult> grid;
  int best = 0;
  for (int i = 0; i < kBetaGrid; ++i) {
    grid.push_back(evaluate(cfg, lo + i * step));
    // strict improvement keeps the smallest beta on ties
    if (grid[i].eof > grid[best].eof) best = i;
  }
  if (grid[best].eof <= 0.0) return grid.front();

  const double a = lo + std::max(best - 1, 0) * step;
  const double b = lo + std::min(best + 1, kBetaGrid - 1) * step;
  boost::uintmax_t iters = 60;
  const auto [x, neg_e] = boost::math::tools::brent_find_minima(
      [&](double beta) { return -evaluate(cfg, beta).eof; }, a, b, 20, iters);
  if (-neg_e > grid[best].eof) return evaluate(cfg, x);
  return grid[best];
}

double passthrough_eof(double chi, double eta) { return gaussian_eof(lossy_tmsv_cm(chi, eta)); }

}  // namespace catamp
