#include "catamp/teleamp.hpp"

#include <numbers>
#include <span>

#include "catamp/linear_optics.hpp"
#include "catamp/states.hpp"

namespace catamp {

namespace {

FockState restrict_mode(const FockState& s, int mode, FockCutoff c) {
  const auto t = truncate_mode(s, mode, c);
  return FockState(t.shape(), {t.amplitudes().begin(), t.amplitudes().end()}, s.norm_deficit());
}

struct Weighted {
  double weight;
  FockState psi;
};

std::vector<Weighted> spectral(const DensityOperator& rho) {
  std::vector<Weighted> out;
  for (auto& [w, v] : eigen_components(rho)) out.push_back({w, std::move(v)});
  return out;
}

TeleampRun run_pure(const ProtocolParams& p, const FockState& input, FockState resource,
                    const TeleampOptions& opt) {
  const int N = p.N;
  const bool lossy = p.eta < 1.0;
  const FockCutoff c = resource_cutoff(p, opt);
  const double resource_deficit = resource.norm_deficit();

  // Resource modes: (Bt, Bk[, env]).
  if (lossy) {
    resource = tensor(resource, vacuum(c));
    resource = apply_beam_splitter(resource, 2, 0, p.eta);
  }
  FockState in = input;
  FockCutoff vac_cut(N - 1);
  if (opt.herald_truncation) {
    in = restrict_mode(in, 0, FockCutoff(N - 1));
    resource = restrict_mode(resource, 0, FockCutoff(N - 1));
  } else {
    vac_cut = FockCutoff(std::max(input.cutoff(0).n_max(), c.n_max()));
  }

  // Global modes: A = 0, Bt = 1, Bk = 2, env = 3 if lossy, then the vacua.
  FockState full = tensor(in, resource);
  for (int k = 0; k < N - 2; ++k) full = tensor(full, vacuum(vac_cut));
  std::vector<int> splitter{0, 1};
  const int first_vac = lossy ? 4 : 3;
  for (int k = 0; k < N - 2; ++k) splitter.push_back(first_vac + k);
  full = apply_interferometer(full, dft_matrix(N), splitter);

  TeleampRun run;
  run.params = p;
  run.norm_deficit = combine_deficit(input.norm_deficit(), resource_deficit);
  const int patterns = opt.accept_all_patterns ? N : 1;
  for (int m0 = 1; m0 <= patterns; ++m0) {
    HeraldPattern pat(N, m0);
    auto pr = project_pattern(full, splitter, pat);
    FockState rem = std::move(pr.remaining);
    if (opt.apply_correction && m0 > 1)
      rem = apply_phase(rem, 0, -2.0 * std::numbers::pi * (m0 - 1) / N);
    const std::array<int, 1> keep{0};
    DensityOperator out = partial_trace(rem, keep);
    run.total_prob += pr.probability;
    run.patterns.push_back({pat, pr.probability, std::move(rem), std::move(out)});
  }
  return run;
}

void accumulate(std::vector<cplx>& acc, std::span<const cplx> x, double w) {
  if (acc.empty()) acc.assign(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) acc[i] += w * x[i];
}

// Mixture of pure runs. Joint states become density operators.
TeleampRun run_mixture(const ProtocolParams& p, const std::vector<Weighted>& inputs,
                       const std::vector<Weighted>& resources, double deficit,
                       const TeleampOptions& opt) {
  TeleampRun run;
  run.params = p;
  run.norm_deficit = deficit;
  std::vector<std::vector<cplx>> joint, out;
  std::vector<ModeShape> joint_shape, out_shape;
  std::vector<double> prob;
  for (const auto& i : inputs) {
    for (const auto& r : resources) {
      const double w = i.weight * r.weight;
      const auto part = run_pure(p, i.psi, r.psi, opt);
      if (run.patterns.empty()) {
        for (const auto& pr : part.patterns)
          run.patterns.push_back({pr.pattern, 0.0, FockState(std::vector<FockCutoff>{}, {1.0}),
                                  pr.output});
        joint.resize(part.patterns.size());
        out.resize(part.patterns.size());
        prob.assign(part.patterns.size(), 0.0);
        for (const auto& pr : part.patterns) {
          joint_shape.push_back(std::get<FockState>(pr.joint).shape());
          out_shape.push_back(pr.output.shape());
        }
      }
      for (std::size_t k = 0; k < part.patterns.size(); ++k) {
        const auto& pr = part.patterns[k];
        prob[k] += w * pr.probability;
        accumulate(joint[k], DensityOperator::from_pure(std::get<FockState>(pr.joint)).data(), w);
        accumulate(out[k], pr.output.data(), w);
      }
    }
  }
  for (std::size_t k = 0; k < run.patterns.size(); ++k) {
    auto& pr = run.patterns[k];
    pr.probability = prob[k];
    pr.joint = DensityOperator(joint_shape[k], std::move(joint[k]));
    pr.output = DensityOperator(out_shape[k], std::move(out[k]));
    run.total_prob += prob[k];
  }
  return run;
}

std::vector<Weighted> components(std::variant<FockState, DensityOperator> s, double& deficit) {
  if (auto* pure = std::get_if<FockState>(&s)) {
    deficit = pure->norm_deficit();
    return {{1.0, std::move(*pure)}};
  }
  const auto& rho = std::get<DensityOperator>(s);
  deficit = rho.trace_deficit();
  return spectral(rho);
}

}  // namespace

FockCutoff resource_cutoff(const ProtocolParams& p, const TeleampOptions& opt) {
  if (opt.cutoff) return FockCutoff(*opt.cutoff);
  return FockCutoff(std::max(auto_cutoff(std::abs(p.beta())).n_max(), p.N - 1));
}

std::variant<FockState, DensityOperator> prepare_resource(const ProtocolParams& p,
                                                          const TeleampOptions& opt) {
  p.validate();
  if (!(opt.eta_res > 0.0 && opt.eta_res <= 1.0))
    throw std::domain_error("prepare_resource: eta_res outside (0, 1]");
  const FockCutoff c = resource_cutoff(p, opt);
  const auto cat = make_cat(p.N, p.beta(), c, opt.leak_tol);
  const double tau = p.tau();
  if (opt.eta_res == 1.0) return apply_beam_splitter(tensor(vacuum(c), cat), 0, 1, tau);
  const auto lossy_cat = loss_channel(cat, 0, opt.eta_res);
  return apply_beam_splitter(tensor(DensityOperator::from_pure(vacuum(c)), lossy_cat), 0, 1, tau);
}

TeleampRun run_teleamp(const ProtocolParams& p, const FockState& input, const TeleampOptions& opt) {
  p.validate();
  if (input.modes() != 1) throw std::domain_error("run_teleamp: input must be single-mode");
  auto resource = prepare_resource(p, opt);
  if (auto* pure = std::get_if<FockState>(&resource)) return run_pure(p, input, std::move(*pure), opt);
  double res_deficit = 0.0;
  const auto res = components(std::move(resource), res_deficit);
  return run_mixture(p, {{1.0, input}}, res, combine_deficit(input.norm_deficit(), res_deficit), opt);
}

TeleampRun run_teleamp(const ProtocolParams& p, const DensityOperator& input,
                       const TeleampOptions& opt) {
  p.validate();
  if (input.modes() != 1) throw std::domain_error("run_teleamp: input must be single-mode");
  // Only the first N-1 photons of the input can reach a herald.
  const DensityOperator in =
      opt.herald_truncation ? truncate_mode(input, 0, FockCutoff(p.N - 1)) : input;
  double res_deficit = 0.0;
  const auto res = components(prepare_resource(p, opt), res_deficit);
  return run_mixture(p, spectral(in), res, combine_deficit(input.trace_deficit(), res_deficit), opt);
}

DensityOperator normalized_output(const PatternResult& r) { return r.output.normalized(); }

RelayRun run_relay(const ProtocolParams& p, int a_prime, const TeleampOptions& opt) {
  p.validate();
  if (a_prime < 1 || a_prime > p.N) throw std::domain_error("run_relay: a' must lie in 1..N");
  const cplx a_in = omega(p.N, a_prime) * p.alpha;
  const auto input = make_coherent(a_in, auto_cutoff(std::abs(p.alpha)), opt.leak_tol);
  RelayRun rr;
  rr.run = run_teleamp(p, input, opt);
  const auto& first = rr.run.patterns.front();
  if (first.probability <= 0.0) return rr;
  const auto bob = first.output.normalized();
  rr.bob_purity = bob.purity();
  const FockCutoff c = bob.cutoff(0);
  rr.bob_fidelity = fidelity(bob, make_coherent(p.g * a_in, c, 1.0));
  if (p.eta < 1.0) {
    const std::array<int, 1> env{1};
    const auto e = std::visit([&](const auto& s) { return partial_trace(s, env); }, first.joint)
                       .normalized();
    for (std::size_t n = 0; n < e.dim(); ++n) rr.env_mean_photon += n * e(n, n).real();
  }
  return rr;
}

}  // namespace catamp
