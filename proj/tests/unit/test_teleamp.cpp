#include "catamp/teleamp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "catamp/channels.hpp"
#include "catamp/linear_optics.hpp"
#include "catamp/states.hpp"
#include "test_util.hpp"

namespace catamp {
namespace {

using testing::random_vector;

const FockState& pure_joint(const PatternResult& r) { return std::get<FockState>(r.joint); }

FockState coherent_at(cplx a, FockCutoff c) { return make_coherent(a, c, 1.0); }

// sum_b omega^b |x omega^b>|y omega^b>, built from coherent states only.
FockState two_mode_cat(int N, cplx x, cplx y, FockCutoff c) {
  ModeShape shape({c.dim(), c.dim()});
  std::vector<cplx> amps(shape.size(), 0.0);
  for (int b = 1; b <= N; ++b) {
    const auto t = tensor(coherent_at(omega(N, b) * x, c), coherent_at(omega(N, b) * y, c));
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] += omega(N, b) * t[i];
  }
  return FockState(shape, std::move(amps));
}

TEST(Resource, MatchesCoherentExpansion) {
  for (int N : {2, 3, 4}) {
    const ProtocolParams p{N, 0.6, 1.7, 1.0};
    const auto r = std::get<FockState>(prepare_resource(p));
    const auto expect = two_mode_cat(N, -p.alpha, p.g * p.alpha, r.cutoff(0));
    EXPECT_GT(fidelity(r, expect), 1.0 - 1e-10) << "N=" << N;
  }
}

TEST(Resource, LossyChannelEnvironmentAmplitude) {
  // After the channel splitter the resource is sum_b omega^b |-w^b a>|w^b g a>|w^b eps>.
  const int N = 3;
  const ProtocolParams p{N, 0.5, 1.5, 0.6};
  const auto r = std::get<FockState>(prepare_resource(p));
  const FockCutoff c = r.cutoff(0);
  const auto with_env = apply_beam_splitter(tensor(r, vacuum(c)), 2, 0, p.eta);
  ModeShape shape({c.dim(), c.dim(), c.dim()});
  std::vector<cplx> amps(shape.size(), 0.0);
  for (int b = 1; b <= N; ++b) {
    const cplx w = omega(N, b);
    const auto t = tensor({coherent_at(-w * p.alpha, c), coherent_at(w * p.g * p.alpha, c),
                           coherent_at(w * p.eps(), c)});
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] += w * t[i];
  }
  EXPECT_GT(fidelity(with_env, FockState(shape, std::move(amps))), 1.0 - 1e-9);
}

TEST(Resource, ZeroGainLeavesKeptModeEmpty) {
  const ProtocolParams p{3, 0.7, 0.0, 1.0};
  const auto r = std::get<FockState>(prepare_resource(p));
  const auto cat = make_cat(3, -p.beta(), r.cutoff(0));
  EXPECT_GT(fidelity(r, tensor(cat, vacuum(r.cutoff(1)))), 1.0 - 1e-12);
}

TEST(Resource, ResourceLossMakesItMixed) {
  TeleampOptions opt;
  opt.eta_res = 0.7;
  const auto r = std::get<DensityOperator>(prepare_resource({3, 0.6, 1.5, 1.0}, opt));
  EXPECT_NEAR(r.trace(), 1.0, 1e-8);
  EXPECT_LT(r.purity(), 0.99);
}

TEST(Teleamp, CoherentSuperpositionIsAmplified) {
  std::mt19937 rng(11);
  for (int N : {2, 3, 4}) {
    const ProtocolParams p{N, 0.5, 2.0, 1.0};
    const auto c = random_vector(rng, N);
    const auto in = coherent_superposition(N, p.alpha, c, auto_cutoff(std::abs(p.alpha)));
    const auto run = run_teleamp(p, in);
    ASSERT_EQ(static_cast<int>(run.patterns.size()), N);
    const auto& first = run.patterns.front();
    const FockState& out = pure_joint(first);
    const auto expect = coherent_superposition(N, p.g * p.alpha, c, out.cutoff(0), 1.0);
    EXPECT_GT(fidelity(out, expect), 1.0 - 1e-7) << "N=" << N;
    const double pred = success_prob_general_normalized(p, c);
    EXPECT_NEAR(first.probability / in.norm_sq(), pred, 1e-6 * pred) << "N=" << N;
  }
}

TEST(Teleamp, FockRatiosScaleAsGainPower) {
  // c_out(n) / c_in(n) is proportional to g^n on the coherent-superposition manifold.
  std::mt19937 rng(5);
  const int N = 3;
  const ProtocolParams p{N, 0.6, 1.8, 1.0};
  const auto c = random_vector(rng, N);
  const auto in = coherent_superposition(N, p.alpha, c, auto_cutoff(std::abs(p.alpha)));
  const auto run = run_teleamp(p, in);
  const auto& out = pure_joint(run.patterns.front());
  std::vector<cplx> r;
  for (int n = 0; n <= 6; ++n) {
    if (std::abs(in[n]) < 1e-6) continue;
    r.push_back(out[n] / in[n] / std::pow(p.g, n));
  }
  ASSERT_GE(r.size(), 4u);
  for (std::size_t k = 1; k < r.size(); ++k) EXPECT_LT(std::abs(r[k] / r[0] - 1.0), 1e-6);
}

TEST(Teleamp, UnitGainReproducesInput) {
  std::mt19937 rng(2);
  const ProtocolParams p{3, 0.5, 1.0, 1.0};
  const auto c = random_vector(rng, 3);
  const auto in = coherent_superposition(3, p.alpha, c, auto_cutoff(std::abs(p.alpha)));
  const auto run = run_teleamp(p, in);
  const auto& out = pure_joint(run.patterns.front());
  const auto expect = coherent_superposition(3, p.alpha, c, out.cutoff(0), 1.0);
  EXPECT_GT(fidelity(out, expect), 1.0 - 1e-8);
}

TEST(Teleamp, OffGridCoherentMatchesPrediction) {
  for (double eta : {1.0, 0.5}) {
    const ProtocolParams p{3, 0.6, 1.6, eta};
    for (cplx gamma : {cplx(0.4, 0.1), cplx(-0.3, 0.5), cplx(0.9, 0.0)}) {
      const auto in = make_coherent(gamma, auto_cutoff(std::abs(gamma)));
      const auto run = run_teleamp(p, in);
      const auto& first = run.patterns.front();
      const auto pred = arbitrary_coherent_prediction(p, gamma);
      EXPECT_NEAR(first.probability, pred.success_prob, 1e-6 * pred.success_prob);
      const auto bob = first.output.normalized();
      const double f = fidelity(bob, coherent_at(p.g * gamma, bob.cutoff(0)));
      EXPECT_NEAR(f, pred.fidelity, 1e-6) << "eta=" << eta << " gamma=" << gamma;
    }
  }
}

TEST(Teleamp, AllPatternsEquivalentAfterCorrection) {
  for (int N : {2, 3, 4, 5}) {
    const ProtocolParams p{N, 0.5, 1.5, 1.0};
    const auto in = make_coherent(omega(N, 2) * p.alpha, auto_cutoff(std::abs(p.alpha)));
    const auto run = run_teleamp(p, in);
    ASSERT_EQ(static_cast<int>(run.patterns.size()), N);
    const auto& ref = pure_joint(run.patterns.front());
    const double p1 = run.patterns.front().probability;
    for (const auto& r : run.patterns) {
      EXPECT_NEAR(r.probability, p1, 1e-10 * p1) << "N=" << N << " m0=" << r.pattern.m0();
      EXPECT_GT(fidelity(pure_joint(r), ref), 1.0 - 1e-8);
    }
    EXPECT_NEAR(run.total_prob, N * p1, 1e-10 * N * p1);
    EXPECT_NEAR(p1, success_prob_coherent(p), 1e-6 * p1);
  }
}

TEST(Teleamp, UncorrectedPatternsAreRotated) {
  const int N = 4;
  const ProtocolParams p{N, 0.5, 1.5, 1.0};
  const auto in = make_coherent(p.alpha, auto_cutoff(std::abs(p.alpha)));
  TeleampOptions raw;
  raw.apply_correction = false;
  const auto physical = run_teleamp(p, in);
  const auto virt = run_teleamp(p, in, raw);
  for (int m = 0; m < N; ++m) {
    const double phi = -2.0 * std::numbers::pi * m / N;
    const auto fixed = apply_phase(virt.patterns[m].output, 0, phi);
    EXPECT_LT(testing::max_abs_diff(fixed.data(), physical.patterns[m].output.data()), 1e-13);
    if (m > 0) {
      const auto bob = virt.patterns[m].output.normalized();
      EXPECT_LT(fidelity(bob, coherent_at(p.g * p.alpha, bob.cutoff(0))), 0.9);
    }
  }
}

TEST(Teleamp, SinglePatternMode) {
  TeleampOptions opt;
  opt.accept_all_patterns = false;
  const ProtocolParams p{3, 0.5, 1.5, 1.0};
  const auto run = run_teleamp(p, make_coherent(p.alpha, auto_cutoff(std::abs(p.alpha))), opt);
  ASSERT_EQ(run.patterns.size(), 1u);
  EXPECT_EQ(run.patterns[0].pattern.m0(), 1);
  EXPECT_DOUBLE_EQ(run.total_prob, run.patterns[0].probability);
}

TEST(Teleamp, HeraldTruncationIsExact) {
  std::mt19937 rng(9);
  for (int N : {2, 3}) {
    const ProtocolParams p{N, 0.45, 1.4, N == 2 ? 0.7 : 1.0};
    const auto c = random_vector(rng, N);
    const auto in = coherent_superposition(N, p.alpha, c, auto_cutoff(std::abs(p.alpha))).normalized();
    TeleampOptions full;
    full.herald_truncation = false;
    const auto a = run_teleamp(p, in);
    const auto b = run_teleamp(p, in, full);
    for (int m = 0; m < N; ++m) {
      EXPECT_NEAR(a.patterns[m].probability, b.patterns[m].probability, 1e-12);
      EXPECT_LT(testing::max_abs_diff(a.patterns[m].output.data(), b.patterns[m].output.data()),
                1e-12);
    }
  }
}

TEST(Teleamp, CountOutcomesSumToOne) {
  // Splitter modes embedded at 12 photons hold every outcome of two 6-photon inputs.
  const ProtocolParams p{2, 0.25, 1.2, 1.0};
  TeleampOptions opt;
  opt.cutoff = 6;
  const auto in = make_coherent(p.alpha, FockCutoff(6));
  const auto res = std::get<FockState>(prepare_resource(p, opt));
  const auto joint = tensor(testing::embed(in, {13}), testing::embed(res, {13, 7}));
  const std::vector<int> measured{0, 1};
  const auto out = apply_interferometer(joint, dft_matrix(2), measured);
  double total = 0.0, herald = 0.0;
  for (int a = 0; a <= 12; ++a)
    for (int b = 0; b <= 12; ++b) {
      const std::vector<int> counts{a, b};
      const double pr = project_counts(out, measured, counts).probability;
      total += pr;
      if (a + b == 1) herald += pr;
    }
  EXPECT_NEAR(total, 1.0, 1e-8);
  EXPECT_NEAR(herald, run_teleamp(p, in, opt).total_prob, 1e-12);
}

TEST(Teleamp, InputSideLossOnlyRescalesAmplitude) {
  // A coherent state sent through loss eta_in arrives as |sqrt(eta_in) alpha_s>;
  // the protocol tuned to that amplitude returns it amplified by g.
  const cplx alpha_s(0.8, 0.3);
  const double eta_in = 0.45;
  const ProtocolParams p{3, std::sqrt(eta_in) * alpha_s, 1.7, 0.8};
  const auto sent = make_coherent(alpha_s, auto_cutoff(std::abs(alpha_s)));
  const auto lossy = run_teleamp(p, loss_channel(sent, 0, eta_in));
  const auto direct = run_teleamp(p, make_coherent(p.alpha, auto_cutoff(std::abs(alpha_s))));
  for (int m = 0; m < 3; ++m) {
    const auto& x = lossy.patterns[m];
    const auto& y = direct.patterns[m];
    EXPECT_NEAR(x.probability, y.probability, 1e-10);
    EXPECT_LT(testing::max_abs_diff(x.output.data(), y.output.data()), 1e-10);
    const auto bob = x.output.normalized();
    EXPECT_GT(fidelity(bob, coherent_at(p.g * p.alpha, bob.cutoff(0))), 1.0 - 1e-8);
  }
  EXPECT_NEAR(lossy.patterns[0].probability, success_prob_coherent(p),
              1e-6 * success_prob_coherent(p));
}

TEST(Teleamp, MixedPathAgreesWithPurePath) {
  std::mt19937 rng(8);
  const ProtocolParams p{3, 0.5, 1.6, 0.7};
  const auto c = random_vector(rng, 3);
  const auto in = coherent_superposition(3, p.alpha, c, auto_cutoff(std::abs(p.alpha))).normalized();
  const auto pure = run_teleamp(p, in);
  const auto mixed = run_teleamp(p, DensityOperator::from_pure(in));
  for (int m = 0; m < 3; ++m) {
    EXPECT_NEAR(pure.patterns[m].probability, mixed.patterns[m].probability, 1e-12);
    EXPECT_LT(testing::max_abs_diff(pure.patterns[m].output.data(), mixed.patterns[m].output.data()),
              1e-12);
    const auto joint = DensityOperator::from_pure(pure_joint(pure.patterns[m]));
    EXPECT_LT(testing::max_abs_diff(joint.data(),
                                    std::get<DensityOperator>(mixed.patterns[m].joint).data()),
              1e-12);
  }
}

TEST(Teleamp, ResourceLossDegradesOutput) {
  const ProtocolParams p{3, 0.5, 1.6, 1.0};
  const auto in = make_coherent(p.alpha, auto_cutoff(std::abs(p.alpha)));
  TeleampOptions opt;
  opt.eta_res = 0.8;
  const auto run = run_teleamp(p, in, opt);
  const auto& first = run.patterns.front();
  EXPECT_GT(first.probability, 0.0);
  const auto bob = first.output.normalized();
  EXPECT_LT(bob.purity(), 0.999);
  EXPECT_LT(fidelity(bob, coherent_at(p.g * p.alpha, bob.cutoff(0))), 0.999);
  EXPECT_GT(bob.min_eigenvalue(), -1e-12);
  EXPECT_LT(bob.hermiticity_error(), 1e-12);
}

TEST(Relay, OnGridOutputIsPureAndAmplified) {
  for (int N : {2, 3, 4}) {
    for (double eta : {0.9, 0.5, 0.1}) {
      const ProtocolParams p{N, 0.5, 2.0, eta};
      for (int a = 1; a <= N; ++a) {
        const auto rr = run_relay(p, a);
        EXPECT_GT(rr.bob_fidelity, 1.0 - 1e-8) << "N=" << N << " eta=" << eta << " a'=" << a;
        EXPECT_GT(rr.bob_purity, 1.0 - 1e-8);
        EXPECT_NEAR(rr.env_mean_photon, std::norm(p.eps()), 1e-8 * (1.0 + std::norm(p.eps())));
      }
    }
  }
}

TEST(Relay, EnvironmentCarriesPhaseInformation) {
  // For a superposition input the heralded environment is entangled with Bob.
  std::mt19937 rng(4);
  const int N = 3;
  const ProtocolParams p{N, 0.5, 2.0, 0.3};
  const auto c = random_vector(rng, N);
  const auto in = coherent_superposition(N, p.alpha, c, auto_cutoff(std::abs(p.alpha)));
  const auto run = run_teleamp(p, in);
  const auto& first = run.patterns.front();
  EXPECT_LT(first.output.normalized().purity(), 0.99);

  const auto& joint = std::get<FockState>(first.joint);
  const FockCutoff k = joint.cutoff(0);
  ModeShape shape({k.dim(), joint.cutoff(1).dim()});
  std::vector<cplx> amps(shape.size(), 0.0);
  for (int a = 1; a <= N; ++a) {
    const cplx w = omega(N, a);
    const auto t = tensor(coherent_at(w * p.g * p.alpha, k), coherent_at(w * p.eps(), joint.cutoff(1)));
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] += c[a - 1] * t[i];
  }
  EXPECT_GT(fidelity(joint, FockState(shape, std::move(amps))), 1.0 - 1e-8);
  EXPECT_NEAR(first.probability / in.norm_sq(), success_prob_general_normalized(p, c),
              1e-6 * first.probability / in.norm_sq());
}

TEST(Relay, LosslessHasNoEnvironment) {
  const auto rr = run_relay({3, 0.5, 2.0, 1.0}, 2);
  EXPECT_EQ(rr.env_mean_photon, 0.0);
  EXPECT_GT(rr.bob_purity, 1.0 - 1e-10);
  EXPECT_EQ(rr.run.patterns.front().output.modes(), 1);
  EXPECT_EQ(std::get<FockState>(rr.run.patterns.front().joint).modes(), 1);
}

TEST(Teleamp, ReportsTruncationDeficit) {
  TeleampOptions opt;
  opt.cutoff = 4;
  opt.leak_tol = 1.0;
  const ProtocolParams p{2, 1.0, 2.0, 1.0};
  const auto run = run_teleamp(p, make_coherent(p.alpha, auto_cutoff(1.0)), opt);
  EXPECT_GT(run.norm_deficit, 1e-3);
}

TEST(Teleamp, RejectsBadArguments) {
  const auto in = make_coherent(0.5, auto_cutoff(0.5));
  EXPECT_THROW(run_teleamp({1, 0.5, 1.0, 1.0}, in), std::domain_error);
  EXPECT_THROW(run_teleamp({2, 0.5, -1.0, 1.0}, in), std::domain_error);
  EXPECT_THROW(run_teleamp({2, 0.5, 1.0, 0.0}, in), std::domain_error);
  EXPECT_THROW(run_teleamp({2, 0.5, 1.0, 1.0}, tensor(in, in)), std::domain_error);
  EXPECT_THROW(run_relay({3, 0.5, 1.0, 1.0}, 4), std::domain_error);
  TeleampOptions bad;
  bad.eta_res = 0.0;
  EXPECT_THROW(run_teleamp({2, 0.5, 1.0, 1.0}, in, bad), std::domain_error);
}

}  // namespace
}  // namespace catamp
