#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "catamp/channels.hpp"
#include "catamp/kernels.hpp"
#include "catamp/linear_optics.hpp"
#include "catamp/moments.hpp"
#include "catamp/reference.hpp"
#include "catamp/serialize.hpp"
#include "catamp/states.hpp"
#include "test_util.hpp"

using namespace catamp;
using catamp::testing::max_abs_diff;

namespace {

double lfact(int n) { return std::lgamma(n + 1.0); }

FockState coherent_product(const std::vector<cplx>& amps, FockCutoff c) {
  std::vector<FockState> parts;
  for (auto a : amps) parts.push_back(make_coherent(a, c));
  return tensor(parts);
}

}  // namespace

TEST(Cutoff, RejectsZeroAndFollowsHeuristic) {
  EXPECT_THROW(FockCutoff(0), std::domain_error);
  EXPECT_EQ(auto_cutoff(0.0).n_max(), 10);
  EXPECT_EQ(auto_cutoff(1.0).n_max(), 17);
  EXPECT_EQ(auto_cutoff(2.0).n_max(), 26);
}

TEST(Coherent, VacuumAndSeriesTerms) {
  const auto vac = make_coherent(0.0, FockCutoff(5));
  EXPECT_EQ(vac[0], cplx(1.0));
  for (int n = 1; n <= 5; ++n) EXPECT_EQ(vac[n], cplx(0.0));

  const auto s = make_coherent(0.5, FockCutoff(10));
  EXPECT_NEAR(s[1].real(), 0.441248451292298, 1e-14);

  const cplx alpha = std::polar(1.3, 0.7);
  const auto c = make_coherent(alpha, FockCutoff(25));
  for (int n = 0; n <= 25; ++n) {
    const cplx expect = std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, n) / std::exp(0.5 * lfact(n));
    EXPECT_NEAR(std::abs(c[n] - expect), 0.0, 1e-14) << n;
  }
}

TEST(Coherent, TruncationLeakIsReportedAndEnforced) {
  // Poisson tail sum_{n>10} e^{-1}/n! evaluated to 30 digits offline.
  const double tail = 1.00477663756909e-8;
  const auto s = make_coherent(1.0, FockCutoff(10), 1e-7);
  EXPECT_NEAR(s.norm_deficit(), tail, 1e-20);
  EXPECT_NEAR(1.0 - s.norm_sq(), tail, 1e-15);
  try {
    make_coherent(1.0, FockCutoff(10));
    FAIL() << "expected TruncationError";
  } catch (const TruncationError& e) {
    EXPECT_NEAR(e.retained_norm(), 1.0 - tail, 1e-15);
  }
  EXPECT_LE(make_coherent(1.0, FockCutoff(11)).norm_deficit(), 1e-8);
}

TEST(Cat, SmallAmplitudeApproachesFockState) {
  const auto cat = make_cat(2, 1e-4, FockCutoff(10));
  EXPECT_GE(fidelity(cat, make_fock(1, FockCutoff(10))), 1 - 1e-6);
  EXPECT_NEAR(fidelity(make_cat(3, 0.0, FockCutoff(8)), make_fock(2, FockCutoff(8))), 1.0, 1e-15);
  EXPECT_GE(fidelity(make_cat(3, 1e-3, FockCutoff(8)), make_fock(2, FockCutoff(8))), 1 - 1e-6);
}

TEST(Cat, SupportIsKNMinusOne) {
  const auto cat = make_cat(3, 1.2, FockCutoff(30));
  for (int n = 0; n <= 30; ++n)
    if ((n + 1) % 3 != 0) EXPECT_LE(std::abs(cat[n]), 1e-12) << n;
  EXPECT_NEAR(cat.norm_sq(), 1.0 - cat.norm_deficit(), 1e-12);
}

TEST(Cat, CoefficientsFollowSeries) {
  const double beta = 1.0;
  const auto cat = make_cat(2, beta, FockCutoff(20));
  double z = 0.0;
  for (int k = 1; 2 * k - 1 <= 60; ++k) z += std::exp(2 * (2 * k - 1) * std::log(beta) - lfact(2 * k - 1));
  for (int k = 1; 2 * k - 1 <= 20; ++k) {
    const double expect = std::exp((2 * k - 1) * std::log(beta) - 0.5 * lfact(2 * k - 1)) / std::sqrt(z);
    EXPECT_NEAR(cat[2 * k - 1].real(), expect, 1e-13);
  }
}

TEST(Cat, MatchesCoherentSuperposition) {
  const int N = 3;
  const cplx beta = std::polar(1.1, 0.4);
  const FockCutoff c(30);
  std::vector<cplx> w;
  for (int b = 1; b <= N; ++b) w.push_back(omega(N, b));
  const auto direct = coherent_superposition(N, beta, w, c);
  EXPECT_GE(fidelity(make_cat(N, beta, c), direct), 1 - 1e-12);
}

TEST(Tmsv, SchmidtAmplitudesAndThermalMarginal) {
  const auto vac = make_tmsv(0.0, FockCutoff(3));
  EXPECT_EQ(vac.at({0, 0}), cplx(1.0));
  const double chi = 0.25;
  const auto t = make_tmsv(chi, FockCutoff(12));
  EXPECT_NEAR(t.at({1, 1}).real(), 0.242061459137964, 1e-14);
  EXPECT_THROW(make_tmsv(1.0, FockCutoff(3)), std::domain_error);

  const std::array<int, 1> keep{0};
  const auto red = partial_trace(t, keep);
  double mean = 0.0;
  for (int n = 0; n <= 12; ++n) {
    EXPECT_NEAR(red(n, n).real(), (1 - chi * chi) * std::pow(chi, 2 * n), 1e-15);
    mean += n * red(n, n).real();
  }
  EXPECT_NEAR(mean, 1.0 / 15.0, 1e-8);
  EXPECT_LE(red.hermiticity_error(), 1e-15);
}

TEST(Tmsv, CutoffFromLeak) {
  const auto c = tmsv_cutoff(0.25, 1e-8);
  EXPECT_LE(std::pow(0.25, 2 * (c.n_max() + 1)), 1e-8);
  EXPECT_GT(std::pow(0.25, 2 * c.n_max()), 1e-8);
}

TEST(Fock, IndexAndRange) {
  const auto f = make_fock(2, FockCutoff(5));
  for (int n = 0; n <= 5; ++n) EXPECT_EQ(f[n], cplx(n == 2 ? 1.0 : 0.0));
  EXPECT_THROW(make_fock(6, FockCutoff(5)), std::domain_error);
}

TEST(Tensor, NormsMultiplyAndLayoutIsRowMajor) {
  std::mt19937 rng(1);
  const auto a = FockState(ModeShape({3}), catamp::testing::random_vector(rng, 3));
  const auto b = FockState(ModeShape({4}), catamp::testing::random_vector(rng, 4));
  const auto ab = tensor(a, b);
  EXPECT_NEAR(ab.norm_sq(), a.norm_sq() * b.norm_sq(), 1e-12);
  EXPECT_EQ(ab.at({2, 1}), a[2] * b[1]);
  const auto vv = tensor(vacuum(FockCutoff(2)), vacuum(FockCutoff(2)));
  EXPECT_EQ(vv.modes(), 2);
  EXPECT_EQ(vv.at({0, 0}), cplx(1.0));
}

TEST(BeamSplitter, IdentityAtFullTransmission) {
  std::mt19937 rng(2);
  const auto psi = catamp::testing::random_state(rng, {4, 5});
  const auto out = apply_beam_splitter(psi, 0, 1, 1.0);
  EXPECT_LE(max_abs_diff(out.amplitudes(), psi.amplitudes()), 1e-15);
  EXPECT_THROW(apply_beam_splitter(psi, 0, 1, 1.5), std::domain_error);
  EXPECT_THROW(apply_beam_splitter(psi, 1, 1, 0.5), std::domain_error);
}

TEST(BeamSplitter, SinglePhotonAtBalance) {
  // With x -> U x and U = [[t, -r], [r, t]], a_1^+ -> t a_1^+ + r a_2^+.
  const auto in = tensor(make_fock(1, FockCutoff(2)), vacuum(FockCutoff(2)));
  const auto out = apply_beam_splitter(in, 0, 1, 0.5);
  EXPECT_NEAR(std::abs(out.at({1, 0}) - std::sqrt(0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.at({0, 1}) - std::sqrt(0.5)), 0.0, 1e-15);
  const auto in2 = tensor(vacuum(FockCutoff(2)), make_fock(1, FockCutoff(2)));
  const auto out2 = apply_beam_splitter(in2, 0, 1, 0.5);
  EXPECT_NEAR(std::abs(out2.at({1, 0}) + std::sqrt(0.5)), 0.0, 1e-15);
}

TEST(BeamSplitter, SplitsCatIntoEntangledResource) {
  const int N = 2;
  const double alpha = 0.5, g = 1.0;
  const double tau = g * g / (1 + g * g);
  const double beta = alpha * std::sqrt(1 + g * g);
  const FockCutoff c = auto_cutoff(beta);
  const auto out = apply_beam_splitter(tensor(vacuum(c), make_cat(N, beta, c)), 0, 1, tau);
  std::vector<cplx> acc(out.size(), 0.0);
  for (int b = 1; b <= N; ++b) {
    const cplx w = omega(N, b);
    const auto term = tensor(make_coherent(-w * alpha, c), make_coherent(w * g * alpha, c));
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * term[i];
  }
  EXPECT_GE(fidelity(out, FockState(out.shape(), acc)), 1 - 1e-8);
  EXPECT_NEAR(out.norm_sq(), 1.0, 1e-10);
}

TEST(Dft, EntriesAndSymmetry) {
  const auto s2 = dft_matrix(2);
  const double h = std::sqrt(0.5);
  EXPECT_NEAR(std::abs(s2(0, 0) - h), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s2(1, 1) + h), 0.0, 1e-15);
  const auto s3 = dft_matrix(3);
  const cplx w3 = std::polar(1.0, -2 * std::numbers::pi / 3);
  EXPECT_NEAR(std::abs(s3(1, 1) - w3 / std::sqrt(3.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s3(1, 2) - w3 * w3 / std::sqrt(3.0)), 0.0, 1e-15);
  for (int N = 1; N <= 12; ++N) {
    const auto s = dft_matrix(N);
    EXPECT_LE(s.unitarity_error(), 1e-12);
    for (int j = 0; j + 1 < N; ++j)
      for (int k = 0; k < N; ++k)
        EXPECT_NEAR(std::abs(s(j + 1, k) - s(j, k) * omega(N, k)), 0.0, 1e-14);
  }
}

TEST(Interferometer, DecompositionReproducesMatrix) {
  std::mt19937 rng(3);
  for (int n : {2, 3, 5, 7}) {
    const auto S = catamp::testing::random_unitary(rng, n);
    const auto mesh = decompose(S);
    for (int k = 0; k < n; ++k) {
      std::vector<cplx> x(n, 0.0);
      x[k] = 1.0;
      for (int m = 0; m < n; ++m) x[m] *= std::polar(1.0, mesh.phases[m]);
      for (const auto& r : mesh.rotations) {
        const cplx a = x[r.mode], b = x[r.mode + 1];
        x[r.mode] = r.u[0] * a + r.u[1] * b;
        x[r.mode + 1] = r.u[2] * a + r.u[3] * b;
      }
      for (int m = 0; m < n; ++m) EXPECT_NEAR(std::abs(x[m] - S(m, k)), 0.0, 1e-12);
    }
  }
}

TEST(Interferometer, IdentityLeavesStateUnchanged) {
  std::mt19937 rng(4);
  const auto psi = catamp::testing::random_state(rng, {3, 3, 3});
  const std::array<int, 3> modes{0, 1, 2};
  const auto out = apply_interferometer(psi, ScatteringMatrix::identity(3), modes);
  EXPECT_LE(max_abs_diff(out.amplitudes(), psi.amplitudes()), 1e-15);
  EXPECT_THROW(ScatteringMatrix(2, {1.0, 1.0, 0.0, 1.0}), std::domain_error);
}

TEST(Interferometer, BalancedSplitterOnCoherentPair) {
  const cplx gamma(0.4, 0.2), alpha(0.5, -0.1);
  const FockCutoff c(20);
  const std::array<int, 2> modes{0, 1};
  const auto out = apply_interferometer(coherent_product({gamma, -alpha}, c), dft_matrix(2), modes);
  const double h = std::sqrt(0.5);
  EXPECT_GE(fidelity(out, coherent_product({(gamma - alpha) * h, (gamma + alpha) * h}, c)), 1 - 1e-12);
}

TEST(Interferometer, DftOnHeraldInputGivesInterferenceAmplitudes) {
  for (int N : {2, 3, 4}) {
    const double alpha = 0.6;
    const FockCutoff c(12);
    const int a = 1, b = N - 1;
    std::vector<cplx> in(N, 0.0);
    in[0] = omega(N, a) * alpha;
    in[1] = -omega(N, b) * alpha;
    std::vector<int> modes(N);
    for (int k = 0; k < N; ++k) modes[k] = k;
    const auto out = apply_interferometer(coherent_product(in, c), dft_matrix(N), modes);
    std::vector<cplx> expect(N);
    for (int m = 1; m <= N; ++m)
      expect[m - 1] = (omega(N, a) - omega(N, b + m - 1)) * alpha / std::sqrt(double(N));
    EXPECT_GE(fidelity(out, coherent_product(expect, c)), 1 - 1e-10) << N;
  }
}

TEST(Interferometer, CoherentCovarianceForRandomUnitaries) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 3;
    const auto S = catamp::testing::random_unitary(rng, n);
    std::vector<cplx> g(n);
    for (auto& x : g) x = {u(rng), u(rng)};
    const FockCutoff c = auto_cutoff(1.5);
    const std::array<int, 3> modes{0, 1, 2};
    const auto out = apply_interferometer(coherent_product(g, c), S, modes);
    EXPECT_GE(fidelity(out, coherent_product(S.apply(g), c)), 1 - 1e-9);
    EXPECT_NEAR(out.norm_sq(), 1.0, 1e-9);
  }
}

TEST(Interferometer, MeshAgreesWithDirectExpansion) {
  std::mt19937 rng(6);
  const auto psi = catamp::testing::random_state(rng, {3, 3, 3, 2});
  const auto S = catamp::testing::random_unitary(rng, 3);
  // Permuted mode order exercises the general path; a cutoff of 8 per mode
  // holds every output of up to 6 input photons exactly.
  const auto padded = catamp::testing::embed(psi, {9, 9, 9, 2});
  const std::array<int, 3> modes{2, 0, 1};
  const auto mesh = apply_interferometer(padded, S, modes);
  const auto direct = reference::apply_interferometer_direct(padded, S.entries(), modes);
  EXPECT_LE(max_abs_diff(mesh.amplitudes(), direct.amplitudes()), 1e-12);
  EXPECT_NEAR(mesh.norm_sq(), 1.0, 1e-12);
}

TEST(Kernels, TwoModeMatchesBinomialReference) {
  std::mt19937 rng(7);
  const auto psi = catamp::testing::random_state(rng, {4, 3, 6});
  const auto u = catamp::testing::random_unitary(rng, 2).entries();
  const kernels::Mat2 m{u[0], u[1], u[2], u[3]};
  for (auto [i, j] : {std::pair{0, 2}, std::pair{2, 1}, std::pair{1, 0}}) {
    std::vector<cplx> a(psi.size()), b(psi.size());
    kernels::two_mode_unitary(psi.shape(), psi.amplitudes(), a, i, j, m);
    reference::two_mode_unitary(psi.shape(), psi.amplitudes(), b, i, j, m);
    EXPECT_LE(max_abs_diff(a, b), 1e-13);
  }
}

TEST(Kernels, PhaseLossAndTraceMatchReference) {
  std::mt19937 rng(8);
  const auto rho = catamp::testing::random_density(rng, {3, 4}, 3);
  std::vector<cplx> a(rho.data().begin(), rho.data().end()), b = a;
  const ModeShape big({3, 4, 3, 4});
  kernels::phase_shift(big, a, 3, 0.7);
  reference::phase_shift(big, b, 3, 0.7);
  EXPECT_LE(max_abs_diff(a, b), 1e-15);

  std::vector<cplx> la(a.size()), lb(a.size());
  kernels::pure_loss(rho.shape(), rho.data(), la, 1, 0.37);
  reference::pure_loss(rho.shape(), rho.data(), lb, 1, 0.37);
  EXPECT_LE(max_abs_diff(la, lb), 1e-14);

  const std::array<int, 1> keep{1};
  std::vector<cplx> ta(16), tb(16);
  kernels::partial_trace(rho.shape(), rho.data(), keep, ta);
  reference::partial_trace(rho.shape(), rho.data(), keep, tb);
  EXPECT_LE(max_abs_diff(ta, tb), 1e-15);
}

TEST(Loss, IdentityAtUnitTransmission) {
  std::mt19937 rng(9);
  const auto rho = catamp::testing::random_density(rng, {4}, 2);
  const auto out = loss_channel(rho, 0, 1.0);
  EXPECT_LE(max_abs_diff(out.data(), rho.data()), 1e-15);
  EXPECT_THROW(loss_channel(rho, 0, -0.1), std::domain_error);
}

TEST(Loss, CoherentStaysCoherent) {
  const cplx alpha(0.9, 0.3);
  const FockCutoff c(20);
  for (double eta : {0.9, 0.5, 0.05}) {
    const auto out = loss_channel(make_coherent(alpha, c), 0, eta);
    EXPECT_GE(fidelity(out, make_coherent(std::sqrt(eta) * alpha, c)), 1 - 1e-10);
    EXPECT_NEAR(out.trace(), 1.0, 1e-8);
  }
}

TEST(Loss, SinglePhotonDamping) {
  const auto out = loss_channel(make_fock(1, FockCutoff(3)), 0, 0.7);
  EXPECT_NEAR(out(0, 0).real(), 0.3, 1e-15);
  EXPECT_NEAR(out(1, 1).real(), 0.7, 1e-15);
  EXPECT_NEAR(std::abs(out(0, 1)), 0.0, 1e-15);
}

TEST(Loss, SemigroupTraceAndAncillaOracle) {
  std::mt19937 rng(10);
  const auto rho = catamp::testing::random_density(rng, {5, 3}, 4);
  const auto twice = loss_channel(loss_channel(rho, 0, 0.6), 0, 0.45);
  const auto once = loss_channel(rho, 0, 0.6 * 0.45);
  EXPECT_LE(max_abs_diff(twice.data(), once.data()), 1e-9);
  EXPECT_NEAR(once.trace(), 1.0, 1e-10);
  EXPECT_LE(once.hermiticity_error(), 1e-12);
  EXPECT_GE(once.min_eigenvalue(), -1e-9);
  const auto anc = loss_channel_ancilla(rho, 0, 0.27);
  EXPECT_LE(max_abs_diff(anc.data(), once.data()), 1e-12);
}

TEST(Projection, PatternsAndProbabilities) {
  const auto s = tensor(vacuum(FockCutoff(2)), make_fock(1, FockCutoff(2)));
  const std::array<int, 2> modes{0, 1};
  const auto pr = project_pattern(s, modes, HeraldPattern(2, 1));
  EXPECT_NEAR(pr.probability, 1.0, 1e-15);
  EXPECT_EQ(pr.remaining.modes(), 0);
  EXPECT_THROW(HeraldPattern(std::vector<int>{1, 1}), std::domain_error);
  EXPECT_THROW(HeraldPattern(std::vector<int>{0, 2}), std::domain_error);
  EXPECT_EQ(HeraldPattern(std::vector<int>{1, 0, 1}).m0(), 2);
  const std::array<int, 2> big{0, 3};
  EXPECT_THROW(project_counts(s, modes, big), std::domain_error);
}

TEST(Projection, OutcomeProbabilitiesSumToOne) {
  std::mt19937 rng(11);
  const auto rho = catamp::testing::random_density(rng, {3, 4, 2}, 2);
  const std::array<int, 2> measured{0, 2};
  double total = 0.0;
  for (int n0 = 0; n0 < 3; ++n0)
    for (int n2 = 0; n2 < 2; ++n2) {
      const std::array<int, 2> counts{n0, n2};
      const auto p = project_counts(rho, measured, counts);
      EXPECT_EQ(p.remaining.modes(), 1);
      total += p.probability;
    }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(PartialTrace, ProductAndPureAgree) {
  const auto vv = tensor(vacuum(FockCutoff(2)), vacuum(FockCutoff(3)));
  const std::array<int, 1> keep{0};
  const auto red = partial_trace(vv, keep);
  EXPECT_EQ(red.dim(), 3u);
  EXPECT_NEAR(red(0, 0).real(), 1.0, 1e-15);
  std::mt19937 rng(12);
  const auto psi = catamp::testing::random_state(rng, {3, 2, 4});
  const std::array<int, 2> k2{2, 0};
  const auto a = partial_trace(psi, k2);
  const auto b = partial_trace(DensityOperator::from_pure(psi), k2);
  EXPECT_LE(max_abs_diff(a.data(), b.data()), 1e-15);
  EXPECT_NEAR(a.trace(), 1.0, 1e-12);
}

TEST(Moments, VacuumCoherentAndTmsv) {
  const auto vac = covariance_matrix(DensityOperator::from_pure(tensor(vacuum(FockCutoff(3)), vacuum(FockCutoff(3)))), {0, 1});
  EXPECT_LE((vac.sigma - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE(vac.mean.cwiseAbs().maxCoeff(), 1e-14);

  const cplx alpha(0.7, -0.4);
  const auto coh = covariance_matrix(
      DensityOperator::from_pure(tensor(make_coherent(alpha, FockCutoff(20)), vacuum(FockCutoff(2)))), {0, 1});
  EXPECT_LE((coh.sigma - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_NEAR(coh.mean(0), 2 * alpha.real(), 1e-9);
  EXPECT_NEAR(coh.mean(1), 2 * alpha.imag(), 1e-9);

  const double chi = 0.5, r = std::atanh(chi);
  const auto t = covariance_matrix(DensityOperator::from_pure(make_tmsv(chi, tmsv_cutoff(chi, 1e-14))), {0, 1});
  Eigen::Matrix4d expect = Eigen::Matrix4d::Identity() * std::cosh(2 * r);
  expect(0, 2) = expect(2, 0) = std::sinh(2 * r);
  expect(1, 3) = expect(3, 1) = -std::sinh(2 * r);
  EXPECT_LE((t.sigma - expect).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Moments, UncertaintyRelationHoldsForRandomStates) {
  std::mt19937 rng(13);
  Eigen::Matrix4cd omega_m = Eigen::Matrix4cd::Zero();
  omega_m(0, 1) = omega_m(2, 3) = 1.0;
  omega_m(1, 0) = omega_m(3, 2) = -1.0;
  for (int t = 0; t < 5; ++t) {
    // Support kept two levels below the cutoff, so every moment is exact.
    const auto psi = catamp::testing::embed(catamp::testing::random_state(rng, {3, 3}), {5, 5});
    const auto rho = loss_channel(psi, 0, 0.8);
    const auto cm = covariance_matrix(rho, {0, 1});
    EXPECT_LE((cm.sigma - cm.sigma.transpose()).cwiseAbs().maxCoeff(), 1e-14);
    Eigen::Matrix4cd m = cm.sigma.cast<cplx>() + cplx(0, 1) * omega_m;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);
  }
}

TEST(Serialize, RoundTrip) {
  std::mt19937 rng(14);
  const auto psi = catamp::testing::random_state(rng, {3, 2});
  std::stringstream ss;
  write_state(ss, psi);
  const auto back = read_pure_state(ss);
  EXPECT_EQ(back.shape(), psi.shape());
  EXPECT_EQ(max_abs_diff(back.amplitudes(), psi.amplitudes()), 0.0);

  const auto rho = catamp::testing::random_density(rng, {2, 2}, 2);
  std::stringstream sm;
  write_state(sm, rho);
  const auto rb = read_mixed_state(sm);
  EXPECT_EQ(max_abs_diff(rb.data(), rho.data()), 0.0);
  std::stringstream bad("catamp-state 1 pure\ndims 2\n");
  EXPECT_THROW(read_pure_state(bad), std::runtime_error);
}
