#include "catamp/moments.hpp"

#include <cmath>

#include "catamp/channels.hpp"

namespace catamp {

namespace {

// Ladder operators of the two kept modes, in the order (a1, a1^+, a2, a2^+).
struct Ladder {
  int mode;
  bool dagger;
};
constexpr std::array<Ladder, 4> kLadder{{{0, false}, {0, true}, {1, false}, {1, true}}};

// Acts with op on basis index idx in place; returns the matrix element or 0
// when the result leaves the truncated space.
double act(const Ladder& op, std::array<int, 2>& idx, const std::array<int, 2>& dims) {
  int& n = idx[op.mode];
  if (op.dagger) {
    if (n + 1 >= dims[op.mode]) return 0.0;
    ++n;
    return std::sqrt(static_cast<double>(n));
  }
  if (n == 0) return 0.0;
  const double v = std::sqrt(static_cast<double>(n));
  --n;
  return v;
}

}  // namespace

CovarianceMatrix covariance_matrix(const DensityOperator& rho_in, std::array<int, 2> modes) {
  const DensityOperator rho2 =
      rho_in.modes() == 2 && modes[0] == 0 && modes[1] == 1 ? rho_in : partial_trace(rho_in, modes);
  const double tr = rho2.trace();
  if (!(tr > 0.0)) throw NumericalError("covariance_matrix: zero trace");
  if (rho2.min_eigenvalue() < -1e-9 * tr)
    throw NumericalError("covariance_matrix: density matrix is not positive semidefinite");
  const std::array<int, 2> dims{rho2.shape().dim(0), rho2.shape().dim(1)};
  const std::size_t d = rho2.dim();

  // <L_u> and <L_u L_v> = Tr(rho L_u L_v) = sum_c <c| rho L_u L_v |c>
  //                     = sum_{c} sum_r rho(c, r) <r| L_u L_v |c>.
  std::array<cplx, 4> first{};
  std::array<std::array<cplx, 4>, 4> second{};
  for (std::size_t c = 0; c < d; ++c) {
    const std::array<int, 2> ic{static_cast<int>(c) / dims[1], static_cast<int>(c) % dims[1]};
    for (int u = 0; u < 4; ++u) {
      auto i1 = ic;
      const double m1 = act(kLadder[u], i1, dims);
      if (m1 == 0.0) continue;
      first[u] += rho2(c, i1[0] * dims[1] + i1[1]) * m1;
    }
    for (int u = 0; u < 4; ++u) {
      for (int v = 0; v < 4; ++v) {
        auto i2 = ic;
        const double mv = act(kLadder[v], i2, dims);
        if (mv == 0.0) continue;
        const double mu = act(kLadder[u], i2, dims);
        if (mu == 0.0) continue;
        second[u][v] += rho2(c, i2[0] * dims[1] + i2[1]) * (mu * mv);
      }
    }
  }
  for (auto& f : first) f /= tr;
  for (auto& row : second)
    for (auto& s : row) s /= tr;

  // Truncation breaks [a, a^+] = 1 at the top level, so rebuild every product
  // from normal-ordered moments: a a^+ = a^+ a + 1.
  for (int m = 0; m < 2; ++m) second[2 * m][2 * m + 1] = second[2 * m + 1][2 * m] + 1.0;

  // q_i = sum_u C(i,u) L_u
  const cplx I(0.0, 1.0);
  Eigen::Matrix4cd C = Eigen::Matrix4cd::Zero();
  for (int m = 0; m < 2; ++m) {
    C(2 * m, 2 * m) = 1.0;
    C(2 * m, 2 * m + 1) = 1.0;
    C(2 * m + 1, 2 * m) = -I;
    C(2 * m + 1, 2 * m + 1) = I;
  }
  Eigen::Matrix4cd G;
  Eigen::Vector4cd L;
  for (int u = 0; u < 4; ++u) {
    L(u) = first[u];
    for (int v = 0; v < 4; ++v) G(u, v) = second[u][v];
  }
  const Eigen::Vector4cd q = C * L;
  const Eigen::Matrix4cd qq = C * G * C.transpose();
  CovarianceMatrix cm;
  cm.mean = q.real();
  const Eigen::Matrix4d sym = (0.5 * (qq + qq.transpose())).real();
  cm.sigma = sym - cm.mean * cm.mean.transpose();
  return cm;
}

}  // namespace catamp
