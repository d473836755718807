#include "catamp/gaussian.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace catamp {

namespace {

constexpr int kAngleGrid = 721;

// Entropy of a single-mode thermal state with symplectic eigenvalue x >= 1.
double thermal_entropy(double x) {
  if (x <= 1.0) return 0.0;
  const double p = 0.5 * (x + 1.0), m = 0.5 * (x - 1.0);
  return p * std::log2(p) - m * std::log2(m);
}

Eigen::Matrix4d symplectic_form() {
  Eigen::Matrix4d w = Eigen::Matrix4d::Zero();
  w(0, 1) = w(2, 3) = 1.0;
  w(1, 0) = w(3, 2) = -1.0;
  return w;
}

// Eigenvalues below `floor` are rounding noise and are dropped.
Eigen::Matrix2d psd_sqrt(const Eigen::Matrix2d& m, double floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (m + m.transpose()));
  Eigen::Vector2d l = es.eigenvalues();
  for (int i = 0; i < 2; ++i) l(i) = l(i) > floor ? std::sqrt(l(i)) : 0.0;
  return es.eigenvectors() * l.asDiagonal() * es.eigenvectors().transpose();
}

// Squared x-quadrature correlation coefficient of the pure state with
// x-covariance q; its reduced symplectic eigenvalue is 1/sqrt(1 - rho^2).
double rho_sq(const Eigen::Matrix2d& q) { return q(0, 1) * q(0, 1) / (q(0, 0) * q(1, 1)); }

}  // namespace

CovarianceMatrix lossy_tmsv_cm(double chi, double eta) {
  if (!(chi >= 0.0 && chi < 1.0)) throw std::domain_error("lossy_tmsv_cm: chi outside [0, 1)");
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::domain_error("lossy_tmsv_cm: eta outside [0, 1]");
  const double d = 1.0 - chi * chi;
  const double ch = (1.0 + chi * chi) / d, sh = 2.0 * chi / d;
  CovarianceMatrix cm;
  cm.sigma.setZero();
  cm.sigma(0, 0) = cm.sigma(1, 1) = ch;
  cm.sigma(2, 2) = cm.sigma(3, 3) = eta * ch + 1.0 - eta;
  const double c = std::sqrt(eta) * sh;
  cm.sigma(0, 2) = cm.sigma(2, 0) = c;
  cm.sigma(1, 3) = cm.sigma(3, 1) = -c;
  return cm;
}

void check_physical(const CovarianceMatrix& cm) {
  const Eigen::Matrix4d& s = cm.sigma;
  if (!s.allFinite()) throw std::domain_error("covariance matrix has non-finite entries");
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + s.cwiseAbs().maxCoeff()))
    throw std::domain_error("covariance matrix is not symmetric");
  const Eigen::Matrix4cd h = s.cast<cplx>() + cplx(0.0, 1.0) * symplectic_form().cast<cplx>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin < -1e-9 * s.trace())
    throw std::domain_error("covariance matrix violates the uncertainty relation (min eigenvalue " +
                            std::to_string(lmin) + ")");
}

StandardForm standard_form(const CovarianceMatrix& cm) {
  // Local symplectic maps sqrt(a) A^{-1/2} and sqrt(b) B^{-1/2} make the
  // diagonal blocks proportional to I; local rotations then diagonalize C.
  const Eigen::Matrix4d& s = cm.sigma;
  const auto normalize = [](const Eigen::Matrix2d& m, double& scale) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (m + m.transpose()));
    const Eigen::Vector2d l = es.eigenvalues();
    if (!(l.minCoeff() > 0.0)) throw std::domain_error("standard_form: singular local block");
    scale = std::sqrt(l(0) * l(1));
    return Eigen::Matrix2d(es.eigenvectors() * (scale / l.array()).sqrt().matrix().asDiagonal() *
                           es.eigenvectors().transpose());
  };
  StandardForm f;
  const Eigen::Matrix2d sa = normalize(s.block<2, 2>(0, 0), f.a);
  const Eigen::Matrix2d sb = normalize(s.block<2, 2>(2, 2), f.b);
  const Eigen::Matrix2d c = sa * s.block<2, 2>(0, 2) * sb.transpose();
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(c);
  f.c1 = svd.singularValues()(0);
  f.c2 = std::copysign(svd.singularValues()(1), c.determinant());
  return f;
}

double ptranspose_symplectic_min(const CovarianceMatrix& cm) {
  const Eigen::Matrix4d& s = cm.sigma;
  const double delta = s.block<2, 2>(0, 0).determinant() + s.block<2, 2>(2, 2).determinant() -
                       2.0 * s.block<2, 2>(0, 2).determinant();
  const double det_s = s.determinant();
  const double v2 = 0.5 * (delta - std::sqrt(std::max(delta * delta - 4.0 * det_s, 0.0)));
  return std::sqrt(std::max(v2, 0.0));
}

double log_negativity(const CovarianceMatrix& cm) {
  check_physical(cm);
  const double v = ptranspose_symplectic_min(cm);
  return v >= 1.0 ? 0.0 : -std::log2(v);
}

double gaussian_eof(const CovarianceMatrix& cm) {
  check_physical(cm);
  if (ptranspose_symplectic_min(cm) >= 1.0 - 1e-12) return 0.0;

  // The optimal pure decomposition has x-covariance Q and p-covariance Q^-1
  // with P^-1 <= Q <= X. Minimizing the correlation coefficient of Q over the
  // rank-one boundary Q = P^-1 + R u u^T R, R = sqrt(X - P^-1), is a search
  // over one angle.
  const StandardForm f = standard_form(cm);
  Eigen::Matrix2d x, p;
  x << f.a, f.c1, f.c1, f.b;
  p << f.a, f.c2, f.c2, f.b;
  const Eigen::Matrix2d p_inv = p.inverse();
  const Eigen::Matrix2d r = psd_sqrt(x - p_inv, 1e-13 * x.trace());

  const auto objective = [&](double phi) {
    const Eigen::Vector2d u(std::cos(phi), std::sin(phi));
    const Eigen::Vector2d ru = r * u;
    return rho_sq(p_inv + ru * ru.transpose());
  };

  double best = std::min(rho_sq(p_inv), rho_sq(x));
  int best_i = -1;
  const double step = std::numbers::pi / (kAngleGrid - 1);
  for (int i = 0; i < kAngleGrid; ++i) {
    const double v = objective(i * step);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  if (best_i >= 0) {
    boost::uintmax_t iters = 200;
    const auto [arg, val] = boost::math::tools::brent_find_minima(
        objective, (best_i - 1) * step, (best_i + 1) * step, 30, iters);
    (void)arg;
    if (iters >= 200) throw NumericalError("gaussian_eof: angle search did not converge");
    best = std::min(best, val);
  }
  if (!std::isfinite(best) || best < 0.0 || best >= 1.0)
    throw NumericalError("gaussian_eof: correlation coefficient out of range (" +
                         std::to_string(best) + ")");
  return thermal_entropy(1.0 / std::sqrt(1.0 - best));
}

double tmsv_entropy(double chi) {
  if (!(chi >= 0.0 && chi < 1.0)) throw std::domain_error("tmsv_entropy: chi outside [0, 1)");
  const double c2 = 1.0 / (1.0 - chi * chi), s2 = chi * chi / (1.0 - chi * chi);
  return s2 == 0.0 ? 0.0 : c2 * std::log2(c2) - s2 * std::log2(s2);
}

double deterministic_bound(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::domain_error("deterministic_bound: eta outside (0, 1)");
  // The approach is linear in 1 - chi; extrapolate from two near-limit points.
  constexpr double h = 1e-6;
  const double e1 = gaussian_eof(lossy_tmsv_cm(1.0 - h, eta));
  const double e2 = gaussian_eof(lossy_tmsv_cm(1.0 - 2.0 * h, eta));
  return 2.0 * e1 - e2;
}

}  // namespace catamp
