#include "catamp/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "catamp/states.hpp"

namespace catamp {

namespace {

// Neumaier summation on each component.
class CompensatedSum {
 public:
  void add(cplx v) {
    add1(s_re_, c_re_, v.real());
    add1(s_im_, c_im_, v.imag());
  }
  cplx value() const { return {s_re_ + c_re_, s_im_ + c_im_}; }

 private:
  static void add1(double& s, double& c, double v) {
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  double s_re_ = 0.0, c_re_ = 0.0, s_im_ = 0.0, c_im_ = 0.0;
};

void check_N(int N) {
  if (N < 2) throw std::domain_error("N must be >= 2");
}

// Q_{jk} = exp((omega^{k-j} - 1) x)
cplx gram(int N, int j, int k, double x) {
  const cplx w = omega(N, k - j);
  return w == cplx(1.0) ? cplx(1.0) : std::exp((w - 1.0) * x);
}

}  // namespace

void ProtocolParams::validate() const {
  check_N(N);
  if (!(g >= 0.0)) throw std::domain_error("gain must be >= 0");
  if (!(eta > 0.0 && eta <= 1.0)) throw std::domain_error("eta must lie in (0, 1]");
}

double ProtocolParams::tau() const { return eta * g * g / (1.0 + eta * g * g); }

cplx ProtocolParams::beta() const { return alpha * std::sqrt(1.0 / eta + g * g); }

cplx ProtocolParams::eps() const { return alpha * std::sqrt(1.0 - eta) / std::sqrt(eta); }

cplx coherent_overlap(cplx x, cplx y) {
  return std::exp(-0.5 * std::norm(x) - 0.5 * std::norm(y) + std::conj(x) * y);
}

double cat_norm(int N, cplx beta) {
  check_N(N);
  const double b2 = std::norm(beta);
  if (b2 == 0.0) return 0.0;
  if (b2 <= 50.0) {
    // N^2 e^{-|beta|^2} sum_k |beta|^{2(kN-1)} / (kN-1)!, all terms positive
    const double lb = std::log(b2);
    double s = 0.0;
    for (int k = 1;; ++k) {
      const int n = k * N - 1;
      const double t = std::exp(n * lb - std::lgamma(n + 1.0) - b2);
      s += t;
      if (n > b2 && t < 1e-18 * s) break;
    }
    return double(N) * N * s;
  }
  // The double sum collapses to N sum_d omega^d exp((omega^d - 1)|beta|^2);
  // every exponent has non-positive real part.
  CompensatedSum s;
  for (int d = 0; d < N; ++d) s.add(omega(N, d) * gram(N, 0, d, b2));
  return N * s.value().real();
}

cplx herald_amplitude(int N, cplx alpha, int a, int b, int m0) {
  check_N(N);
  const int shift = ((a - m0 + 1 - b) % N + N) % N;
  if (shift != 0) return 0.0;
  return omega(N, static_cast<long>(a) * (N - 1)) * std::exp(-std::norm(alpha)) *
         std::pow(alpha, N - 1) / std::pow(double(N), 0.5 * (N - 3));
}

double input_norm(int N, cplx alpha, const std::vector<cplx>& c) {
  check_N(N);
  if (static_cast<int>(c.size()) != N) throw std::domain_error("need N coefficients");
  CompensatedSum s;
  for (int j = 1; j <= N; ++j)
    for (int k = 1; k <= N; ++k)
      s.add(std::conj(c[j - 1]) * c[k - 1] * gram(N, j, k, std::norm(alpha)));
  return s.value().real();
}

double success_prob_general(const ProtocolParams& p, const std::vector<cplx>& c) {
  p.validate();
  if (static_cast<int>(c.size()) != p.N) throw std::domain_error("need N coefficients");
  const int N = p.N;
  const double a2 = std::norm(p.alpha);
  const double x = a2 * p.g * p.g + std::norm(p.eps());
  CompensatedSum s;
  for (int j = 1; j <= N; ++j)
    for (int k = 1; k <= N; ++k) s.add(std::conj(c[j - 1]) * c[k - 1] * gram(N, j, k, x));
  const double pref = std::exp(-2.0 * a2) * std::pow(a2, N - 1) / std::pow(double(N), N - 3);
  return pref * s.value().real() / cat_norm(N, p.beta());
}

double success_prob_general_normalized(const ProtocolParams& p, const std::vector<cplx>& c) {
  return success_prob_general(p, c) / input_norm(p.N, p.alpha, c);
}

double success_prob_coherent(const ProtocolParams& p) {
  p.validate();
  const double a2 = std::norm(p.alpha);
  return std::exp(-2.0 * a2) * std::pow(a2, p.N - 1) / std::pow(double(p.N), p.N - 3) /
         cat_norm(p.N, p.beta());
}

double p_lim_coherent(int N, double alpha) {
  check_N(N);
  const double a2 = alpha * alpha;
  return std::exp(-2.0 * a2) * std::pow(a2, N - 1) / std::pow(double(N), N - 2);
}

double alpha_max(int N) {
  check_N(N);
  return std::sqrt((N - 1) / 2.0);
}

double p_max_lim(int N) {
  check_N(N);
  const double e = std::numbers::e;
  return 2.0 * e * N * N / (N - 1) * std::pow((N - 1) / (2.0 * e * N), N);
}

cplx d_coefficient(int N, cplx alpha, cplx gamma, int b) {
  check_N(N);
  cplx d = 1.0;
  for (int m = 1; m <= N - 1; ++m) d *= gamma - omega(N, b + m) * alpha;
  return d;
}

cplx d_coefficient_quotient(int N, cplx alpha, cplx gamma, int b) {
  check_N(N);
  const cplx wa = omega(N, b) * alpha;
  if (std::abs(gamma - wa) < 1e-9 * std::abs(alpha))
    return double(N) * omega(N, static_cast<long>(b) * (N - 1)) * std::pow(alpha, N - 1);
  return (std::pow(wa, N) - std::pow(gamma, N)) / (wa - gamma);
}

AmplifierPrediction arbitrary_coherent_prediction(const ProtocolParams& p, cplx gamma) {
  p.validate();
  const int N = p.N;
  const cplx ga = p.g * p.alpha;
  const cplx eps = p.eps();
  std::vector<cplx> w(N);  // omega^b d_b, b = 1..N
  for (int b = 1; b <= N; ++b) w[b - 1] = omega(N, b) * d_coefficient(N, p.alpha, gamma, b);

  // Gram matrix of |omega^b g alpha>|omega^b eps> and the overlaps with |g gamma>.
  const double x = std::norm(ga) + std::norm(eps);
  CompensatedSum norm_sum, fid_sum;
  for (int a = 1; a <= N; ++a) {
    const cplx oa = coherent_overlap(p.g * gamma, omega(N, a) * ga);
    for (int b = 1; b <= N; ++b) {
      const cplx wab = std::conj(w[a - 1]) * w[b - 1];
      const cplx env = coherent_overlap(omega(N, a) * eps, omega(N, b) * eps);
      norm_sum.add(wab * gram(N, a, b, x));
      const cplx ob = coherent_overlap(p.g * gamma, omega(N, b) * ga);
      fid_sum.add(wab * ob * std::conj(oa) * env);
    }
  }
  const double norm = norm_sum.value().real();

  AmplifierPrediction out;
  out.eps = eps;
  out.success_prob = std::exp(-std::norm(gamma) - std::norm(p.alpha)) /
                     std::pow(double(N), N - 1) * norm / cat_norm(N, p.beta());
  out.fidelity = norm > 0.0 ? fid_sum.value().real() / norm : 0.0;
  double s = 0.0;
  for (const auto& v : w) s += std::norm(v);
  out.output_coeffs = w;
  if (s > 0.0)
    for (auto& v : out.output_coeffs) v /= std::sqrt(s);
  return out;
}

std::vector<cplx> cat_fock_coeffs(int N, cplx beta, int k_max) {
  check_N(N);
  if (k_max < 1) throw std::domain_error("cat_fock_coeffs: k_max must be >= 1");
  std::vector<cplx> c(k_max, 0.0);
  if (beta == cplx(0.0)) {
    c[0] = 1.0;
    return c;
  }
  // N e^{-|beta|^2/2} / sqrt(norm) * beta^{kN-1} / sqrt((kN-1)!)
  const double log_pref = std::log(double(N)) - 0.5 * std::norm(beta) - 0.5 * std::log(cat_norm(N, beta));
  const double lb = std::log(std::abs(beta));
  for (int k = 1; k <= k_max; ++k) {
    const int n = k * N - 1;
    c[k - 1] = std::polar(std::exp(log_pref + n * lb - 0.5 * std::lgamma(n + 1.0)), n * std::arg(beta));
  }
  return c;
}

cplx relay_env_amplitude(const ProtocolParams& p) {
  p.validate();
  return p.eps();
}

cplx prod_one_minus_omega(int N) {
  cplx p = 1.0;
  for (int m = 1; m <= N - 1; ++m) p *= 1.0 - omega(N, m);
  return p;
}

double sum_abs_one_minus_omega_sq(int N) {
  double s = 0.0;
  for (int m = 1; m <= N; ++m) s += std::norm(1.0 - omega(N, m - 1));
  return s;
}

cplx root_sum(int N, int n) {
  cplx s = 0.0;
  for (int b = 1; b <= N; ++b) s += omega(N, static_cast<long>(b) * (n + 1));
  return s;
}

}  // namespace catamp
