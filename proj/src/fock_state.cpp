#include "catamp/fock_state.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace catamp {

FockCutoff::FockCutoff(int n_max) : n_max_(n_max) {
  if (n_max < 1) throw std::domain_error("FockCutoff: n_max must be >= 1");
}

FockCutoff auto_cutoff(double mu) {
  mu = std::abs(mu);
  return FockCutoff(static_cast<int>(std::ceil(mu * mu + 6.0 * mu + 10.0)));
}

ModeShape::ModeShape(std::vector<int> dims) : dims_(std::move(dims)) {
  strides_.assign(dims_.size(), 1);
  size_ = 1;
  for (int m = static_cast<int>(dims_.size()) - 1; m >= 0; --m) {
    if (dims_[m] < 1) throw std::domain_error("ModeShape: dimension must be positive");
    strides_[m] = size_;
    size_ *= static_cast<std::size_t>(dims_[m]);
  }
}

std::size_t ModeShape::flat(std::span<const int> index) const {
  if (index.size() != dims_.size())
    throw std::domain_error("ModeShape::flat: index rank mismatch");
  std::size_t f = 0;
  for (std::size_t m = 0; m < dims_.size(); ++m) {
    if (index[m] < 0 || index[m] >= dims_[m])
      throw std::out_of_range("ModeShape::flat: index out of range");
    f += strides_[m] * static_cast<std::size_t>(index[m]);
  }
  return f;
}

std::vector<int> ModeShape::unflat(std::size_t flat_index) const {
  std::vector<int> idx(dims_.size());
  for (std::size_t m = 0; m < dims_.size(); ++m) {
    idx[m] = static_cast<int>((flat_index / strides_[m]) % dims_[m]);
  }
  return idx;
}

namespace {

ModeShape shape_of(const std::vector<FockCutoff>& cutoffs) {
  std::vector<int> dims;
  dims.reserve(cutoffs.size());
  for (auto c : cutoffs) dims.push_back(c.dim());
  return ModeShape(std::move(dims));
}

}  // namespace

FockState::FockState(std::vector<FockCutoff> cutoffs, std::vector<cplx> amplitudes,
                     double norm_deficit)
    : FockState(shape_of(cutoffs), std::move(amplitudes), norm_deficit) {}

FockState::FockState(ModeShape shape, std::vector<cplx> amplitudes, double norm_deficit)
    : shape_(std::move(shape)), amps_(std::move(amplitudes)), norm_deficit_(norm_deficit) {
  if (amps_.size() != shape_.size())
    throw std::domain_error("FockState: amplitude count does not match shape");
}

std::vector<FockCutoff> FockState::cutoffs() const {
  std::vector<FockCutoff> out;
  for (int m = 0; m < modes(); ++m) out.push_back(cutoff(m));
  return out;
}

cplx FockState::at(std::initializer_list<int> index) const {
  return amps_[shape_.flat(std::span<const int>(index.begin(), index.size()))];
}

double FockState::norm_sq() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

FockState FockState::normalized() const {
  const double n = norm_sq();
  if (!(n > 0.0)) throw std::domain_error("FockState::normalized: zero state");
  return scaled(1.0 / std::sqrt(n));
}

FockState FockState::scaled(cplx factor) const {
  std::vector<cplx> out(amps_);
  for (auto& a : out) a *= factor;
  return FockState(shape_, std::move(out), norm_deficit_);
}

DensityOperator::DensityOperator(ModeShape shape, std::vector<cplx> matrix,
                                 double trace_deficit)
    : shape_(std::move(shape)), rho_(std::move(matrix)), trace_deficit_(trace_deficit) {
  if (rho_.size() != shape_.size() * shape_.size())
    throw std::domain_error("DensityOperator: matrix size does not match shape");
}

DensityOperator DensityOperator::from_pure(const FockState& psi) {
  const std::size_t d = psi.size();
  std::vector<cplx> rho(d * d);
  const auto a = psi.amplitudes();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) rho[i * d + j] = a[i] * std::conj(a[j]);
  return DensityOperator(psi.shape(), std::move(rho), psi.norm_deficit());
}

double DensityOperator::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) t += rho_[i * dim() + i].real();
  return t;
}

double DensityOperator::purity() const {
  // Tr(rho^2) = sum_ij rho_ij rho_ji = sum_ij |rho_ij|^2 for Hermitian rho
  double p = 0.0;
  for (const auto& v : rho_) p += std::norm(v);
  const double t = trace();
  return p / (t * t);
}

DensityOperator DensityOperator::normalized() const {
  const double t = trace();
  if (!(t > 0.0)) throw std::domain_error("DensityOperator::normalized: zero trace");
  std::vector<cplx> out(rho_);
  for (auto& v : out) v /= t;
  return DensityOperator(shape_, std::move(out), trace_deficit_);
}

double DensityOperator::hermiticity_error() const {
  double e = 0.0;
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = i; j < dim(); ++j)
      e = std::max(e, std::abs(rho_[i * dim() + j] - std::conj(rho_[j * dim() + i])));
  return e;
}

double DensityOperator::min_eigenvalue() const {
  const auto d = static_cast<Eigen::Index>(dim());
  Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      m(rho_.data(), d, d);
  Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::vector<std::pair<double, FockState>> eigen_components(const DensityOperator& rho,
                                                           double rel_cut) {
  const auto d = static_cast<Eigen::Index>(rho.dim());
  Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      rho.data().data(), d, d);
  Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const double cut = rel_cut * std::max(rho.trace(), 0.0);
  std::vector<std::pair<double, FockState>> out;
  for (Eigen::Index k = d - 1; k >= 0; --k) {
    const double w = es.eigenvalues()(k);
    if (w <= cut) break;
    const auto col = es.eigenvectors().col(k);
    out.emplace_back(w, FockState(rho.shape(), std::vector<cplx>(col.data(), col.data() + d)));
  }
  return out;
}

cplx inner(const FockState& a, const FockState& b) {
  if (a.modes() != b.modes()) throw std::domain_error("inner: mode count mismatch");
  if (a.shape() == b.shape()) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
  }
  // Different cutoffs: only the common index box contributes.
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == cplx(0.0)) continue;
    const auto idx = a.shape().unflat(i);
    bool inside = true;
    for (int m = 0; m < a.modes(); ++m) inside = inside && idx[m] < b.shape().dim(m);
    if (inside) s += std::conj(a[i]) * b[b.shape().flat(idx)];
  }
  return s;
}

double fidelity(const FockState& a, const FockState& b) {
  const double na = a.norm_sq();
  const double nb = b.norm_sq();
  if (!(na > 0.0) || !(nb > 0.0)) throw std::domain_error("fidelity: zero state");
  return std::norm(inner(a, b)) / (na * nb);
}

double fidelity(const DensityOperator& rho, const FockState& psi) {
  if (rho.shape() != psi.shape()) throw std::domain_error("fidelity: shape mismatch");
  const std::size_t d = rho.dim();
  const auto p = psi.amplitudes();
  cplx s = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (p[i] == cplx(0.0)) continue;
    cplx row = 0.0;
    for (std::size_t j = 0; j < d; ++j) row += rho(i, j) * p[j];
    s += std::conj(p[i]) * row;
  }
  return s.real() / (rho.trace() * psi.norm_sq());
}

}  // namespace catamp
