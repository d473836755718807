#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace catamp {

using cplx = std::complex<double>;

/// Retained-norm tolerance applied by the state constructors unless overridden.
inline constexpr double kDefaultLeakTol = 1e-8;

/// Thrown when a requested cutoff cannot hold a state to the requested leak
/// tolerance. Carries the norm that the cutoff actually retains.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double retained_norm)
      : std::runtime_error(what), retained_norm_(retained_norm) {}
  double retained_norm() const noexcept { return retained_norm_; }

 private:
  double retained_norm_;
};

/// Thrown when an iterative numerical procedure fails (non-convergence,
/// unphysical covariance input, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Highest retained photon number of a single mode.
class FockCutoff {
 public:
  explicit FockCutoff(int n_max);
  int n_max() const noexcept { return n_max_; }
  int dim() const noexcept { return n_max_ + 1; }
  friend bool operator==(FockCutoff, FockCutoff) = default;

 private:
  int n_max_;
};

/// Default cutoff for a mode whose largest entering coherent amplitude is mu:
/// ceil(mu^2 + 6 mu + 10).
FockCutoff auto_cutoff(double mu);

/// Row-major multi-index layout over modes with individual dimensions. Mode 0
/// is the most significant index.
class ModeShape {
 public:
  ModeShape() = default;
  explicit ModeShape(std::vector<int> dims);

  int modes() const noexcept { return static_cast<int>(dims_.size()); }
  int dim(int mode) const { return dims_.at(mode); }
  const std::vector<int>& dims() const noexcept { return dims_; }
  std::size_t stride(int mode) const { return strides_.at(mode); }
  std::size_t size() const noexcept { return size_; }

  std::size_t flat(std::span<const int> index) const;
  std::vector<int> unflat(std::size_t flat_index) const;

  friend bool operator==(const ModeShape& a, const ModeShape& b) {
    return a.dims_ == b.dims_;
  }

 private:
  std::vector<int> dims_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

/// Pure (possibly unnormalized) state on a truncated multimode Fock space.
/// `norm_deficit` tracks the weight lost to truncation by the operations that
/// produced the state.
class FockState {
 public:
  FockState(std::vector<FockCutoff> cutoffs, std::vector<cplx> amplitudes,
            double norm_deficit = 0.0);
  FockState(ModeShape shape, std::vector<cplx> amplitudes,
            double norm_deficit = 0.0);

  int modes() const noexcept { return shape_.modes(); }
  const ModeShape& shape() const noexcept { return shape_; }
  FockCutoff cutoff(int mode) const { return FockCutoff(shape_.dim(mode) - 1); }
  std::vector<FockCutoff> cutoffs() const;
  std::size_t size() const noexcept { return amps_.size(); }

  std::span<const cplx> amplitudes() const noexcept { return amps_; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }
  cplx at(std::initializer_list<int> index) const;

  double norm_sq() const;
  double norm_deficit() const noexcept { return norm_deficit_; }

  /// Copy rescaled to unit norm. Throws std::domain_error for the zero state.
  FockState normalized() const;
  FockState scaled(cplx factor) const;

 private:
  ModeShape shape_;
  std::vector<cplx> amps_;
  double norm_deficit_;
};

/// Mixed state on a truncated multimode Fock space, stored as a dense
/// row-major matrix of dimension shape().size().
class DensityOperator {
 public:
  DensityOperator(ModeShape shape, std::vector<cplx> matrix,
                  double trace_deficit = 0.0);

  static DensityOperator from_pure(const FockState& psi);

  int modes() const noexcept { return shape_.modes(); }
  const ModeShape& shape() const noexcept { return shape_; }
  FockCutoff cutoff(int mode) const { return FockCutoff(shape_.dim(mode) - 1); }
  std::size_t dim() const noexcept { return shape_.size(); }

  std::span<const cplx> data() const noexcept { return rho_; }
  const cplx& operator()(std::size_t row, std::size_t col) const {
    return rho_[row * dim() + col];
  }

  double trace() const;
  double purity() const;  ///< Tr(rho^2) / Tr(rho)^2
  double trace_deficit() const noexcept { return trace_deficit_; }

  DensityOperator normalized() const;

  /// Largest |rho_ij - conj(rho_ji)|.
  double hermiticity_error() const;
  /// Smallest eigenvalue of the Hermitian part.
  double min_eigenvalue() const;

 private:
  ModeShape shape_;
  std::vector<cplx> rho_;
  double trace_deficit_;
};

/// Combined deficit of two independently truncated factors.
inline double combine_deficit(double a, double b) {
  return 1.0 - (1.0 - a) * (1.0 - b);
}

/// Eigenpairs of the Hermitian part of rho, largest first, dropping weights
/// at or below rel_cut * Tr(rho). Vectors are normalized.
std::vector<std::pair<double, FockState>> eigen_components(const DensityOperator& rho,
                                                           double rel_cut = 1e-15);

/// <a|b>
cplx inner(const FockState& a, const FockState& b);
/// |<a|b>|^2 / (<a|a><b|b>)
double fidelity(const FockState& a, const FockState& b);
/// <psi|rho|psi> / (Tr rho <psi|psi>)
double fidelity(const DensityOperator& rho, const FockState& psi);

}  // namespace catamp
