#include "catamp/channels.hpp"

#include <algorithm>
#include <numeric>

#include "catamp/kernels.hpp"
#include "catamp/linear_optics.hpp"
#include "catamp/states.hpp"

namespace catamp {

namespace {

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::domain_error("loss channel: eta outside [0,1]");
}

void check_mode(int modes, int mode) {
  if (mode < 0 || mode >= modes) throw std::domain_error("mode index out of range");
}

ModeShape sub_shape(const ModeShape& shape, std::span<const int> modes) {
  std::vector<int> dims;
  for (int m : modes) dims.push_back(shape.dim(m));
  return ModeShape(std::move(dims));
}

void check_keep(const ModeShape& shape, std::span<const int> keep) {
  if (keep.empty()) throw std::domain_error("partial_trace: nothing to keep");
  std::vector<int> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.front() < 0 ||
      sorted.back() >= shape.modes())
    throw std::domain_error("partial_trace: invalid mode list");
}

}  // namespace

DensityOperator loss_channel(const DensityOperator& rho, int mode, double eta) {
  check_eta(eta);
  check_mode(rho.modes(), mode);
  if (eta == 1.0) return rho;
  std::vector<cplx> out(rho.data().size());
  kernels::pure_loss(rho.shape(), rho.data(), out, mode, eta);
  return DensityOperator(rho.shape(), std::move(out), rho.trace_deficit());
}

DensityOperator loss_channel(const FockState& psi, int mode, double eta) {
  return loss_channel(DensityOperator::from_pure(psi), mode, eta);
}

DensityOperator loss_channel_ancilla(const DensityOperator& rho, int mode, double eta) {
  check_eta(eta);
  check_mode(rho.modes(), mode);
  const auto anc = DensityOperator::from_pure(vacuum(rho.cutoff(mode)));
  auto joint = tensor(rho, anc);
  const int env = rho.modes();
  joint = apply_beam_splitter(joint, mode, env, eta);
  std::vector<int> keep(rho.modes());
  std::iota(keep.begin(), keep.end(), 0);
  return partial_trace(joint, keep);
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep) {
  check_keep(rho.shape(), keep);
  auto shape = sub_shape(rho.shape(), keep);
  std::vector<cplx> out(shape.size() * shape.size());
  kernels::partial_trace(rho.shape(), rho.data(), keep, out);
  return DensityOperator(std::move(shape), std::move(out), rho.trace_deficit());
}

DensityOperator partial_trace(const FockState& psi, std::span<const int> keep) {
  check_keep(psi.shape(), keep);
  auto shape = sub_shape(psi.shape(), keep);
  std::vector<cplx> out(shape.size() * shape.size());
  kernels::partial_trace_pure(psi.shape(), psi.amplitudes(), keep, out);
  return DensityOperator(std::move(shape), std::move(out), psi.norm_deficit());
}

HeraldPattern::HeraldPattern(int n_modes, int m0) : counts_(n_modes, 1), m0_(m0) {
  if (m0 < 1 || m0 > n_modes) throw std::domain_error("HeraldPattern: m0 out of range");
  counts_[m0 - 1] = 0;
}

HeraldPattern::HeraldPattern(std::vector<int> counts) : counts_(std::move(counts)), m0_(0) {
  int zeros = 0;
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    if (counts_[k] == 0) {
      ++zeros;
      m0_ = static_cast<int>(k) + 1;
    } else if (counts_[k] != 1) {
      throw std::domain_error("HeraldPattern: counts must be 0 or 1");
    }
  }
  if (zeros != 1) throw std::domain_error("HeraldPattern: exactly one vacuum slot required");
}

namespace {

struct Selection {
  ModeShape rest_shape;
  std::vector<std::size_t> rest_offsets;
  std::size_t fixed_offset = 0;
};

Selection select(const ModeShape& shape, std::span<const int> measured,
                 std::span<const int> counts) {
  if (measured.size() != counts.size())
    throw std::domain_error("project_counts: pattern length does not match mode list");
  Selection s;
  for (std::size_t k = 0; k < measured.size(); ++k) {
    check_mode(shape.modes(), measured[k]);
    if (counts[k] < 0 || counts[k] >= shape.dim(measured[k]))
      throw std::domain_error("project_counts: count exceeds cutoff");
    s.fixed_offset += shape.stride(measured[k]) * static_cast<std::size_t>(counts[k]);
  }
  const auto rest = kernels::complement(shape, measured);
  if (rest.size() + measured.size() != static_cast<std::size_t>(shape.modes()))
    throw std::domain_error("project_counts: repeated measured mode");
  s.rest_shape = sub_shape(shape, rest);
  s.rest_offsets = kernels::offsets_over(shape, rest);
  return s;
}

}  // namespace

Projection<FockState> project_counts(const FockState& psi, std::span<const int> measured,
                                     std::span<const int> counts) {
  const auto sel = select(psi.shape(), measured, counts);
  std::vector<cplx> out;
  out.reserve(sel.rest_offsets.size());
  for (auto off : sel.rest_offsets) out.push_back(psi[off + sel.fixed_offset]);
  FockState rem(sel.rest_shape, std::move(out), psi.norm_deficit());
  const double p = rem.norm_sq();
  return {std::move(rem), p};
}

Projection<DensityOperator> project_counts(const DensityOperator& rho,
                                           std::span<const int> measured,
                                           std::span<const int> counts) {
  const auto sel = select(rho.shape(), measured, counts);
  const std::size_t d = sel.rest_offsets.size();
  std::vector<cplx> out(d * d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c)
      out[r * d + c] = rho(sel.rest_offsets[r] + sel.fixed_offset,
                           sel.rest_offsets[c] + sel.fixed_offset);
  DensityOperator rem(sel.rest_shape, std::move(out), rho.trace_deficit());
  const double p = rem.trace();
  return {std::move(rem), p};
}

Projection<FockState> project_pattern(const FockState& psi, std::span<const int> measured,
                                      const HeraldPattern& pattern) {
  return project_counts(psi, measured, pattern.counts());
}

Projection<DensityOperator> project_pattern(const DensityOperator& rho,
                                            std::span<const int> measured,
                                            const HeraldPattern& pattern) {
  return project_counts(rho, measured, pattern.counts());
}

}  // namespace catamp
