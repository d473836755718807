#pragma once

#include <span>
#include <vector>

#include "catamp/fock_state.hpp"

namespace catamp {

/// Pure-loss channel of transmissivity eta on one mode (Kraus form).
DensityOperator loss_channel(const DensityOperator& rho, int mode, double eta);
DensityOperator loss_channel(const FockState& psi, int mode, double eta);

/// Same channel realized as a beam splitter onto a vacuum ancilla followed by
/// tracing the ancilla out. Slower; kept as an independent check.
DensityOperator loss_channel_ancilla(const DensityOperator& rho, int mode, double eta);

DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep);
DensityOperator partial_trace(const FockState& psi, std::span<const int> keep);

/// Heralding outcome: a 0 count in the vacuum slot m0 (1-based) and a single
/// count in every other measured mode.
class HeraldPattern {
 public:
  HeraldPattern(int n_modes, int m0);
  /// Validates an explicit count list.
  explicit HeraldPattern(std::vector<int> counts);

  int m0() const noexcept { return m0_; }
  const std::vector<int>& counts() const noexcept { return counts_; }
  int size() const noexcept { return static_cast<int>(counts_.size()); }

 private:
  std::vector<int> counts_;
  int m0_;
};

template <class State>
struct Projection {
  State remaining;     ///< unnormalized conditional state on the unmeasured modes
  double probability;  ///< squared norm (pure) or trace (mixed) of `remaining`
};

/// Projects `measured` modes onto the photon numbers in `counts`. The
/// remaining modes keep their original order.
Projection<FockState> project_counts(const FockState& psi, std::span<const int> measured,
                                     std::span<const int> counts);
Projection<DensityOperator> project_counts(const DensityOperator& rho,
                                           std::span<const int> measured,
                                           std::span<const int> counts);

Projection<FockState> project_pattern(const FockState& psi, std::span<const int> measured,
                                      const HeraldPattern& pattern);
Projection<DensityOperator> project_pattern(const DensityOperator& rho,
                                            std::span<const int> measured,
                                            const HeraldPattern& pattern);

}  // namespace catamp
