#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "catamp/analytic.hpp"
#include "catamp/channels.hpp"
#include "catamp/fock_state.hpp"

namespace catamp {

struct TeleampOptions {
  bool accept_all_patterns = true;
  /// Fixed n_max for Bob's modes; the auto heuristic on |beta| otherwise.
  std::optional<int> cutoff;
  /// Cat resource transmissivity applied before Bob's beam splitter.
  double eta_res = 1.0;
  /// Restrict Alice's input and Bob's transmitted mode to N-1 photons before
  /// the N-splitter. Exact for the herald statistics, since only the
  /// (N-1)-photon sector of the splitter modes can produce a herald.
  bool herald_truncation = true;
  /// Apply C1(m0) to Bob's kept mode. When off, outputs stay rotated.
  bool apply_correction = true;
  double leak_tol = kDefaultLeakTol;
};

struct PatternResult {
  HeraldPattern pattern;
  double probability = 0.0;
  /// Unnormalized conditional state of Bob's kept mode, plus the environment
  /// mode when the channel is lossy. A density operator whenever the input or
  /// the resource is mixed.
  std::variant<FockState, DensityOperator> joint;
  /// Bob's kept mode alone (environment traced out).
  DensityOperator output;
};

struct TeleampRun {
  ProtocolParams params;
  std::vector<PatternResult> patterns;
  double total_prob = 0.0;
  /// Truncation weight missing from the input and resource states.
  double norm_deficit = 0.0;
};

/// Bob's two-mode resource B2(tau)|0>|cat(beta)>, modes (transmitted, kept).
/// With eta_res < 1 the cat passes a loss channel first and the result is
/// mixed.
std::variant<FockState, DensityOperator> prepare_resource(const ProtocolParams& p,
                                                          const TeleampOptions& opt = {});

/// Cutoff used for Bob's modes under the given options.
FockCutoff resource_cutoff(const ProtocolParams& p, const TeleampOptions& opt = {});

/// Full protocol on a single-mode input state. For eta < 1 the channel loss
/// acts on Bob's transmitted mode through an environment mode.
TeleampRun run_teleamp(const ProtocolParams& p, const FockState& input,
                       const TeleampOptions& opt = {});
/// Mixed single-mode input. Mixed inputs and resources are split into their
/// eigen-components, each run as a pure state, and the results summed.
TeleampRun run_teleamp(const ProtocolParams& p, const DensityOperator& input,
                       const TeleampOptions& opt = {});

struct RelayRun {
  TeleampRun run;
  double bob_fidelity = 0.0;     ///< m0 = 1 output against |omega^{a'} g alpha>
  double bob_purity = 0.0;
  double env_mean_photon = 0.0;  ///< heralded environment mode
};

/// Coherent input |omega^{a'} alpha> through the lossy relay.
RelayRun run_relay(const ProtocolParams& p, int a_prime, const TeleampOptions& opt = {});

/// Normalized version of the conditional output of one pattern.
DensityOperator normalized_output(const PatternResult& r);

}  // namespace catamp
