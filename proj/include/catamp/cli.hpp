#pragma once

// Experiment runner behind tools/catamp. Commands build in-memory tables so
// they can be exercised without the process boundary.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "catamp/analytic.hpp"
#include "catamp/distill.hpp"

namespace catamp::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kCheckFailure = 2, kNumericalFailure = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A tolerance check that did not hold (as opposed to a numerical breakdown).
class CheckFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key=value settings; later assignments win.
using Config = std::map<std::string, std::string>;

/// Reads a config file: one key=value per line, '#' starts a comment.
Config read_config(const std::string& path);
/// Parses and applies one "key=value" assignment.
void apply_assignment(Config& cfg, const std::string& assignment);

struct RunOptions {
  std::optional<int> fixed_cutoff;  ///< --cutoff-policy fixed:n
  bool convergence_check = false;
  bool accept_all_patterns = true;
  int jobs = 0;  ///< 0 keeps the OpenMP default
  std::uint64_t seed = 20240917;
  double mem_cap_mb = 4096.0;
};

/// "auto" or "fixed:n"
std::optional<int> parse_cutoff_policy(const std::string& s);

/// Comma separated values, or lo:hi:count for an inclusive uniform grid.
std::vector<double> parse_values(const std::string& key, const std::string& text);

/// Text-valued CSV table; numbers are formatted on insertion.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// Failed in-command checks (convergence, large-gain proxy); not written.
  std::vector<std::string> failures;
};

/// 12 significant digits, '.' decimal point.
std::string num(double v);
void write_csv(std::ostream& os, const Table& t);

ProtocolParams protocol_params(const Config& cfg);
DistillConfig distill_config(const Config& cfg, const RunOptions& opt);

Table cmd_teleamp(const Config& cfg, const RunOptions& opt);
Table cmd_relay(const Config& cfg, const RunOptions& opt);
Table cmd_sweep(const Config& cfg, const RunOptions& opt);
Table cmd_distill(const Config& cfg, const RunOptions& opt);

struct FigurePanel {
  std::string file;  ///< file name inside the output directory
  Table table;
};

struct FigureData {
  std::vector<FigurePanel> panels;
  /// Grid choices and fixed parameters, written as <name>.meta.json.
  std::string metadata_json;
};

/// name in {fig3, fig4, fig5, fig6panels, fig7}
FigureData cmd_figure(const std::string& name, const Config& cfg, const RunOptions& opt);

struct CheckRecord {
  std::string name;
  double observed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string error;  ///< set when the check threw instead of producing a value
};

struct ValidateReport {
  std::string level;
  std::vector<CheckRecord> checks;
  bool numerical_failure = false;

  bool ok() const;
  std::string to_json() const;
};

/// level in {fast, full}
ValidateReport cmd_validate(const std::string& level, const RunOptions& opt);

/// Whole command line, as invoked by tools/catamp; returns the exit code.
int run(int argc, char** argv);

}  // namespace catamp::cli
