#pragma once

// Config parsing and command dispatch behind the cliffop executable.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cliffop/serialize.hpp"

namespace cliffop::cli {

/// Bad config: unknown keys, malformed expressions, mode violations.
/// Reported on stderr with exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct GridConfig {
  double lo = -1.0;
  double hi = 1.0;
  int samples = 11;
  /// Per-axis bounds; overrides lo / hi when present.
  std::vector<std::pair<double, double>> box;
  int threads = 1;
  double exclusion_radius = 1e-6;
};

struct RunConfig {
  int n = 2;
  PseudoscalarMode mode = PseudoscalarMode::automatic;
  /// Named fields, kept in their JSON form and parsed on use.
  std::map<std::string, Json> fields;
  std::optional<Complex> lambda;
  GridConfig grid;
  ToleranceDefaults tolerance;
  /// Scaled tolerance applied to every report.
  std::optional<double> tolerance_override;
  std::uint64_t seed = 42;
  /// Command-specific parameters (k, K, K_samples, step, ...).
  Json params = Json::object();

  /// Throws ConfigError on unknown keys or ill-typed values.
  static RunConfig from_json(const Json& j);
  /// Normalized form; from_json(to_json()) reproduces the config.
  Json to_json() const;

  Signature signature() const { return Signature(n); }
  GridSpec grid_spec() const;
  ResidualOptions options() const;
  /// Throws ConfigError when the name is undefined or does not parse.
  MultivectorField field(const std::string& name) const;
  bool has_field(const std::string& name) const { return fields.count(name) > 0; }
  SpectralParam spectral() const;
};

struct RunOutcome {
  Json report;
  /// 0 pass, 1 numerical failure.
  int exit_code = 0;
};

struct CommandInfo {
  std::string name;
  /// Alternative command string; empty when there is none.
  std::string alias;
  std::string claim;
};

const std::vector<CommandInfo>& commands();

/// Throws ConfigError for an unknown command or invalid config.
RunOutcome run(const std::string& command, const RunConfig& config);

/// The report without its wall-time entry.
Json strip_timing(Json report);

}  // namespace cliffop::cli
