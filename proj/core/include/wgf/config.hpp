#ifndef WGF_CONFIG_HPP
#define WGF_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wgf/presets.hpp"

namespace wgf {

/// Raw run configuration: a preset name plus optional overrides for any
/// grid / solver / time-loop / box / output field. Parsed from flat
/// `key = value` text with dotted keys and '#' comments.
struct RunConfig {
  std::string preset;
  std::optional<int> grid_n;
  std::optional<double> grid_h;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<int> snapshot_every;
  std::optional<double> tau;
  std::optional<double> sigma;
  std::optional<double> tolerance;
  std::optional<int> iter_max;
  std::optional<bool> check_stepsize;
  std::optional<bool> cold_start;
  std::optional<bool> convex_splitting;
  std::optional<std::string> mobility_mode;  // implicit | semi_implicit
  std::optional<double> box_lower;
  std::optional<double> box_upper;
  std::optional<std::string> output_dir;
  std::optional<std::string> output_format;  // csv | binary
  std::optional<std::uint64_t> seed;
};

struct ParseResult {
  std::optional<RunConfig> config;  // set iff errors is empty
  std::vector<std::string> errors;  // all errors, not first-error-only
};

/// Parses configuration text. Later assignments to the same key override
/// earlier ones (used for --set command-line overrides).
ParseResult parse_config(const std::string& text);

/// Fully resolved run: preset defaults merged with overrides.
struct ResolvedRun {
  Preset preset;
  GridSpec grid;
  GradientFlowProblem problem;
  SolverConfig solver;
  TimeLoopSpec loop;
  std::string output_dir;
  std::string output_format;
  std::uint64_t seed = 0;
  MobilityMode mode = MobilityMode::Implicit;
  DensityField rho0;
};

/// Applies a RunConfig on top of its preset. Unset sigma defaults to 1/tau
/// when tau was overridden; the semi-implicit mobility mode switches in the
/// variant's documented time step unless dt was set explicitly.
ResolvedRun resolve_run(const RunConfig& rc);

/// Canonical full dump of a resolved run; parse_config(dump) resolves to an
/// identical run and dumps identically.
std::string dump_config(const ResolvedRun& run);

/// Shortest decimal form that round-trips the exact double.
std::string format_double(double v);

}  // namespace wgf

#endif  // WGF_CONFIG_HPP
