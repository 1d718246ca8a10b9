#pragma once

// Run and sweep configuration files (JSON, schema ids "vposc.run/1" and
// "vposc.sweep/1").  The schema is documented in docs/config.md.  Unknown
// keys are rejected.

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vposc/engine.hpp"
#include "vposc/perturbations.hpp"
#include "vposc/steady_state.hpp"

namespace vposc {

inline constexpr std::string_view kRunSchema = "vposc.run/1";
inline constexpr std::string_view kSweepSchema = "vposc.sweep/1";

struct SteadyStateBlock {
  Family family = Family::PolytropicBall;
  double k = 1.0;
  double l = 0.0;
  double L0 = 0.0;
  double y0 = 1.0;
  int cells = 4096;
  /// Outer-radius search: start radius and number of doublings.
  double r_max = 1.0;
  int max_doublings = 24;

  GridSpec grid() const { return {cells, r_max, max_doublings}; }
  bool operator==(const SteadyStateBlock&) const = default;
};

struct KurthBlock {
  double eps = 0.0;

  bool operator==(const KurthBlock&) const = default;
};

struct OutputsBlock {
  std::string dir = "out";
  /// File stem; defaults to the run id.
  std::string name;
  bool series = true;
  bool final_snapshot = false;
  /// Histogram and density stores (needed by `deltamap`).
  bool snapshots = false;

  bool operator==(const OutputsBlock&) const = default;
};

enum class Observable { KineticEnergy, PotentialEnergy };

std::string_view to_string(Observable o);
Observable observable_from_string(std::string_view name);

struct AnalysisBlock {
  Observable observable = Observable::KineticEnergy;
  double window_start = 0.0;
  double window_end = std::numeric_limits<double>::infinity();
  double noise_floor = 1e-3;
  int min_cycles = 3;
  bool damping = true;

  bool operator==(const AnalysisBlock&) const = default;
};

/// Converts a measured code-unit period to years.  A range in R or M turns
/// the conversion into a log-uniform scan.
struct UnitsBlock {
  double period = 0.0;
  double R_kpc_lo = 1.0, R_kpc_hi = 1.0;
  double M_sun_lo = 1e10, M_sun_hi = 1e10;
  int scan_points = 61;
  /// Scan target for the closest-match report; <= 0 disables it.
  double target_years = 0.0;

  bool operator==(const UnitsBlock&) const = default;
};

struct RunConfig {
  std::string id = "run";
  std::optional<SteadyStateBlock> steady_state;
  std::optional<KurthBlock> kurth;
  PerturbationSpec perturbation{};
  SimulationConfig engine{};
  OutputsBlock outputs{};
  AnalysisBlock analysis{};
  std::optional<UnitsBlock> units;

  /// Throws InvalidArgument: exactly one of steady_state / kurth, valid
  /// ansatz window, valid engine and perturbation blocks.
  void validate() const;
  std::string stem() const { return outputs.name.empty() ? id : outputs.name; }

  bool operator==(const RunConfig&) const = default;
};

enum class SweepParam { Y0, K, L, L0, KurthEps, PerturbationEps, Particles, ShiftDr, ShiftDw, ShiftDL };

std::string_view to_string(SweepParam p);
SweepParam sweep_param_from_string(std::string_view name);

struct SweepConfig {
  RunConfig base{};
  SweepParam param = SweepParam::Y0;
  std::vector<double> values;
  /// Report y0^{(k+2l+3/2)/(2l+2)} T per row.
  bool er_constant = true;
  /// Rows evaluated concurrently.
  int parallel_runs = 1;

  void validate() const;
  /// Base config with the axis value substituted; id gets an index suffix.
  RunConfig row(std::size_t index) const;

  bool operator==(const SweepConfig&) const = default;
};

/// All parse functions throw InvalidArgument with the offending key.
RunConfig parse_run_config(std::string_view json_text);
SweepConfig parse_sweep_config(std::string_view json_text);
std::string serialize(const RunConfig& config);
std::string serialize(const SweepConfig& config);

RunConfig load_run_config(const std::filesystem::path& path);
SweepConfig load_sweep_config(const std::filesystem::path& path);

/// Reads the schema id of a config file without validating the rest.
std::string config_schema(const std::filesystem::path& path);

}  // namespace vposc
