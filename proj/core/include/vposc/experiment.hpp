#pragma once

// Config-driven experiment pipeline behind the command-line tool.

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vposc/config.hpp"
#include "vposc/engine.hpp"
#include "vposc/recurrence.hpp"
#include "vposc/sampling.hpp"
#include "vposc/snapshot_io.hpp"
#include "vposc/steady_state.hpp"
#include "vposc/units.hpp"

namespace vposc {

/// Tiled and perturbed initial data of a run.
struct InitialState {
  ParticleEnsemble ensemble;
  /// Null for Kurth runs.
  std::shared_ptr<const SteadyStateProfile> profile;
  /// Unperturbed distribution function.
  PhaseSpaceFunction f0;
  double dynamical_time = 0.0;
};

InitialState prepare_initial_state(const RunConfig& config);

/// One row of the analysis CSV.
struct RunSummary {
  std::string id;
  /// "ok", "no_oscillation" or "error".
  std::string status = "ok";
  std::string message;

  std::string model;  // family name or "kurth"
  double k = 0.0, l = 0.0, L0 = 0.0, y0 = 0.0, kurth_eps = 0.0;
  std::string perturbation = "none";
  /// Perturbation eps; the Euclidean norm of (dr, dw, dL) for shifts.
  double eps = 0.0;
  std::size_t particles = 0;

  double period = 0.0;
  double uncertainty = 0.0;
  double amplitude = 0.0;
  double decay_rate = 0.0;
  double decay_residual = 0.0;
  int nonmonotone = 0;
  double er_constant = 0.0;
  double energy_drift = 0.0;
  double mass_drift = 0.0;
};

/// Fills the model columns of a summary from the config.
RunSummary describe(const RunConfig& config);

/// Period, damping, ER constant and drifts from the scalar series alone.
/// NoOscillation is recorded in `status`, never thrown.  Absent quantities
/// are NaN.
RunSummary analyze_series(const RunConfig& config, const DiagnosticSeries& series);

struct SimulationOutcome {
  RunSummary summary;
  RunResult result;
  std::shared_ptr<const SteadyStateProfile> profile;
};

/// prepare_initial_state -> run -> analyze_series, in memory.
SimulationOutcome simulate(const RunConfig& config, std::ostream* log = nullptr);

void write_analysis_header(std::ostream& out);
void write_analysis_row(std::ostream& out, const RunSummary& s);
void write_summary(std::ostream& out, const RunSummary& s);

/// Writes <dir>/<stem>.profile.txt and prints R, Ri, E0, M_total, rho(0).
SteadyStateProfile cmd_steady(const RunConfig& config, std::ostream& log);

/// Writes <stem>.series.csv, <stem>.analysis.csv, <stem>.summary.txt and,
/// as configured, <stem>.snapshot, <stem>.hist, <stem>.density.txt.
RunSummary cmd_simulate(const RunConfig& config, std::ostream& log);

/// Writes <dir>/<stem>.sweep.csv (and each row's series).  A failing row is
/// recorded with status "error" and the sweep continues.
std::vector<RunSummary> cmd_sweep(const SweepConfig& sweep, std::ostream& log);

struct DeltaMaps {
  NamedMatrix delta_rho;
  NamedMatrix delta_f;
  std::optional<LagMinimum> rho_recurrence;
  std::optional<LagMinimum> f_recurrence;
};

/// Maps over the snapshots with t in [t_lo, t_hi].  Histograms are required
/// unless `require_histograms` is false, in which case delta_f stays empty.
DeltaMaps delta_maps(const DiagnosticSeries& series, double t_lo, double t_hi,
                     bool require_histograms = true);

/// Reads <prefix>.hist and <prefix>.density.txt, writes
/// <prefix>.delta_rho.txt and <prefix>.delta_f.txt.
DeltaMaps cmd_deltamap(const std::filesystem::path& prefix, double t_lo, double t_hi,
                       std::ostream& log);

/// Converts units.period for the configured steady state.  A single (R, M)
/// pair reports one value; ranges report the scanned extremes.
UnitScanResult cmd_units(const RunConfig& config, std::ostream& log);

}  // namespace vposc
