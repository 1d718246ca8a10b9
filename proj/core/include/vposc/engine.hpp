#pragma once

// Particle-in-cell evolution of the spherically symmetric system
//     r' = w,   w' = L / r^3 - dU/dr,   L' = 0.
//
// Each step: deposit -> (sample diagnostics) -> push.  The grid is rebuilt
// every step over [0, 1.1 max r].  Particles are pushed in a planar Cartesian
// frame (x1, x2, v1, v2) that reproduces (r, w, L), so the centrifugal term
// is never evaluated.  The hybrid frame uses polar steps away from the origin
// and the planar frame only inside origin_switch_radius (or where an orbit
// turns by more than 0.05 rad per step).

#include <cstdint>
#include <functional>
#include <vector>

#include "vposc/diagnostics.hpp"
#include "vposc/field.hpp"
#include "vposc/particles.hpp"

namespace vposc {

enum class PushScheme {
  /// w advanced with the force at the old position, r with the new w.
  SymplecticEuler,
  /// r and w both advanced from the old state.
  ForwardEuler,
};

enum class PushFrame { Planar, Hybrid };

struct SimulationConfig {
  double dt = 1e-3;
  double t_end = 50.0;
  std::size_t particles = 1'000'000;
  int grid_cells = 512;
  /// Radius below which the hybrid frame switches to the planar push; <= 0
  /// selects four cells of the current grid.  Never smaller than one cell.
  double origin_switch_radius = 0.0;
  int output_stride = 10;
  std::uint64_t seed = 1;
  int workers = 1;
  PushScheme scheme = PushScheme::SymplecticEuler;
  PushFrame frame = PushFrame::Planar;
  bool jitter = false;

  /// Snapshots (histograms + radial densities) stored per run; 0 disables.
  int snapshots = 200;
  bool histograms = false;
  int hist_nr = 64;
  int hist_nw = 64;
  int hist_nL = 32;

  /// Throws InvalidArgument on non-positive step, times or counts.
  void validate() const;
  std::size_t steps() const;

  bool operator==(const SimulationConfig&) const = default;
};

/// Radial function given on sample points, linear in between and zero
/// outside [r.front(), r.back()].
struct TabulatedRadialFunction {
  std::vector<double> r;
  std::vector<double> value;

  double at(double radius) const;
  bool empty() const { return r.empty(); }

  bool operator==(const TabulatedRadialFunction&) const = default;
};

/// Radial acceleration is -(self_scale * dU/dr + external_scale * F(r)).
struct ForceModel {
  double self_scale = 1.0;
  const TabulatedRadialFunction* external = nullptr;
  double external_scale = 0.0;
};

struct PushOptions {
  PushScheme scheme = PushScheme::SymplecticEuler;
  PushFrame frame = PushFrame::Planar;
  double origin_switch_radius = 0.0;
  ForceModel force{};
  int workers = 1;
};

struct PushStats {
  double max_radius = 0.0;
  std::size_t planar = 0;
};

/// Advances every particle by dt in place.  Weights are never touched.  L is
/// never touched by the symplectic scheme; forward Euler recomputes it as
/// |x cross v|^2 after planar steps.
/// Throws NumericalFailure if a particle ends at negative or non-finite r.
PushStats push(ParticleEnsemble& ensemble, const RadialField& field, double dt,
               const PushOptions& options);

/// Radial half kick w -= g(r) dt / 2 (dt may be negative).  Only the
/// symplectic scheme carries staggered velocities; no-op for forward Euler.
void half_kick(ParticleEnsemble& ensemble, const RadialField& field, double dt,
               const PushOptions& options);

/// Effective switch radius for a grid spacing.
double origin_switch_radius(const SimulationConfig& config, double dr);

struct RunResult {
  DiagnosticSeries series;
  ParticleEnsemble final_state;
  double final_time = 0.0;
  std::size_t steps = 0;
};

/// Evolves the ensemble to config.t_end.  With the symplectic scheme the
/// velocities are staggered: w is kicked back by dt/2 at the start, kinetic
/// energies are reported with synchronised velocities, and the final state
/// is synchronised again.  Snapshots are stored when
/// config.snapshots > 0; histograms only with config.histograms.  A histogram
/// binning may be supplied; otherwise it is fitted around the initial state.
RunResult run(ParticleEnsemble initial, const SimulationConfig& config,
              const ForceModel& force = {}, const HistogramBinning* binning = nullptr);

}  // namespace vposc
