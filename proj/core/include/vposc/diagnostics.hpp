#pragma once

// Energies and stored phase-space snapshots of a run.
//
//   E_kin = 1/2 sum_i m_i (w_i^2 + L_i / r_i^2)
//   E_pot = -1/(8 pi) int |grad U|^2 dx = -1/2 int_0^inf m(r)^2 / r^2 dr
//
// The potential energy is evaluated by trapezoidal quadrature over the field
// grid plus the exact vacuum tail M^2 / (2 r_outer).

#include <cstddef>
#include <vector>

#include "vposc/field.hpp"
#include "vposc/particles.hpp"

namespace vposc {

struct Energies {
  double kinetic = 0.0;
  double potential = 0.0;
  double total() const { return kinetic + potential; }
};

Energies energies(const ParticleEnsemble& ensemble, const RadialField& field);

/// -sum_i m_i m(r_i) / r_i, the particle form of the same integral.
double potential_energy_particle_sum(const ParticleEnsemble& ensemble, const RadialField& field);

/// Fixed (r, w, L) binning for the phase-space histograms of one run.
struct HistogramBinning {
  int nr = 64;
  int nw = 64;
  int nL = 32;
  double r_lo = 0.0, r_hi = 1.0;
  double w_lo = -1.0, w_hi = 1.0;
  double L_lo = 0.0, L_hi = 1.0;

  std::size_t bins() const {
    return static_cast<std::size_t>(nr) * static_cast<std::size_t>(nw) *
           static_cast<std::size_t>(nL);
  }

  /// Bounding box of the ensemble inflated by `inflate` of its extent on
  /// each side (r and L clipped at zero).
  static HistogramBinning around(const ParticleEnsemble& ensemble, int nr, int nw, int nL,
                                 double inflate = 0.5);

  bool operator==(const HistogramBinning&) const = default;
};

/// Weight per bin (phase-space volume is folded in: the L1 norm of the
/// underlying f is the plain sum of |differences|).  Weight falling outside
/// the box accumulates in a single overflow bin.
struct PhaseHistogram {
  std::vector<float> weights;
  double overflow = 0.0;
};

PhaseHistogram phase_histogram(const ParticleEnsemble& ensemble, const HistogramBinning& binning,
                               int workers = 1);

/// Deposited radial density on a uniform grid r_j = j dr.
struct DensityProfile {
  double dr = 0.0;
  std::vector<double> rho;

  double at(double r) const;
  double outer_radius() const { return dr * static_cast<double>(rho.size() - 1); }
};

/// Time-indexed scalars sampled every output_stride steps, and snapshots
/// (histograms and radial densities) at a separate cadence.
struct DiagnosticSeries {
  std::vector<double> times;
  std::vector<double> e_kin;
  std::vector<double> e_pot;
  std::vector<double> h_total;
  std::vector<double> mass;
  std::vector<double> r_support;

  HistogramBinning binning;
  std::vector<double> snapshot_times;
  std::vector<PhaseHistogram> histograms;
  std::vector<DensityProfile> densities;

  std::size_t samples() const { return times.size(); }
  std::size_t snapshots() const { return snapshot_times.size(); }

  void record(double t, const Energies& e, double total_mass, double support_radius);
};

}  // namespace vposc
