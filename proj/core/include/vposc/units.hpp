#pragma once

// Conversion of code-unit periods (G = 1) to years by matching the model's
// radius and mass to a physical galaxy.

#include "vposc/steady_state.hpp"

namespace vposc {

/// G in kpc^3 / (M_sun yr^2).
inline constexpr double kGravitationalConstantKpcMsunYr = 4.498502151469554e-24;

/// Time unit in years for code length R_num <-> R_kpc and mass M_num <-> M_sun:
///   t_u = sqrt((R_kpc / R_num)^3 (M_num / M_sun) / G).
double time_unit_years(double R_num, double M_num, double R_kpc, double M_sun);

/// Period T (code units) of `profile` in years.
double physical_units(const SteadyStateProfile& profile, double period, double R_kpc,
                      double M_sun);

struct UnitScanResult {
  double min_years = 0.0;
  double max_years = 0.0;
  /// Scan point whose period is closest (in log) to the requested target.
  double closest_years = 0.0;
  double closest_R_kpc = 0.0;
  double closest_M_sun = 0.0;
};

/// Log-uniform scan of n x n (R, M) pairs over the given ranges.
UnitScanResult scan_physical_periods(const SteadyStateProfile& profile, double period,
                                     double R_lo_kpc, double R_hi_kpc, double M_lo_sun,
                                     double M_hi_sun, int n, double target_years);

}  // namespace vposc
