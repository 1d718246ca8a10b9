#include "vposc/units.hpp"

#include <cmath>

#include "vposc/errors.hpp"

namespace vposc {

double time_unit_years(double R_num, double M_num, double R_kpc, double M_sun) {
  if (!(R_num > 0.0 && M_num > 0.0 && R_kpc > 0.0 && M_sun > 0.0)) {
    throw InvalidArgument("unit matching needs positive radii and masses");
  }
  const double length = R_kpc / R_num;
  const double mass = M_sun / M_num;
  return std::sqrt(length * length * length / (mass * kGravitationalConstantKpcMsunYr));
}

double physical_units(const SteadyStateProfile& profile, double period, double R_kpc,
                      double M_sun) {
  return period * time_unit_years(profile.R(), profile.M_total(), R_kpc, M_sun);
}

UnitScanResult scan_physical_periods(const SteadyStateProfile& profile, double period,
                                     double R_lo, double R_hi, double M_lo, double M_hi, int n,
                                     double target) {
  if (n < 2) throw InvalidArgument("unit scan needs at least two points per axis");
  UnitScanResult out;
  out.min_years = 1e300;
  out.max_years = 0.0;
  double best = 1e300;
  for (int i = 0; i < n; ++i) {
    const double R = R_lo * std::pow(R_hi / R_lo, static_cast<double>(i) / (n - 1));
    for (int j = 0; j < n; ++j) {
      const double M = M_lo * std::pow(M_hi / M_lo, static_cast<double>(j) / (n - 1));
      const double T = physical_units(profile, period, R, M);
      out.min_years = std::min(out.min_years, T);
      out.max_years = std::max(out.max_years, T);
      const double miss = std::abs(std::log(T / target));
      if (miss < best) {
        best = miss;
        out.closest_years = T;
        out.closest_R_kpc = R;
        out.closest_M_sun = M;
      }
    }
  }
  return out;
}

}  // namespace vposc
