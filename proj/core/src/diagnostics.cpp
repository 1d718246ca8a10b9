#include "vposc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <utility>

#include "vposc/errors.hpp"
#include "vposc/parallel.hpp"

namespace vposc {

Energies energies(const ParticleEnsemble& ens, const RadialField& field) {
  Energies e;
  double kin = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const double r = ens.r[i];
    const double v2 = ens.w[i] * ens.w[i] + (r > 0.0 ? ens.L[i] / (r * r) : 0.0);
    kin += ens.weight[i] * v2;
  }
  e.kinetic = 0.5 * kin;

  const auto& m = field.mass();
  const double dr = field.dr();
  double integral = 0.0;  // int_0^{outer} m^2 / r^2 dr, trapezoid; integrand is 0 at r = 0
  for (std::size_t j = 1; j < m.size(); ++j) {
    const double r = field.node_radius(j);
    const double v = m[j] * m[j] / (r * r);
    integral += (j + 1 == m.size()) ? 0.5 * v : v;
  }
  integral *= dr;
  const double M = field.total_mass();
  integral += M * M / field.outer_radius();
  e.potential = -0.5 * integral;
  return e;
}

double potential_energy_particle_sum(const ParticleEnsemble& ens, const RadialField& field) {
  double sum = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const double r = ens.r[i];
    if (r > 0.0) sum += ens.weight[i] * field.mass_at(r) / r;
  }
  return -sum;
}

HistogramBinning HistogramBinning::around(const ParticleEnsemble& ens, int nr, int nw, int nL,
                                          double inflate) {
  if (ens.empty()) throw InvalidArgument("histogram binning needs a nonempty ensemble");
  if (nr < 1 || nw < 1 || nL < 1) throw InvalidArgument("histogram needs >= 1 bin per axis");
  const auto [rmin, rmax] = std::minmax_element(ens.r.begin(), ens.r.end());
  const auto [wmin, wmax] = std::minmax_element(ens.w.begin(), ens.w.end());
  const auto [Lmin, Lmax] = std::minmax_element(ens.L.begin(), ens.L.end());
  auto widen = [inflate](double lo, double hi, bool clip) {
    double span = hi - lo;
    if (!(span > 0.0)) span = std::max(std::abs(hi), 1.0) * 1e-3;
    double a = lo - inflate * span;
    const double b = hi + inflate * span;
    if (clip) a = std::max(0.0, a);
    return std::pair{a, b};
  };
  HistogramBinning b;
  b.nr = nr;
  b.nw = nw;
  b.nL = nL;
  std::tie(b.r_lo, b.r_hi) = widen(*rmin, *rmax, true);
  std::tie(b.w_lo, b.w_hi) = widen(*wmin, *wmax, false);
  std::tie(b.L_lo, b.L_hi) = widen(*Lmin, *Lmax, true);
  return b;
}

PhaseHistogram phase_histogram(const ParticleEnsemble& ens, const HistogramBinning& b,
                               int workers) {
  workers = std::max(1, workers);
  const double sr = b.nr / (b.r_hi - b.r_lo);
  const double sw = b.nw / (b.w_hi - b.w_lo);
  const double sL = b.nL / (b.L_hi - b.L_lo);
  const std::size_t n_bins = b.bins();
  std::vector<std::vector<double>> partial(static_cast<std::size_t>(workers),
                                           std::vector<double>(n_bins + 1, 0.0));
  parallel_chunks(ens.size(), workers, [&](int k, std::size_t begin, std::size_t end) {
    auto& acc = partial[static_cast<std::size_t>(k)];
    for (std::size_t i = begin; i < end; ++i) {
      const double xr = (ens.r[i] - b.r_lo) * sr;
      const double xw = (ens.w[i] - b.w_lo) * sw;
      const double xL = (ens.L[i] - b.L_lo) * sL;
      if (xr < 0.0 || xw < 0.0 || xL < 0.0 || xr >= b.nr || xw >= b.nw || xL >= b.nL) {
        acc[n_bins] += ens.weight[i];
        continue;
      }
      const auto ir = static_cast<std::size_t>(xr);
      const auto iw = static_cast<std::size_t>(xw);
      const auto iL = static_cast<std::size_t>(xL);
      acc[(ir * static_cast<std::size_t>(b.nw) + iw) * static_cast<std::size_t>(b.nL) + iL] +=
          ens.weight[i];
    }
  });
  PhaseHistogram h;
  h.weights.assign(n_bins, 0.0f);
  for (std::size_t j = 0; j < n_bins; ++j) {
    double sum = 0.0;
    for (const auto& p : partial) sum += p[j];
    h.weights[j] = static_cast<float>(sum);
  }
  for (const auto& p : partial) h.overflow += p[n_bins];
  return h;
}

double DensityProfile::at(double r) const {
  if (rho.empty() || r < 0.0 || r > outer_radius()) return 0.0;
  const double x = r / dr;
  const auto j = std::min(static_cast<std::size_t>(x), rho.size() - 2);
  const double t = x - static_cast<double>(j);
  return (1.0 - t) * rho[j] + t * rho[j + 1];
}

void DiagnosticSeries::record(double t, const Energies& e, double total_mass,
                              double support_radius) {
  if (!times.empty() && !(t > times.back())) {
    throw InvalidArgument("diagnostic sample times must increase strictly");
  }
  if (!std::isfinite(e.kinetic) || !std::isfinite(e.potential)) {
    throw NumericalFailure("non-finite energy at t = " + std::to_string(t));
  }
  times.push_back(t);
  e_kin.push_back(e.kinetic);
  e_pot.push_back(e.potential);
  h_total.push_back(e.total());
  mass.push_back(total_mass);
  r_support.push_back(support_radius);
}

}  // namespace vposc
