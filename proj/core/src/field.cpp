#include "vposc/field.hpp"

#include <algorithm>
#include <numbers>

#include "vposc/errors.hpp"
#include "vposc/parallel.hpp"

namespace vposc {

namespace {
constexpr double kPi = std::numbers::pi;
}

double ParticleEnsemble::total_mass() const {
  double sum = 0.0;
  for (double m : weight) sum += m;
  return sum;
}

double ParticleEnsemble::max_radius() const {
  double m = 0.0;
  for (double x : r) m = std::max(m, x);
  return m;
}

RadialField::RadialField(double dr, std::vector<double> rho, std::vector<double> mass,
                         std::vector<double> dUdr, double total_mass)
    : dr_(dr),
      inv_dr_(1.0 / dr),
      outer_(dr * static_cast<double>(rho.size() - 1)),
      rho_(std::move(rho)),
      mass_(std::move(mass)),
      dUdr_(std::move(dUdr)),
      total_mass_(total_mass) {}

double RadialField::mass_at(double r) const {
  if (r <= 0.0) return 0.0;
  if (r >= outer_) return total_mass_;
  const double x = r * inv_dr_;
  const auto j = static_cast<std::size_t>(x);
  const double t = x - static_cast<double>(j);
  return mass_[j] + t * (mass_[j + 1] - mass_[j]);
}

double RadialField::rho_at(double r) const {
  if (r < 0.0 || r > outer_) return 0.0;
  const double x = r * inv_dr_;
  const auto j = std::min(static_cast<std::size_t>(x), nodes() - 2);
  const double t = x - static_cast<double>(j);
  return rho_[j] + t * (rho_[j + 1] - rho_[j]);
}

RadialField deposit(const ParticleEnsemble& ens, int cells, double outer_radius, int workers) {
  if (ens.empty()) throw InvalidArgument("deposit requires a nonempty ensemble");
  if (cells < 2) throw InvalidArgument("deposit requires at least two cells");
  if (!(outer_radius > 0.0)) outer_radius = 1.0;
  const auto n_nodes = static_cast<std::size_t>(cells) + 1;
  const double dr = outer_radius / cells;
  const double inv_dr = 1.0 / dr;
  workers = std::max(1, workers);

  // One extra slot per worker collects weight beyond the grid.
  std::vector<std::vector<double>> buffers(static_cast<std::size_t>(workers),
                                           std::vector<double>(n_nodes + 1, 0.0));
  parallel_chunks(ens.size(), workers, [&](int k, std::size_t begin, std::size_t end) {
    double* q = buffers[static_cast<std::size_t>(k)].data();
    const double* r = ens.r.data();
    const double* m = ens.weight.data();
    for (std::size_t i = begin; i < end; ++i) {
      const double x = r[i] * inv_dr;
      const auto j = static_cast<std::size_t>(x);
      if (j >= n_nodes - 1) {
        q[n_nodes] += m[i];
        continue;
      }
      const double t = x - static_cast<double>(j);
      q[j] += (1.0 - t) * m[i];
      q[j + 1] += t * m[i];
    }
  });
  std::vector<double> charge(n_nodes + 1, 0.0);
  for (const auto& b : buffers) {
    for (std::size_t j = 0; j <= n_nodes; ++j) charge[j] += b[j];
  }

  std::vector<double> rho(n_nodes), mass(n_nodes), dUdr(n_nodes);
  double enclosed = 0.0;  // mass inside r_j - dr/2
  for (std::size_t j = 0; j < n_nodes; ++j) {
    const double rj = static_cast<double>(j) * dr;
    const double lo = std::max(0.0, rj - 0.5 * dr);
    const double hi = rj + 0.5 * dr;
    const double shell = 4.0 * kPi / 3.0 * (hi * hi * hi - lo * lo * lo);
    rho[j] = charge[j] / shell;
    if (j == 0) {
      mass[j] = 0.0;
      dUdr[j] = 0.0;
    } else {
      const double lower = 4.0 * kPi / 3.0 * (rj * rj * rj - lo * lo * lo);
      mass[j] = enclosed + charge[j] * (lower / shell);
      dUdr[j] = mass[j] / (rj * rj);
    }
    enclosed += charge[j];
  }
  const double total = enclosed + charge[n_nodes];
  // The last node carries half a dual shell beyond the grid; close the
  // cumulative mass so that m(outer) equals everything on the grid.
  mass[n_nodes - 1] = enclosed;
  dUdr[n_nodes - 1] = enclosed / (outer_radius * outer_radius);
  return RadialField(dr, std::move(rho), std::move(mass), std::move(dUdr), total);
}

RadialField deposit(const ParticleEnsemble& ens, int cells, int workers) {
  double r_max = 0.0;
  for (double r : ens.r) r_max = std::max(r_max, r);
  return deposit(ens, cells, kGridMargin * r_max, workers);
}

}  // namespace vposc
