#pragma once

// Radial field from a particle ensemble:
//   rho  tent (two-node) assignment divided by the volume of each node's
//        dual shell [r_j - dr/2, r_j + dr/2];
//   m    cumulative integral of 4 pi r^2 rho with rho constant on dual shells;
//   dUdr m / r^2, zero at the origin and linear on [0, dr].

#include <cstddef>
#include <vector>

#include "vposc/particles.hpp"

namespace vposc {

class RadialField {
 public:
  RadialField() = default;
  RadialField(double dr, std::vector<double> rho, std::vector<double> mass,
              std::vector<double> dUdr, double total_mass);

  double dr() const { return dr_; }
  std::size_t nodes() const { return rho_.size(); }
  double node_radius(std::size_t j) const { return static_cast<double>(j) * dr_; }
  double outer_radius() const { return node_radius(nodes() - 1); }
  double total_mass() const { return total_mass_; }

  const std::vector<double>& rho() const { return rho_; }
  const std::vector<double>& mass() const { return mass_; }
  const std::vector<double>& dUdr() const { return dUdr_; }

  /// dU/dr at r: linear between nodes, M / r^2 beyond the grid.
  double field_at(double r) const {
    if (r >= outer_) return total_mass_ / (r * r);
    const double x = r * inv_dr_;
    const auto j = static_cast<std::size_t>(x);
    const double t = x - static_cast<double>(j);
    return dUdr_[j] + t * (dUdr_[j + 1] - dUdr_[j]);
  }

  /// m(r), linear between nodes.
  double mass_at(double r) const;

  /// rho(r), linear between nodes, zero beyond the grid.
  double rho_at(double r) const;

 private:
  double dr_ = 1.0;
  double inv_dr_ = 1.0;
  double outer_ = 0.0;
  std::vector<double> rho_, mass_, dUdr_;
  double total_mass_ = 0.0;
};

inline constexpr double kGridMargin = 1.1;

/// Deposits onto `cells` uniform cells over [0, outer_radius].  Particles
/// beyond the grid contribute to the total mass only.  With several workers
/// each accumulates privately; buffers are merged in ascending worker order.
RadialField deposit(const ParticleEnsemble& ensemble, int cells, double outer_radius,
                    int workers = 1);

/// Grid over [0, kGridMargin * max r].
RadialField deposit(const ParticleEnsemble& ensemble, int cells, int workers = 1);

}  // namespace vposc
