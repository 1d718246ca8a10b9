#pragma once

#include <cstddef>
#include <vector>

namespace vposc {

/// Lagrangian discretisation of a spherically symmetric f in (r, w, L).
/// Structure of arrays; weights are masses and never change during a run.
struct ParticleEnsemble {
  std::vector<double> r;
  std::vector<double> w;
  std::vector<double> L;
  std::vector<double> weight;

  std::size_t size() const { return r.size(); }
  bool empty() const { return r.empty(); }

  void reserve(std::size_t n) {
    r.reserve(n);
    w.reserve(n);
    L.reserve(n);
    weight.reserve(n);
  }

  void push_back(double r_, double w_, double L_, double weight_) {
    r.push_back(r_);
    w.push_back(w_);
    L.push_back(L_);
    weight.push_back(weight_);
  }

  /// Sum of weights in index order (bitwise reproducible).
  double total_mass() const;
  double max_radius() const;

  bool operator==(const ParticleEnsemble&) const = default;
};

}  // namespace vposc
