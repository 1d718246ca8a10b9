#pragma once

// Initial particle tilings.  The support is split into disjoint cells and
// each cell receives one particle with weight
//     f(particle) * (phase-space volume of the cell),
// where the (r, w, L) volume element is 4 pi^2 dr dw dL.  Particles sit at
// the cell centre in w and L; in r the particles sharing a radial cell are
// spread over it by a golden-ratio Kronecker sequence.

#include <cstdint>
#include <functional>

#include "vposc/particles.hpp"
#include "vposc/steady_state.hpp"

namespace vposc {

inline constexpr double kPhaseVolumeFactor = 39.47841760435743;  // 4 pi^2

struct TilingSpec {
  /// Approximate particle count; split as 4 : 2 : 1 across (r, w, L).
  std::size_t particles = 1'000'000;
  /// Place each particle uniformly at random inside its cell.
  bool jitter = false;
  std::uint64_t seed = 1;

  struct Counts {
    int r, w, L;
  };
  Counts counts() const;
};

struct PhaseBox {
  double r_lo, r_hi;
  double w_lo, w_hi;
  double L_lo, L_hi;
};

using PhaseSpaceFunction = std::function<double(double r, double w, double L)>;

/// Uniform (nr x nw x nL) cells over a box; particles only where f > 0.
/// Throws EmptySupport if f vanishes at every cell centre.
ParticleEnsemble initialize_box(const PhaseSpaceFunction& f, const PhaseBox& box, int nr,
                                int nw, int nL);

/// Tiling of a steady state in coordinates that map its support onto a box:
///   r in [Ri, R],  w = s sqrt(2 Y(r)),  L = L0 + u 2 r^2 (Y(r) - w^2/2),
/// with Y = y - L0/(2 r^2) and s in [-1, 1], u in [0, 1].  Every cell lies
/// inside the support.
ParticleEnsemble initialize_particles(const SteadyStateProfile& profile, const TilingSpec& spec);

/// Kurth steady state tiled in (r, theta, u) with w = sqrt(A) sin(theta),
/// L = u r^2, A = (1 - r^2)(1 - u).  In these coordinates f times the
/// Jacobian is constant, so weights are exact cell integrals.  The breathing
/// solution with R'(0) = eps is obtained by w -> w + eps r.
ParticleEnsemble initialize_kurth(double eps, const TilingSpec& spec);

}  // namespace vposc
