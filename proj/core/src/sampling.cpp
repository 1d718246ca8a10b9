#include "vposc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "vposc/errors.hpp"
#include "vposc/kurth.hpp"

namespace vposc {

namespace {

constexpr double kPi = std::numbers::pi;

// Cell-local offsets in (0, 1).  Velocity and angular offsets are cell
// centres (or uniform with jitter).  Radial offsets differ for each of the
// nw * nL particles sharing a radial cell (Kronecker sequence over the
// sub-cell index), so the particle radii do not alias against the field
// grid.
class CellOffset {
 public:
  CellOffset(bool jitter, std::uint64_t seed) : jitter_(jitter), rng_(seed) {}
  double centre() { return jitter_ ? uniform_(rng_) : 0.5; }
  double radial(std::size_t sub_cell) {
    if (jitter_) return uniform_(rng_);
    const double x = 0.5 + static_cast<double>(sub_cell) * kInverseGolden;
    return x - std::floor(x);
  }

 private:
  static constexpr double kInverseGolden = 0.6180339887498949;
  bool jitter_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace

TilingSpec::Counts TilingSpec::counts() const {
  const double base = std::cbrt(static_cast<double>(std::max<std::size_t>(particles, 8)) / 8.0);
  const int nL = std::max(1, static_cast<int>(std::lround(base)));
  return {4 * nL, 2 * nL, nL};
}

ParticleEnsemble initialize_box(const PhaseSpaceFunction& f, const PhaseBox& box, int nr, int nw,
                                int nL) {
  if (nr < 1 || nw < 1 || nL < 1) throw InvalidArgument("tiling needs at least one cell per axis");
  const double dr = (box.r_hi - box.r_lo) / nr;
  const double dw = (box.w_hi - box.w_lo) / nw;
  const double dL = (box.L_hi - box.L_lo) / nL;
  if (!(dr > 0.0 && dw > 0.0 && dL > 0.0)) throw InvalidArgument("degenerate tiling box");
  const double volume = kPhaseVolumeFactor * dr * dw * dL;
  ParticleEnsemble ens;
  for (int i = 0; i < nr; ++i) {
    const double r = box.r_lo + (i + 0.5) * dr;
    for (int j = 0; j < nw; ++j) {
      const double w = box.w_lo + (j + 0.5) * dw;
      for (int k = 0; k < nL; ++k) {
        const double L = box.L_lo + (k + 0.5) * dL;
        const double value = f(r, w, L);
        if (value > 0.0) ens.push_back(r, w, L, value * volume);
      }
    }
  }
  if (ens.empty()) throw EmptySupport("phase-space function vanishes on the tiling box");
  return ens;
}

ParticleEnsemble initialize_particles(const SteadyStateProfile& profile, const TilingSpec& spec) {
  const auto [nr, nw, nL] = spec.counts();
  const AnsatzModel& a = profile.ansatz();
  const double L0 = a.family == Family::PolytropicShell ? a.L0 : 0.0;
  const double r_lo = profile.Ri();
  const double dr = (profile.R() - r_lo) / nr;
  const double ds = 2.0 / nw;
  const double du = 1.0 / nL;
  CellOffset offset(spec.jitter, spec.seed);

  ParticleEnsemble ens;
  ens.reserve(static_cast<std::size_t>(nr) * nw * nL);
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nw; ++j) {
      for (int k = 0; k < nL; ++k) {
        const double r =
            r_lo + (i + offset.radial(static_cast<std::size_t>(j) * nL + k)) * dr;
        const double Y = profile.y_at(r) - (r > 0.0 ? L0 / (2.0 * r * r) : 0.0);
        const double s = -1.0 + (j + offset.centre()) * ds;
        const double u = (k + offset.centre()) * du;
        if (!(Y > 0.0)) continue;
        const double w_max = std::sqrt(2.0 * Y);
        const double w = s * w_max;
        const double A = Y - 0.5 * w * w;
        if (!(A > 0.0)) continue;
        const double L_span = 2.0 * r * r * A;
        const double L = L0 + u * L_span;
        const double f = a.phi(A * (1.0 - u)) * a.angular_factor(L);
        if (!(f > 0.0)) continue;
        const double volume = kPhaseVolumeFactor * dr * (w_max * ds) * (L_span * du);
        ens.push_back(r, w, L, f * volume);
      }
    }
  }
  if (ens.empty()) throw EmptySupport("steady state tiling produced no particles");
  return ens;
}

ParticleEnsemble initialize_kurth(double eps, const TilingSpec& spec) {
  if (!(std::abs(eps) < 1.0)) throw InvalidArgument("Kurth family requires |eps| < 1");
  const auto [nr, nw, nL] = spec.counts();
  const double dr = 1.0 / nr;
  const double dtheta = kPi / nw;
  const double du = 1.0 / nL;
  CellOffset offset(spec.jitter, spec.seed);
  constexpr double f_scaled = 3.0 / (4.0 * kPi * kPi * kPi);

  ParticleEnsemble ens;
  ens.reserve(static_cast<std::size_t>(nr) * nw * nL);
  for (int i = 0; i < nr; ++i) {
    const double ra = i * dr;
    const double rb = ra + dr;
    // Exact integral of r^2 over the cell (the L-extent is u r^2).
    const double r2_integral = (rb * rb * rb - ra * ra * ra) / 3.0;
    const double cell = kPhaseVolumeFactor * f_scaled * r2_integral * dtheta * du;
    for (int j = 0; j < nw; ++j) {
      for (int k = 0; k < nL; ++k) {
        const double r = ra + offset.radial(static_cast<std::size_t>(j) * nL + k) * dr;
        const double theta = -0.5 * kPi + (j + offset.centre()) * dtheta;
        const double u = (k + offset.centre()) * du;
        const double L = u * r * r;
        const double A = (1.0 - r * r) * (1.0 - u);
        const double w = std::sqrt(A) * std::sin(theta) + eps * r;
        ens.push_back(r, w, L, cell);
      }
    }
  }
  return ens;
}

}  // namespace vposc
