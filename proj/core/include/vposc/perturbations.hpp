#pragma once

// Perturbations of a steady state applied before the evolution starts:
//   amplitude      f = (1 + eps) f0
//   shift          f = f0(. + (dr, dw, dL))
//   Kurth type     f(x, v) = f0(x, v - eps x)
//   dyn. access.   f0 evolved for t_pert under an extra field eps F or under
//                  the self-consistent field scaled by (1 + eps)

#include <string>
#include <string_view>
#include <vector>

#include "vposc/engine.hpp"
#include "vposc/particles.hpp"
#include "vposc/sampling.hpp"
#include "vposc/steady_state.hpp"

namespace vposc {

enum class PerturbationKind {
  None,
  Amplitude,
  Shift,
  KurthType,
  DynAccessExternal,
  DynAccessFieldScale,
};

std::string_view to_string(PerturbationKind kind);
PerturbationKind perturbation_kind_from_string(std::string_view name);

enum class KurthTypeMode { CoordinateUpdate, Resample };

struct PhaseShift {
  double dr = 0.0;
  double dw = 0.0;
  double dL = 0.0;

  bool operator==(const PhaseShift&) const = default;
};

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::None;
  double eps = 0.0;
  PhaseShift shift{};
  /// Duration of the dynamically accessible phase; <= 0 selects one
  /// dynamical time 1/sqrt(mean density) of the steady state.
  double t_pert = 0.0;
  KurthTypeMode kurth_mode = KurthTypeMode::CoordinateUpdate;
  TabulatedRadialFunction external_field{};

  /// Throws InvalidArgument for inconsistent specs.
  void validate() const;
  /// Human-readable warnings (e.g. |eps| > 0.5).
  std::vector<std::string> warnings() const;

  bool operator==(const PerturbationSpec&) const = default;
};

/// Scales every weight by (1 + eps).  Throws for eps <= -1.
void perturb_amplitude(ParticleEnsemble& ensemble, double eps);

/// Keeps particle positions and recomputes weights as f0 at the shifted
/// point times the particle's cell volume (weight / f0 at the unshifted
/// point).  Particles whose shifted point leaves the support are dropped.
/// Throws InvalidArgument if the shift makes any L or r negative.
void perturb_shift(ParticleEnsemble& ensemble, const PhaseSpaceFunction& f0,
                   const PhaseShift& shift);
void perturb_shift(ParticleEnsemble& ensemble, const SteadyStateProfile& profile,
                   const PhaseShift& shift);

/// w -> w + eps r: each particle is moved to its image under v -> v + eps x,
/// which carries f0 to f0(x, v - eps x).  L and weights are unchanged.
void perturb_kurth_type(ParticleEnsemble& ensemble, double eps);

/// Same perturbation by resampling: positions fixed, weights set to
/// f0(r, w - eps r, L) times the cell volume.
void perturb_kurth_type_resample(ParticleEnsemble& ensemble, double eps,
                                 const PhaseSpaceFunction& f0);

/// Evolves the ensemble for t_pert under the modified field and returns the
/// state at t_pert.  Weights are untouched.
ParticleEnsemble perturb_dynamically_accessible(ParticleEnsemble ensemble, double eps,
                                                double t_pert, PerturbationKind mode,
                                                const SimulationConfig& config,
                                                const TabulatedRadialFunction* external = nullptr);

/// Tiles the profile and then applies the dynamically accessible
/// perturbation (t_pert <= 0 selects one dynamical time).
ParticleEnsemble perturb_dynamically_accessible(const SteadyStateProfile& profile, double eps,
                                                double t_pert, PerturbationKind mode,
                                                const SimulationConfig& config,
                                                const TabulatedRadialFunction* external = nullptr);

/// Applies any spec to an ensemble tiled from `f0`.  t_pert <= 0 resolves to
/// `dynamical_time`.
void apply_perturbation(ParticleEnsemble& ensemble, const PerturbationSpec& spec,
                        const PhaseSpaceFunction& f0, double dynamical_time,
                        const SimulationConfig& config);

}  // namespace vposc
