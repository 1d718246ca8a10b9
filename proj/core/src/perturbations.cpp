#include "vposc/perturbations.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <utility>

#include "vposc/errors.hpp"
#include "vposc/field.hpp"

namespace vposc {

namespace {

// Drops zero-weight particles, keeping order.
void compact(ParticleEnsemble& ens) {
  std::size_t out = 0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    if (!(ens.weight[i] > 0.0)) continue;
    ens.r[out] = ens.r[i];
    ens.w[out] = ens.w[i];
    ens.L[out] = ens.L[i];
    ens.weight[out] = ens.weight[i];
    ++out;
  }
  ens.r.resize(out);
  ens.w.resize(out);
  ens.L.resize(out);
  ens.weight.resize(out);
}

// weight_i <- f0(shifted_i) * weight_i / f0(z_i)
template <class Shifted>
void resample(ParticleEnsemble& ens, const PhaseSpaceFunction& f0, Shifted&& shifted) {
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const double base = f0(ens.r[i], ens.w[i], ens.L[i]);
    if (!(base > 0.0)) {
      ens.weight[i] = 0.0;
      continue;
    }
    const auto [r, w, L] = shifted(ens.r[i], ens.w[i], ens.L[i]);
    ens.weight[i] *= f0(r, w, L) / base;
  }
  compact(ens);
}

}  // namespace

std::string_view to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::None: return "none";
    case PerturbationKind::Amplitude: return "amplitude";
    case PerturbationKind::Shift: return "shift";
    case PerturbationKind::KurthType: return "kurth_type";
    case PerturbationKind::DynAccessExternal: return "dyn_access_external";
    case PerturbationKind::DynAccessFieldScale: return "dyn_access_field_scale";
  }
  return "unknown";
}

PerturbationKind perturbation_kind_from_string(std::string_view name) {
  for (auto k : {PerturbationKind::None, PerturbationKind::Amplitude, PerturbationKind::Shift,
                 PerturbationKind::KurthType, PerturbationKind::DynAccessExternal,
                 PerturbationKind::DynAccessFieldScale}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown perturbation kind '" + std::string(name) + "'");
}

void PerturbationSpec::validate() const {
  if (!std::isfinite(eps)) throw InvalidArgument("perturbation eps must be finite");
  if (kind == PerturbationKind::Amplitude && !(eps > -1.0)) {
    throw InvalidArgument("amplitude perturbation requires eps > -1 (negative mass otherwise)");
  }
  if (kind == PerturbationKind::DynAccessExternal && external_field.empty()) {
    throw InvalidArgument("dyn_access_external requires a tabulated external field");
  }
  if (external_field.r.size() != external_field.value.size()) {
    throw InvalidArgument("external field table columns differ in length");
  }
  for (std::size_t i = 1; i < external_field.r.size(); ++i) {
    if (!(external_field.r[i] > external_field.r[i - 1])) {
      throw InvalidArgument("external field radii must increase strictly");
    }
  }
}

std::vector<std::string> PerturbationSpec::warnings() const {
  std::vector<std::string> out;
  if (std::abs(eps) > 0.5) {
    out.push_back("perturbation strength |eps| = " + std::to_string(std::abs(eps)) +
                  " is not small");
  }
  return out;
}

void perturb_amplitude(ParticleEnsemble& ens, double eps) {
  if (!(eps > -1.0)) throw InvalidArgument("amplitude perturbation requires eps > -1");
  const double scale = 1.0 + eps;
  for (double& m : ens.weight) m *= scale;
}

void perturb_shift(ParticleEnsemble& ens, const PhaseSpaceFunction& f0, const PhaseShift& s) {
  for (std::size_t i = 0; i < ens.size(); ++i) {
    if (ens.L[i] + s.dL < 0.0) {
      throw InvalidArgument("shift perturbation makes L negative on the support");
    }
    if (ens.r[i] + s.dr < 0.0) {
      throw InvalidArgument("shift perturbation makes r negative on the support");
    }
  }
  if (s == PhaseShift{}) return;
  resample(ens, f0, [&s](double r, double w, double L) {
    return std::tuple{r + s.dr, w + s.dw, L + s.dL};
  });
}

void perturb_shift(ParticleEnsemble& ens, const SteadyStateProfile& profile, const PhaseShift& s) {
  perturb_shift(
      ens, [&profile](double r, double w, double L) { return evaluate_f0(profile, r, w, L); }, s);
}

void perturb_kurth_type(ParticleEnsemble& ens, double eps) {
  if (eps == 0.0) return;
  for (std::size_t i = 0; i < ens.size(); ++i) ens.w[i] += eps * ens.r[i];
}

void perturb_kurth_type_resample(ParticleEnsemble& ens, double eps, const PhaseSpaceFunction& f0) {
  if (eps == 0.0) return;
  resample(ens, f0, [eps](double r, double w, double L) { return std::tuple{r, w - eps * r, L}; });
}

ParticleEnsemble perturb_dynamically_accessible(ParticleEnsemble ens, double eps, double t_pert,
                                                PerturbationKind mode,
                                                const SimulationConfig& config,
                                                const TabulatedRadialFunction* external) {
  if (!(t_pert > 0.0)) throw InvalidArgument("dynamically accessible perturbation needs t_pert > 0");
  ForceModel force;
  if (mode == PerturbationKind::DynAccessFieldScale) {
    force.self_scale = 1.0 + eps;
  } else if (mode == PerturbationKind::DynAccessExternal) {
    if (external == nullptr || external->empty()) {
      throw InvalidArgument("dyn_access_external requires an external field");
    }
    force.external = external;
    force.external_scale = eps;
  } else {
    throw InvalidArgument("mode must be a dynamically accessible perturbation kind");
  }
  PushOptions options;
  options.scheme = config.scheme;
  options.frame = config.frame;
  options.force = force;
  options.workers = config.workers;
  const auto steps = static_cast<std::size_t>(std::max<long long>(1, std::llround(t_pert / config.dt)));
  double r_max = ens.max_radius();
  RadialField field = deposit(ens, config.grid_cells, kGridMargin * r_max, config.workers);
  half_kick(ens, field, -config.dt, options);
  for (std::size_t s = 0; s < steps; ++s) {
    if (s > 0) field = deposit(ens, config.grid_cells, kGridMargin * r_max, config.workers);
    options.origin_switch_radius = origin_switch_radius(config, field.dr());
    r_max = push(ens, field, config.dt, options).max_radius;
  }
  field = deposit(ens, config.grid_cells, kGridMargin * r_max, config.workers);
  half_kick(ens, field, config.dt, options);
  return ens;
}

ParticleEnsemble perturb_dynamically_accessible(const SteadyStateProfile& profile, double eps,
                                                double t_pert, PerturbationKind mode,
                                                const SimulationConfig& config,
                                                const TabulatedRadialFunction* external) {
  TilingSpec tiling{config.particles, config.jitter, config.seed};
  if (!(t_pert > 0.0)) t_pert = profile.dynamical_time();
  return perturb_dynamically_accessible(initialize_particles(profile, tiling), eps, t_pert, mode,
                                        config, external);
}

void apply_perturbation(ParticleEnsemble& ens, const PerturbationSpec& spec,
                        const PhaseSpaceFunction& f0, double dynamical_time,
                        const SimulationConfig& config) {
  spec.validate();
  switch (spec.kind) {
    case PerturbationKind::None:
      return;
    case PerturbationKind::Amplitude:
      perturb_amplitude(ens, spec.eps);
      return;
    case PerturbationKind::Shift:
      perturb_shift(ens, f0, spec.shift);
      return;
    case PerturbationKind::KurthType:
      if (spec.kurth_mode == KurthTypeMode::CoordinateUpdate) {
        perturb_kurth_type(ens, spec.eps);
      } else {
        perturb_kurth_type_resample(ens, spec.eps, f0);
      }
      return;
    case PerturbationKind::DynAccessExternal:
    case PerturbationKind::DynAccessFieldScale: {
      const double t_pert = spec.t_pert > 0.0 ? spec.t_pert : dynamical_time;
      ens = perturb_dynamically_accessible(std::move(ens), spec.eps, t_pert, spec.kind, config,
                                           &spec.external_field);
      return;
    }
  }
}

}  // namespace vposc
