#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "vposc/diagnostics.hpp"
#include "vposc/errors.hpp"
#include "vposc/field.hpp"
#include "vposc/kurth.hpp"
#include "vposc/perturbations.hpp"

using namespace vposc;

namespace {

struct Fixture {
  SteadyStateProfile profile =
      solve_steady_state(build_ansatz(Family::PolytropicBall, 1, 0, 0), 1.0);
  ParticleEnsemble ens = [this] {
    TilingSpec t;
    t.particles = 40000;
    return initialize_particles(profile, t);
  }();

  PhaseSpaceFunction f0() const {
    return [p = &profile](double r, double w, double L) { return evaluate_f0(*p, r, w, L); };
  }
};

double kinetic(const ParticleEnsemble& e) {
  return energies(e, deposit(e, 256, kGridMargin * e.max_radius())).kinetic;
}

SimulationConfig small_engine() {
  SimulationConfig c;
  c.dt = 0.01;
  c.grid_cells = 128;
  return c;
}

}  // namespace

TEST_SUITE("perturbations") {
  TEST_CASE("amplitude scales every weight") {
    Fixture fx;
    ParticleEnsemble e = fx.ens;
    perturb_amplitude(e, 0.1);
    CHECK(e.total_mass() == doctest::Approx(1.1 * fx.ens.total_mass()));
    CHECK(e.r == fx.ens.r);
    CHECK_THROWS_AS(perturb_amplitude(e, -1.0), InvalidArgument);
  }

  TEST_CASE("Kurth-type update and resampling agree in the mean") {
    Fixture fx;
    ParticleEnsemble a = fx.ens, b = fx.ens;
    perturb_kurth_type(a, 0.05);
    perturb_kurth_type_resample(b, 0.05, fx.f0());
    CHECK(a.total_mass() == fx.ens.total_mass());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a.w[i] == doctest::Approx(fx.ens.w[i] + 0.05 * fx.ens.r[i]));
    }
    CHECK(kinetic(a) > kinetic(fx.ens));
    CHECK(kinetic(b) == doctest::Approx(kinetic(a)).epsilon(0.02));
  }

  TEST_CASE("shift resampling") {
    Fixture fx;
    ParticleEnsemble e = fx.ens;
    perturb_shift(e, fx.profile, PhaseShift{});
    CHECK(e == fx.ens);
    perturb_shift(e, fx.profile, PhaseShift{0.0, 0.05, 0.0});
    CHECK(e.total_mass() < fx.ens.total_mass());
    CHECK(e.total_mass() > 0.8 * fx.ens.total_mass());
    double mean_w = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) mean_w += e.weight[i] * e.w[i];
    CHECK(mean_w < 0.0);  // f0(w + dw) moves mass toward negative w
    ParticleEnsemble g = fx.ens;
    CHECK_THROWS_AS(perturb_shift(g, fx.profile, PhaseShift{0.0, 0.0, -1.0}), InvalidArgument);
  }

  TEST_CASE("dynamically accessible perturbations preserve the weights") {
    Fixture fx;
    const SimulationConfig c = small_engine();
    const ParticleEnsemble p4 = perturb_dynamically_accessible(
        fx.ens, 0.05, 1.0, PerturbationKind::DynAccessFieldScale, c);
    CHECK(p4.weight == fx.ens.weight);  // every Casimir of the weights is unchanged
    CHECK(std::abs(kinetic(p4) / kinetic(fx.ens) - 1.0) > 1e-3);

    const ParticleEnsemble idle = perturb_dynamically_accessible(
        fx.ens, 0.0, 1.0, PerturbationKind::DynAccessFieldScale, c);
    CHECK(kinetic(idle) == doctest::Approx(kinetic(fx.ens)).epsilon(2e-3));

    TabulatedRadialFunction ext{{0.0, 3.0}, {0.0, 3.0}};
    const ParticleEnsemble p_ext = perturb_dynamically_accessible(
        fx.ens, 0.05, 1.0, PerturbationKind::DynAccessExternal, c, &ext);
    CHECK(p_ext.weight == fx.ens.weight);
    CHECK(kinetic(p_ext) != kinetic(fx.ens));

    CHECK_THROWS_AS(perturb_dynamically_accessible(fx.ens, 0.05, 0.0,
                                                   PerturbationKind::DynAccessFieldScale, c),
                    InvalidArgument);
    CHECK_THROWS_AS(perturb_dynamically_accessible(fx.ens, 0.05, 1.0,
                                                   PerturbationKind::DynAccessExternal, c),
                    InvalidArgument);
  }

  TEST_CASE("spec validation and dispatch") {
    PerturbationSpec s;
    s.kind = PerturbationKind::DynAccessExternal;
    s.eps = 0.1;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s.external_field = {{0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}};
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s = {};
    s.kind = PerturbationKind::Amplitude;
    s.eps = 0.7;
    CHECK(s.warnings().size() == 1);
    CHECK(perturbation_kind_from_string("kurth_type") == PerturbationKind::KurthType);
    CHECK_THROWS_AS(perturbation_kind_from_string("wiggle"), InvalidArgument);

    Fixture fx;
    ParticleEnsemble e = fx.ens;
    apply_perturbation(e, s, fx.f0(), fx.profile.dynamical_time(), small_engine());
    CHECK(e.total_mass() == doctest::Approx(1.7 * fx.ens.total_mass()));
  }
}
