#include <cmath>
#include <numbers>

#include "doctest.h"
#include "vposc/diagnostics.hpp"
#include "vposc/errors.hpp"
#include "vposc/field.hpp"
#include "vposc/kurth.hpp"
#include "vposc/sampling.hpp"
#include "vposc/steady_state.hpp"

using namespace vposc;

namespace {

constexpr double kPi = std::numbers::pi;

double virial_ratio(const ParticleEnsemble& e) {
  const RadialField f = deposit(e, 1024, kGridMargin * e.max_radius());
  const Energies en = energies(e, f);
  return 2.0 * en.kinetic / -en.potential;
}

}  // namespace

TEST_SUITE("sampling") {
  TEST_CASE("counts split 4 : 2 : 1") {
    TilingSpec t;
    t.particles = 1'000'000;
    const auto c = t.counts();
    CHECK(c.r == 4 * c.L);
    CHECK(c.w == 2 * c.L);
    CHECK(c.L == 50);  // 8 nL^3 = 1e6
  }

  TEST_CASE("box tiling integrates a constant") {
    const PhaseBox box{0.0, 1.0, -1.0, 1.0, 0.0, 0.5};
    const ParticleEnsemble e = initialize_box([](double, double, double) { return 2.0; }, box, 8, 4, 2);
    CHECK(e.size() == 64);
    CHECK(e.total_mass() == doctest::Approx(2.0 * 4.0 * kPi * kPi * 1.0 * 2.0 * 0.5));
    CHECK_THROWS_AS(initialize_box([](double, double, double) { return 0.0; }, box, 2, 2, 2),
                    EmptySupport);
  }

  TEST_CASE("steady-state tilings carry the profile mass and lie in the support") {
    struct Case {
      Family f;
      double k, l, L0, y0;
    };
    for (const Case c : {Case{Family::PolytropicBall, 1, 0, 0, 1.0}, Case{Family::PolytropicBall, 0, 2, 0, 0.6},
                         Case{Family::PolytropicShell, 1, 0.5, 1.0, 1.0}, Case{Family::King, 0, 0, 0, 1.0}}) {
      const SteadyStateProfile p = solve_steady_state(build_ansatz(c.f, c.k, c.l, c.L0), c.y0);
      TilingSpec t;
      t.particles = 100000;
      const ParticleEnsemble e = initialize_particles(p, t);
      CHECK(e.total_mass() == doctest::Approx(p.M_total()).epsilon(2e-3));
      std::size_t outside = 0;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (!(evaluate_f0(p, e.r[i], e.w[i], e.L[i]) > 0.0)) ++outside;
        CHECK(e.r[i] <= p.R());
        CHECK(e.r[i] >= p.Ri());
        CHECK(e.L[i] >= c.L0);
      }
      CHECK(outside == 0);
      // Steady states are virialised: 2 E_kin = -E_pot.
      CHECK(virial_ratio(e) == doctest::Approx(1.0).epsilon(5e-3));
    }
  }

  TEST_CASE("Kurth tiling: exact mass, unit ball, virial kinetic energy") {
    TilingSpec t;
    t.particles = 100000;
    for (double eps : {0.0, 0.3}) {
      const ParticleEnsemble e = initialize_kurth(eps, t);
      CHECK(e.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(e.max_radius() <= 1.0);
      const RadialField f = deposit(e, 1024, 1.1);
      // E_kin = 3/10 for the static ball plus eps^2/2 int rho r^2 = 3 eps^2 / 10.
      CHECK(energies(e, f).kinetic == doctest::Approx(0.3 * (1.0 + eps * eps)).epsilon(2e-3));
      for (std::size_t i = 0; i < e.size(); i += 97) {
        CHECK(kurth_f0(e.r[i], e.w[i] - eps * e.r[i], e.L[i]) > 0.0);
      }
    }
    CHECK_THROWS_AS(initialize_kurth(1.0, t), InvalidArgument);
  }

  TEST_CASE("jitter is seeded") {
    const SteadyStateProfile p = solve_steady_state(build_ansatz(Family::PolytropicBall, 1, 0, 0), 1.0);
    TilingSpec t;
    t.particles = 5000;
    t.jitter = true;
    const ParticleEnsemble a = initialize_particles(p, t);
    const ParticleEnsemble b = initialize_particles(p, t);
    t.seed = 2;
    const ParticleEnsemble c = initialize_particles(p, t);
    CHECK(a == b);
    CHECK(!(a.r == c.r));
    CHECK(c.total_mass() == doctest::Approx(a.total_mass()).epsilon(0.02));
  }
}
