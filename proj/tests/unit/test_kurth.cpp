#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "vposc/errors.hpp"
#include "vposc/kurth.hpp"

using namespace vposc;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("kurth") {
  TEST_CASE("velocity integral of f0 is the uniform density") {
    boost::math::quadrature::tanh_sinh<double> q;
    for (double r : {0.2, 0.5, 0.95}) {
      auto over_L = [&](double L) {
        const double A = (1.0 - r * r) * (1.0 - L / (r * r));
        if (!(A > 0.0)) return 0.0;
        const double s = std::sqrt(A);
        return q.integrate([&](double w) { return kurth_f0(r, w, L); }, -s, s);
      };
      const double rho = kPi / (r * r) * q.integrate(over_L, 0.0, r * r);
      CHECK(rho == doctest::Approx(3.0 / (4.0 * kPi)).epsilon(1e-8));
    }
    CHECK(kurth_f0(1.2, 0.0, 0.0) == 0.0);
    CHECK(kurth_f0(0.5, 0.0, 0.3) == 0.0);  // L > r^2
  }

  TEST_CASE("R(t) period agrees with the closed form") {
    for (double eps : {0.1, 0.2, 0.3, 0.4, 0.5}) {
      const KurthState s = solve_R(eps, 4.5 * kurth_period(eps));
      CHECK(std::abs(s.measured_period() / kurth_period(eps) - 1.0) < 1e-6);
    }
    CHECK(kurth_period(0.0) == doctest::Approx(2.0 * kPi));
    CHECK_THROWS_AS(kurth_period(1.0), InvalidArgument);
    CHECK_THROWS_AS(solve_R(0.2, 10.0, 0.0), InvalidArgument);
  }

  TEST_CASE("R-ODE energy is conserved and R returns to 1") {
    const double eps = 0.4;
    const KurthState s = solve_R(eps, 3.0 * kurth_period(eps));
    const double E = 0.5 * (eps * eps - 1.0);
    double worst = 0.0;
    for (const auto& p : s.trajectory()) worst = std::max(worst, std::abs(kurth_energy(p.R, p.Rdot) - E));
    CHECK(worst < 1e-10);
    CHECK(s.radius_at(0.0) == doctest::Approx(1.0));
    CHECK(s.radius_at(2.0 * kurth_period(eps)) == doctest::Approx(1.0).epsilon(1e-7));
    // Turning points solve E = 1/(2R^2) - 1/R: R = 1 / (1 -+ eps).
    double rmax = 0.0;
    for (const auto& p : s.trajectory()) rmax = std::max(rmax, p.R);
    CHECK(rmax == doctest::Approx(1.0 / (1.0 - eps)).epsilon(1e-6));
  }

  TEST_CASE("static ball has no oscillation") {
    const KurthState s = solve_R(0.0, 20.0);
    for (const auto& p : s.trajectory()) CHECK(std::abs(p.R - 1.0) < 1e-12);
    CHECK_THROWS_AS(s.measured_period(), NoOscillation);
  }

  TEST_CASE("exact density keeps unit mass") {
    const KurthState s = solve_R(0.3, 10.0);
    for (double t : {0.0, 1.7, 5.2}) {
      const UniformBall b = kurth_exact_density(s, t);
      CHECK(b.mass() == doctest::Approx(1.0));
      CHECK(b.at(1.01 * b.radius) == 0.0);
    }
  }
}
