#include "vposc/steady_state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "vposc/errors.hpp"

namespace vposc {

namespace {

constexpr double kPi = std::numbers::pi;

// 4 pi [e^y sqrt(pi/2) erf(sqrt y) - sqrt(2y)(1+y) + (2y)^{3/2}/6]; the
// closed form cancels badly for small y, where the power series is used.
double king_density(double y) {
  if (y <= 0.0) return 0.0;
  if (y < 0.5) {
    // 2 pi sqrt(2) sqrt(pi) sum_{n>=2} y^{n+1/2} / Gamma(n + 3/2)
    double gamma = std::tgamma(3.5);  // Gamma(n + 3/2) at n = 2
    double power = y * y * std::sqrt(y);
    double sum = 0.0;
    for (int n = 2; n < 40; ++n) {
      const double term = power / gamma;
      sum += term;
      if (term < 1e-18 * sum) break;
      power *= y;
      gamma *= n + 1.5;
    }
    return 2.0 * kPi * std::sqrt(2.0 * kPi) * sum;
  }
  const double s = std::sqrt(2.0 * y);
  return 4.0 * kPi *
         (std::exp(y) * std::sqrt(kPi / 2.0) * std::erf(std::sqrt(y)) -
          s * (1.0 + y) + s * s * s / 6.0);
}

struct State {
  double y;
  double m;
};

class ReducedPoisson {
 public:
  explicit ReducedPoisson(const AnsatzModel& ansatz) : ansatz_(ansatz) {}

  State rhs(double r, const State& s) const {
    if (r <= 0.0) return {0.0, 0.0};
    return {-s.m / (r * r), 4.0 * kPi * r * r * ansatz_.density(r, s.y)};
  }

  State rk4(double r, const State& s, double h) const {
    const State k1 = rhs(r, s);
    const State k2 = rhs(r + 0.5 * h, {s.y + 0.5 * h * k1.y, s.m + 0.5 * h * k1.m});
    const State k3 = rhs(r + 0.5 * h, {s.y + 0.5 * h * k2.y, s.m + 0.5 * h * k2.m});
    const State k4 = rhs(r + h, {s.y + h * k3.y, s.m + h * k3.m});
    return {s.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
            s.m + h / 6.0 * (k1.m + 2.0 * k2.m + 2.0 * k3.m + k4.m)};
  }

  // First step off the regular singular point r = 0:
  //   m ~ 4 pi g(y0) h^{2l+3} / (2l+3),  y ~ y0 - 4 pi g(y0) h^{2l+2} / ((2l+2)(2l+3)).
  State taylor_start(double y0, double h) const {
    if (ansatz_.family == Family::PolytropicShell) return {y0, 0.0};
    const double l = ansatz_.family == Family::King ? 0.0 : ansatz_.l;
    const double g0 = g_of_y(ansatz_, y0);
    const double p = 2.0 * l + 3.0;
    const double m = 4.0 * kPi * g0 * std::pow(h, p) / p;
    const double y = y0 - 4.0 * kPi * g0 * std::pow(h, p - 1.0) / ((p - 1.0) * p);
    return {y, m};
  }

 private:
  const AnsatzModel& ansatz_;
};

struct Trajectory {
  std::vector<State> nodes;
  double h = 0.0;
  bool crossed = false;
};

// Fixed-step integration from 0 to at most n_steps * h, stopping at the first
// node where y <= 0.
Trajectory integrate(const ReducedPoisson& ode, double y0, double h, int n_steps) {
  Trajectory traj;
  traj.h = h;
  traj.nodes.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.nodes.push_back({y0, 0.0});
  State s = ode.taylor_start(y0, h);
  traj.nodes.push_back(s);
  if (s.y <= 0.0) {
    traj.crossed = true;
    return traj;
  }
  for (int j = 1; j < n_steps; ++j) {
    s = ode.rk4(j * h, s, h);
    if (!std::isfinite(s.y) || !std::isfinite(s.m)) {
      throw NumericalFailure("steady state integrator produced non-finite values at r = " +
                             std::to_string(j * h));
    }
    traj.nodes.push_back(s);
    if (s.y <= 0.0) {
      traj.crossed = true;
      break;
    }
  }
  return traj;
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::PolytropicBall: return "polytropic_ball";
    case Family::PolytropicShell: return "polytropic_shell";
    case Family::King: return "king";
  }
  return "unknown";
}

Family family_from_string(std::string_view name) {
  if (name == "polytropic_ball") return Family::PolytropicBall;
  if (name == "polytropic_shell") return Family::PolytropicShell;
  if (name == "king") return Family::King;
  throw InvalidArgument("unknown ansatz family '" + std::string(name) + "'");
}

double AnsatzModel::phi(double eta) const {
  if (eta <= 0.0) return 0.0;
  if (family == Family::King) return std::expm1(eta);
  return k == 0.0 ? 1.0 : std::pow(eta, k);
}

double AnsatzModel::angular_factor(double L) const {
  if (family == Family::King) return 1.0;
  if (family == Family::PolytropicShell) {
    if (L <= L0) return 0.0;
    return l == 0.0 ? 1.0 : std::pow(L - L0, l);
  }
  if (l == 0.0) return 1.0;
  return L > 0.0 ? std::pow(L, l) : 0.0;
}

double AnsatzModel::density(double r, double y) const {
  switch (family) {
    case Family::King:
      return king_density(y);
    case Family::PolytropicBall: {
      if (y <= 0.0) return 0.0;
      const double radial = l == 0.0 ? 1.0 : std::pow(r, 2.0 * l);
      return polytrope_density_constant(k, l) * radial * std::pow(y, k + l + 1.5);
    }
    case Family::PolytropicShell: {
      if (r <= 0.0) return 0.0;
      const double eff = y - L0 / (2.0 * r * r);
      if (eff <= 0.0) return 0.0;
      const double radial = l == 0.0 ? 1.0 : std::pow(r, 2.0 * l);
      return polytrope_density_constant(k, l) * radial * std::pow(eff, k + l + 1.5);
    }
  }
  return 0.0;
}

AnsatzModel build_ansatz(Family family, double k, double l, double L0) {
  AnsatzModel a{family, k, l, L0};
  if (family == Family::King) {
    a.k = 0.0;
    a.l = 0.0;
    a.L0 = 0.0;
    return a;
  }
  if (!(l > -0.5)) {
    throw InvalidArgument("ansatz requires l > -1/2 (got l = " + std::to_string(l) + ")");
  }
  if (!(k > -1.0)) {
    throw InvalidArgument("ansatz requires k > -1 (got k = " + std::to_string(k) + ")");
  }
  if (!(k < 3.0 * l + 3.5)) {
    throw InvalidArgument("ansatz requires k < 3 l + 7/2 (got k = " + std::to_string(k) +
                          ", bound " + std::to_string(3.0 * l + 3.5) + ")");
  }
  if (!(L0 >= 0.0)) {
    throw InvalidArgument("ansatz requires L0 >= 0 (got L0 = " + std::to_string(L0) + ")");
  }
  if (family == Family::PolytropicShell && !(L0 > 0.0)) {
    throw InvalidArgument("polytropic shell requires L0 > 0");
  }
  if (family == Family::PolytropicBall && L0 != 0.0) {
    throw InvalidArgument("polytropic ball requires L0 = 0");
  }
  return a;
}

double polytrope_density_constant(double k, double l) {
  return std::pow(2.0, l + 1.5) * kPi * std::beta(k + 1.0, l + 1.0) *
         std::beta(0.5, k + l + 2.0);
}

double g_of_y(const AnsatzModel& ansatz, double y) {
  if (y <= 0.0) return 0.0;
  if (ansatz.family == Family::King) return king_density(y);
  return polytrope_density_constant(ansatz.k, ansatz.l) * std::pow(y, ansatz.k + ansatz.l + 1.5);
}

SteadyStateProfile::SteadyStateProfile(AnsatzModel ansatz, double y0, double dr,
                                       std::vector<double> y, std::vector<double> rho,
                                       std::vector<double> mass, std::vector<double> field,
                                       double R, double Ri, double M_total)
    : ansatz_(ansatz),
      y0_(y0),
      dr_(dr),
      y_(std::move(y)),
      rho_(std::move(rho)),
      mass_(std::move(mass)),
      field_(std::move(field)),
      R_(R),
      Ri_(Ri),
      M_total_(M_total) {}

double SteadyStateProfile::interpolate(const std::vector<double>& table, double r) const {
  const double x = r / dr_;
  const auto j = static_cast<std::size_t>(x);
  if (j + 1 >= table.size()) return table.back();
  const double t = x - static_cast<double>(j);
  return (1.0 - t) * table[j] + t * table[j + 1];
}

double SteadyStateProfile::y_at(double r) const {
  if (r < 0.0) r = -r;
  if (r >= radius(nodes() - 1)) return M_total_ / r - M_total_ / R_;
  return interpolate(y_, r);
}

double SteadyStateProfile::rho_at(double r) const {
  if (r < 0.0) r = -r;
  if (r >= R_ || (r < Ri_)) return 0.0;
  return interpolate(rho_, r);
}

double SteadyStateProfile::mass_at(double r) const {
  if (r <= 0.0) return 0.0;
  if (r >= R_) return M_total_;
  return interpolate(mass_, r);
}

double SteadyStateProfile::field_at(double r) const {
  if (r <= 0.0) return 0.0;
  if (r >= radius(nodes() - 1)) return M_total_ / (r * r);
  return interpolate(field_, r);
}

double SteadyStateProfile::mean_density() const {
  return M_total_ / (4.0 * kPi / 3.0 * R_ * R_ * R_);
}

double SteadyStateProfile::dynamical_time() const { return 1.0 / std::sqrt(mean_density()); }

SteadyStateProfile solve_steady_state(const AnsatzModel& ansatz, double y0, const GridSpec& grid) {
  if (!(y0 > 0.0)) throw InvalidArgument("steady state requires y(0) > 0");
  if (grid.cells < 16) throw InvalidArgument("steady state grid needs at least 16 cells");
  const ReducedPoisson ode(ansatz);

  const double Ri = ansatz.family == Family::PolytropicShell ? std::sqrt(ansatz.L0 / (2.0 * y0))
                                                             : 0.0;

  // Pass 1: locate R coarsely, doubling the interval until y changes sign.
  double r_max = std::max(grid.r_max, 2.0 * Ri);
  Trajectory coarse;
  for (int attempt = 0;; ++attempt) {
    coarse = integrate(ode, y0, r_max / grid.cells, grid.cells);
    if (coarse.crossed) break;
    if (attempt >= grid.max_doublings) {
      throw NonCompactSupport("y(r) stays positive up to r_max = " + std::to_string(r_max) +
                                  " (y(r_max) = " + std::to_string(coarse.nodes.back().y) +
                                  "); raise r_max",
                              r_max, coarse.nodes.back().y);
    }
    r_max *= 2.0;
  }
  const double R_guess = static_cast<double>(coarse.nodes.size() - 1) * coarse.h;

  // Pass 2: resolve [0, R] with the requested number of cells.
  const double h = R_guess / grid.cells;
  Trajectory fine = integrate(ode, y0, h, 2 * grid.cells + 8);
  if (!fine.crossed) {
    throw NumericalFailure("steady state refinement pass lost the support edge");
  }

  // Bisection on the step length from the last positive node.
  const std::size_t last = fine.nodes.size() - 2;
  const State base = fine.nodes[last];
  const double r_base = static_cast<double>(last) * h;
  double lo = 0.0;
  double hi = h;
  if (last == 0) {
    // Degenerate: support edge inside the analytic first step.
    throw NumericalFailure("support radius below one grid cell; increase cells");
  }
  while (hi - lo > 1e-10 * (r_base + hi)) {
    const double mid = 0.5 * (lo + hi);
    const State s = ode.rk4(r_base, base, mid);
    if (s.y > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double R = r_base + 0.5 * (lo + hi);
  const double M = ode.rk4(r_base, base, 0.5 * (lo + hi)).m;

  // Table over [0, r_n] with r_n >= R; exterior nodes use the vacuum solution.
  const std::size_t n_nodes = last + 2;
  std::vector<double> y(n_nodes), rho(n_nodes), mass(n_nodes), field(n_nodes);
  for (std::size_t j = 0; j < n_nodes; ++j) {
    const double r = static_cast<double>(j) * h;
    if (j <= last) {
      y[j] = fine.nodes[j].y;
      mass[j] = fine.nodes[j].m;
      rho[j] = ansatz.density(r, y[j]);
    } else {
      y[j] = M / r - M / R;
      mass[j] = M;
      rho[j] = 0.0;
    }
    field[j] = r > 0.0 ? mass[j] / (r * r) : 0.0;
  }
  return SteadyStateProfile(ansatz, y0, h, std::move(y), std::move(rho), std::move(mass),
                            std::move(field), R, Ri, M);
}

double central_density(const SteadyStateProfile& profile) {
  if (profile.ansatz().isotropic() && profile.ansatz().family != Family::PolytropicShell) {
    return profile.rho().front();
  }
  return *std::max_element(profile.rho().begin(), profile.rho().end());
}

double evaluate_f0(const SteadyStateProfile& profile, double r, double w, double L) {
  if (r < 0.0 || L < 0.0) return 0.0;
  if (r >= profile.R()) return 0.0;
  const double centrifugal = r > 0.0 ? L / (2.0 * r * r) : (L > 0.0 ? INFINITY : 0.0);
  const double eta = profile.y_at(r) - 0.5 * w * w - centrifugal;
  if (eta <= 0.0) return 0.0;
  const AnsatzModel& a = profile.ansatz();
  return a.phi(eta) * a.angular_factor(L);
}

}  // namespace vposc
