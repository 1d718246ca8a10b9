#include "vposc/kurth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vposc/errors.hpp"

namespace vposc {

namespace {

constexpr double kPi = std::numbers::pi;

double acceleration(double R) { return 1.0 / (R * R * R) - 1.0 / (R * R); }

void check_eps(double eps) {
  if (!(std::abs(eps) < 1.0)) {
    throw InvalidArgument("Kurth family requires |eps| < 1 (got " + std::to_string(eps) +
                          "); the orbit is unbounded otherwise");
  }
}

}  // namespace

double kurth_f0(double r, double w, double L) {
  if (r < 0.0 || L < 0.0 || !(L < 1.0)) return 0.0;
  if (r == 0.0) {
    if (L > 0.0) return 0.0;
    const double bracket = 1.0 - w * w;
    return bracket > 0.0 ? 3.0 / (4.0 * kPi * kPi * kPi) / std::sqrt(bracket) : 0.0;
  }
  const double bracket = 1.0 - r * r - w * w - L / (r * r) + L;
  if (!(bracket > 0.0)) return 0.0;
  return 3.0 / (4.0 * kPi * kPi * kPi) / std::sqrt(bracket);
}

double kurth_period(double eps) {
  check_eps(eps);
  return 2.0 * kPi * std::pow(1.0 - eps * eps, -1.5);
}

double kurth_energy(double R, double Rdot) {
  return 0.5 * Rdot * Rdot + 0.5 / (R * R) - 1.0 / R;
}

KurthState solve_R(double eps, double t_end, double dt) {
  check_eps(eps);
  if (!(dt > 0.0)) throw InvalidArgument("solve_R requires dt > 0");
  if (!(t_end >= 0.0)) throw InvalidArgument("solve_R requires t_end >= 0");
  const auto n = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  std::vector<KurthSample> traj;
  traj.reserve(n + 1);
  double R = 1.0;
  double V = eps;
  traj.push_back({0.0, R, V});
  for (std::size_t i = 0; i < n; ++i) {
    const double k1r = V;
    const double k1v = acceleration(R);
    const double k2r = V + 0.5 * dt * k1v;
    const double k2v = acceleration(R + 0.5 * dt * k1r);
    const double k3r = V + 0.5 * dt * k2v;
    const double k3v = acceleration(R + 0.5 * dt * k2r);
    const double k4r = V + dt * k3v;
    const double k4v = acceleration(R + dt * k3r);
    R += dt / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
    V += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!(R > 0.0) || !std::isfinite(V)) throw NumericalFailure("Kurth R-ODE left R > 0");
    traj.push_back({static_cast<double>(i + 1) * dt, R, V});
  }
  return KurthState(eps, std::move(traj));
}

double KurthState::radius_at(double t) const {
  const auto& tr = trajectory_;
  if (t <= tr.front().t) return tr.front().R;
  if (t >= tr.back().t) return tr.back().R;
  auto it = std::upper_bound(tr.begin(), tr.end(), t,
                             [](double value, const KurthSample& s) { return value < s.t; });
  const KurthSample& b = *it;
  const KurthSample& a = *(it - 1);
  const double h = b.t - a.t;
  const double s = (t - a.t) / h;
  const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
  const double h10 = s * (1.0 - s) * (1.0 - s);
  const double h01 = s * s * (3.0 - 2.0 * s);
  const double h11 = s * s * (s - 1.0);
  return h00 * a.R + h10 * h * a.Rdot + h01 * b.R + h11 * h * b.Rdot;
}

std::vector<double> KurthState::maxima_times() const {
  std::vector<double> out;
  const auto& tr = trajectory_;
  for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
    if (tr[i].R > tr[i - 1].R && tr[i].R >= tr[i + 1].R) {
      const double denom = tr[i - 1].R - 2.0 * tr[i].R + tr[i + 1].R;
      const double h = tr[i + 1].t - tr[i].t;
      const double shift = denom != 0.0 ? 0.5 * (tr[i - 1].R - tr[i + 1].R) / denom : 0.0;
      out.push_back(tr[i].t + shift * h);
    }
  }
  return out;
}

double KurthState::measured_period() const {
  const auto peaks = maxima_times();
  if (peaks.size() < 2) throw NoOscillation("R(t) has fewer than two maxima in range");
  return (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

double UniformBall::mass() const {
  return 4.0 * kPi / 3.0 * radius * radius * radius * density;
}

UniformBall kurth_exact_density(const KurthState& state, double t) {
  const double R = state.radius_at(t);
  return {R, 3.0 / (4.0 * kPi * R * R * R)};
}

}  // namespace vposc
