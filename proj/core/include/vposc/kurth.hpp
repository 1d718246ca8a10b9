#pragma once

// Kurth's uniform-density ball and its exactly periodic breathing family.
// The radius R(t) of the support solves R'' = R^{-3} - R^{-2}, R(0) = 1,
// R'(0) = eps, and the density is 3 / (4 pi R^3) on the ball of radius R.

#include <vector>

namespace vposc {

/// 3/(4 pi^3) (1 - r^2 - |v|^2 + L)^{-1/2} with |v|^2 = w^2 + L/r^2, zero
/// outside the admissible set (bracket > 0 and L < 1).
double kurth_f0(double r, double w, double L);

/// 2 pi (1 - eps^2)^{-3/2}.  Throws InvalidArgument for |eps| >= 1.
double kurth_period(double eps);

/// R'^2/2 + 1/(2R^2) - 1/R, constant along solutions (= (eps^2 - 1)/2).
double kurth_energy(double R, double Rdot);

struct KurthSample {
  double t;
  double R;
  double Rdot;
};

class KurthState {
 public:
  KurthState(double eps, std::vector<KurthSample> trajectory)
      : eps_(eps), trajectory_(std::move(trajectory)) {}

  double eps() const { return eps_; }
  const std::vector<KurthSample>& trajectory() const { return trajectory_; }

  /// Cubic Hermite interpolation of R between samples.
  double radius_at(double t) const;

  /// Times of the local maxima of R, each refined by a parabola through the
  /// three samples around it.
  std::vector<double> maxima_times() const;

  /// Mean spacing of successive maxima; throws NoOscillation with fewer
  /// than two maxima.
  double measured_period() const;

 private:
  double eps_;
  std::vector<KurthSample> trajectory_;
};

inline constexpr double kKurthDefaultStep = 1e-4 * 6.283185307179586;

/// Classical RK4 on (R, R').  Throws InvalidArgument for |eps| >= 1 or dt <= 0.
KurthState solve_R(double eps, double t_end, double dt = kKurthDefaultStep);

struct UniformBall {
  double radius;
  double density;

  double at(double r) const { return r <= radius ? density : 0.0; }
  double mass() const;
};

UniformBall kurth_exact_density(const KurthState& state, double t);

}  // namespace vposc
