#pragma once

// Spherically symmetric equilibria of the gravitational Vlasov-Poisson
// system generated by ansatz functions f = phi(E0 - E) (L - L0)_+^l.
//
// With y = E0 - U0 the Poisson equation reduces to
//     y'(r) = -m(r) / r^2,     m'(r) = 4 pi r^2 rho(r, y(r)),
// which is integrated outward from a prescribed y(0) until y vanishes at
// the outer support radius R.

#include <string>
#include <string_view>
#include <vector>

namespace vposc {

enum class Family { PolytropicBall, PolytropicShell, King };

std::string_view to_string(Family family);
Family family_from_string(std::string_view name);

/// Parameters of phi(E0 - E) (L - L0)_+^l.  King ignores k, l and L0.
struct AnsatzModel {
  Family family = Family::PolytropicBall;
  double k = 1.0;
  double l = 0.0;
  double L0 = 0.0;

  /// phi(eta); zero for eta <= 0.
  double phi(double eta) const;

  /// (L - L0)_+^l, with the convention 0^0 = 1 for balls.
  double angular_factor(double L) const;

  /// Spatial density at radius r for reduced potential y, i.e. the velocity
  /// integral of the ansatz.  Equals r^{2l} g(y) when L0 = 0.
  double density(double r, double y) const;

  bool isotropic() const { return family == Family::King || l == 0.0; }

  bool operator==(const AnsatzModel&) const = default;
};

/// Validates the parameter window and returns the model.  Throws
/// InvalidArgument naming the violated bound.
AnsatzModel build_ansatz(Family family, double k, double l, double L0);

/// c_{k,l} = 2^{l+3/2} pi B(k+1, l+1) B(1/2, k+l+2), so that the
/// polytropic density is c_{k,l} r^{2l} y^{k+l+3/2}.
double polytrope_density_constant(double k, double l);

/// Reduced density kernel g(y) (the L0 = 0 velocity integral with the r^{2l}
/// factor removed).  Zero for y <= 0.
double g_of_y(const AnsatzModel& ansatz, double y);

struct GridSpec {
  /// Number of radial steps over [0, R] in the final table.
  int cells = 4096;
  /// Initial guess for the outer radius; doubled until y changes sign.
  double r_max = 1.0;
  int max_doublings = 24;
};

/// A solved equilibrium tabulated on a uniform radial grid r_j = j * dr
/// which extends at least one node past R.  Immutable after construction.
class SteadyStateProfile {
 public:
  SteadyStateProfile() = default;
  SteadyStateProfile(AnsatzModel ansatz, double y0, double dr,
                     std::vector<double> y, std::vector<double> rho,
                     std::vector<double> mass, std::vector<double> field,
                     double R, double Ri, double M_total);

  const AnsatzModel& ansatz() const { return ansatz_; }
  double y0() const { return y0_; }
  double dr() const { return dr_; }
  std::size_t nodes() const { return y_.size(); }
  double radius(std::size_t j) const { return static_cast<double>(j) * dr_; }

  const std::vector<double>& y() const { return y_; }
  const std::vector<double>& rho() const { return rho_; }
  const std::vector<double>& mass() const { return mass_; }
  const std::vector<double>& field() const { return field_; }

  double R() const { return R_; }
  double Ri() const { return Ri_; }
  double E0() const { return -M_total_ / R_; }
  double M_total() const { return M_total_; }

  /// Linear interpolation on the table; exact vacuum solution beyond it.
  double y_at(double r) const;
  double rho_at(double r) const;
  double mass_at(double r) const;
  double field_at(double r) const;
  /// U0(r) = E0 - y(r).
  double potential_at(double r) const { return E0() - y_at(r); }

  /// Mean density M / (4 pi R^3 / 3).
  double mean_density() const;
  /// 1 / sqrt(mean density) in units with G = 1.
  double dynamical_time() const;

 private:
  double interpolate(const std::vector<double>& table, double r) const;

  AnsatzModel ansatz_{};
  double y0_ = 0.0;
  double dr_ = 0.0;
  std::vector<double> y_, rho_, mass_, field_;
  double R_ = 0.0;
  double Ri_ = 0.0;
  double M_total_ = 0.0;
};

/// Integrates the reduced Poisson equation for the given central value.
/// Throws NonCompactSupport when y stays positive up to the largest radius
/// tried and NumericalFailure when the integrator produces non-finite values.
SteadyStateProfile solve_steady_state(const AnsatzModel& ansatz, double y0,
                                      const GridSpec& grid = {});

/// rho0(0) for balls, the maximum of rho0 for shells and anisotropic states.
double central_density(const SteadyStateProfile& profile);

/// f0(r, w, L) = phi(E0 - E) (L - L0)_+^l with E = w^2/2 + L/(2r^2) + U0(r).
double evaluate_f0(const SteadyStateProfile& profile, double r, double w,
                   double L);

}  // namespace vposc
