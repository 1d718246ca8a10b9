#include "vposc/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "vposc/errors.hpp"
#include "vposc/parallel.hpp"

namespace vposc {

namespace {

constexpr double kMaxPolarAngle = 0.05;

struct PhasePoint {
  double r, w, L;
};

class Kernel {
 public:
  Kernel(const RadialField& field, double dt, const PushOptions& opt)
      : field_(field),
        dt_(dt),
        scheme_(opt.scheme),
        frame_(opt.frame),
        switch_radius_(opt.origin_switch_radius),
        self_scale_(opt.force.self_scale),
        external_(opt.force.external),
        external_scale_(opt.force.external_scale) {}

  double gravity(double r) const {
    double g = self_scale_ * field_.field_at(r);
    if (external_ != nullptr) g += external_scale_ * external_->at(r);
    return g;
  }

  // Returns true when the planar frame was used.
  bool step(PhasePoint& p) const {
    if (frame_ == PushFrame::Hybrid && polar_ok(p.r, p.L)) {
      const double r3 = p.r * p.r * p.r;
      const double a = p.L / r3 - gravity(p.r);
      double r_new;
      double w_new;
      if (scheme_ == PushScheme::SymplecticEuler) {
        w_new = p.w + a * dt_;
        r_new = p.r + w_new * dt_;
      } else {
        r_new = p.r + p.w * dt_;
        w_new = p.w + a * dt_;
      }
      if (polar_ok(r_new, p.L)) {
        p.r = r_new;
        p.w = w_new;
        return false;
      }
    }
    planar_step(p);
    return true;
  }

 private:
  // Hybrid frame: polar steps only outside the switch radius and where the
  // orbit turns by less than kMaxPolarAngle per step.
  bool polar_ok(double r, double L) const {
    const double limit = kMaxPolarAngle * r * r;
    return r >= switch_radius_ && L * dt_ * dt_ <= limit * limit;
  }

  // The particle is placed at (r, 0) with velocity (w, sqrt(L) / r); the
  // central acceleration has no x2 component there.
  void planar_step(PhasePoint& p) const {
    const double v2 = p.r > 0.0 ? std::sqrt(p.L) / p.r : 0.0;
    const double kick = -gravity(p.r) * dt_;
    double x1, x2, v1;
    if (scheme_ == PushScheme::SymplecticEuler) {
      v1 = p.w + kick;
      x1 = p.r + v1 * dt_;
      x2 = v2 * dt_;
    } else {
      x1 = p.r + p.w * dt_;
      x2 = v2 * dt_;
      v1 = p.w + kick;
    }
    const double r = std::sqrt(x1 * x1 + x2 * x2);
    p.w = r > 0.0 ? (x1 * v1 + x2 * v2) / r : std::abs(v1);
    p.r = r;
    if (scheme_ == PushScheme::ForwardEuler) {
      // x cross v is exactly invariant only for the symplectic variant.
      const double cross = x1 * v2 - x2 * v1;
      p.L = cross * cross;
    }
  }

  const RadialField& field_;
  double dt_;
  PushScheme scheme_;
  PushFrame frame_;
  double switch_radius_;
  double self_scale_;
  const TabulatedRadialFunction* external_;
  double external_scale_;
};

// Radial kick w += -g(r) dt on every particle (tangential velocity is
// unchanged by a central force).
void radial_kick(ParticleEnsemble& ens, const Kernel& kernel, double dt, int workers) {
  parallel_chunks(ens.size(), workers, [&](int, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) ens.w[i] -= kernel.gravity(ens.r[i]) * dt;
  });
}

// Kinetic energy with the half-step velocities brought to the integer time.
double synchronized_kinetic(const ParticleEnsemble& ens, const Kernel& kernel, double half_dt) {
  double kin = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const double r = ens.r[i];
    const double w = ens.w[i] - kernel.gravity(r) * half_dt;
    kin += ens.weight[i] * (w * w + (r > 0.0 ? ens.L[i] / (r * r) : 0.0));
  }
  return 0.5 * kin;
}

}  // namespace

void SimulationConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidArgument(std::string("simulation config: ") + what);
  };
  require(dt > 0.0 && std::isfinite(dt), "dt must be positive");
  require(t_end > 0.0 && std::isfinite(t_end), "t_end must be positive");
  require(particles > 0, "particles must be positive");
  require(grid_cells >= 8, "grid_cells must be at least 8");
  require(output_stride > 0, "output_stride must be positive");
  require(workers > 0, "workers must be positive");
  require(snapshots >= 0, "snapshots must be non-negative");
  require(hist_nr > 0 && hist_nw > 0 && hist_nL > 0, "histogram bins must be positive");
  require(std::isfinite(origin_switch_radius), "origin_switch_radius must be finite");
}

std::size_t SimulationConfig::steps() const {
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

double TabulatedRadialFunction::at(double radius) const {
  if (r.empty() || radius < r.front() || radius > r.back()) return 0.0;
  auto it = std::upper_bound(r.begin(), r.end(), radius);
  if (it == r.end()) return value.back();
  const auto j = static_cast<std::size_t>(it - r.begin());
  const double t = (radius - r[j - 1]) / (r[j] - r[j - 1]);
  return (1.0 - t) * value[j - 1] + t * value[j];
}

double origin_switch_radius(const SimulationConfig& config, double dr) {
  if (config.origin_switch_radius > 0.0) return std::max(config.origin_switch_radius, dr);
  return 4.0 * dr;
}

PushStats push(ParticleEnsemble& ens, const RadialField& field, double dt,
               const PushOptions& options) {
  const Kernel kernel(field, dt, options);
  const int workers = std::max(1, options.workers);
  std::vector<double> max_r(static_cast<std::size_t>(workers), 0.0);
  std::vector<std::size_t> planar(static_cast<std::size_t>(workers), 0);
  std::atomic<bool> failed{false};
  parallel_chunks(ens.size(), workers, [&](int k, std::size_t begin, std::size_t end) {
    double local_max = 0.0;
    std::size_t local_planar = 0;
    double* r = ens.r.data();
    double* w = ens.w.data();
    double* L = ens.L.data();
    for (std::size_t i = begin; i < end; ++i) {
      PhasePoint p{r[i], w[i], L[i]};
      if (kernel.step(p)) ++local_planar;
      if (!(p.r >= 0.0) || !std::isfinite(p.w)) failed.store(true, std::memory_order_relaxed);
      r[i] = p.r;
      w[i] = p.w;
      L[i] = p.L;
      local_max = std::max(local_max, p.r);
    }
    max_r[static_cast<std::size_t>(k)] = local_max;
    planar[static_cast<std::size_t>(k)] = local_planar;
  });
  if (failed.load()) throw NumericalFailure("push produced a negative or non-finite radius");
  PushStats stats;
  for (int k = 0; k < workers; ++k) {
    stats.max_radius = std::max(stats.max_radius, max_r[static_cast<std::size_t>(k)]);
    stats.planar += planar[static_cast<std::size_t>(k)];
  }
  return stats;
}

void half_kick(ParticleEnsemble& ens, const RadialField& field, double dt,
               const PushOptions& options) {
  if (options.scheme != PushScheme::SymplecticEuler) return;
  const Kernel kernel(field, dt, options);
  radial_kick(ens, kernel, 0.5 * dt, std::max(1, options.workers));
}

RunResult run(ParticleEnsemble ens, const SimulationConfig& cfg, const ForceModel& force,
              const HistogramBinning* binning) {
  cfg.validate();
  if (ens.empty()) throw InvalidArgument("run requires a nonempty ensemble");
  const std::size_t n_steps = cfg.steps();
  const std::size_t snapshot_every =
      cfg.snapshots > 1 ? std::max<std::size_t>(1, n_steps / static_cast<std::size_t>(cfg.snapshots - 1))
                        : n_steps + 1;

  RunResult out;
  DiagnosticSeries& series = out.series;
  if (cfg.histograms && cfg.snapshots > 0) {
    series.binning = binning != nullptr
                         ? *binning
                         : HistogramBinning::around(ens, cfg.hist_nr, cfg.hist_nw, cfg.hist_nL);
  }

  PushOptions options;
  options.scheme = cfg.scheme;
  options.frame = cfg.frame;
  options.force = force;
  options.workers = cfg.workers;

  const bool staggered = cfg.scheme == PushScheme::SymplecticEuler;
  double r_max = ens.max_radius();
  double t = 0.0;
  RadialField field = deposit(ens, cfg.grid_cells, kGridMargin * r_max, cfg.workers);
  // Velocities are carried half a step behind the positions.
  half_kick(ens, field, -cfg.dt, options);
  for (std::size_t step = 0;; ++step) {
    if (step > 0) field = deposit(ens, cfg.grid_cells, kGridMargin * r_max, cfg.workers);
    if (step % static_cast<std::size_t>(cfg.output_stride) == 0 || step == n_steps) {
      Energies e = energies(ens, field);
      if (staggered) {
        e.kinetic = synchronized_kinetic(ens, Kernel(field, cfg.dt, options), 0.5 * cfg.dt);
      }
      series.record(t, e, ens.total_mass(), r_max);
    }
    if (cfg.snapshots > 0 && (step % snapshot_every == 0)) {
      series.snapshot_times.push_back(t);
      series.densities.push_back({field.dr(), field.rho()});
      if (cfg.histograms) series.histograms.push_back(phase_histogram(ens, series.binning, cfg.workers));
    }
    if (step == n_steps) break;
    options.origin_switch_radius = origin_switch_radius(cfg, field.dr());
    r_max = push(ens, field, cfg.dt, options).max_radius;
    t = static_cast<double>(step + 1) * cfg.dt;
  }
  half_kick(ens, field, cfg.dt, options);
  out.final_state = std::move(ens);
  out.final_time = t;
  out.steps = n_steps;
  return out;
}

}  // namespace vposc
