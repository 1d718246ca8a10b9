#include "vposc/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <thread>

#include "vposc/analysis.hpp"
#include "vposc/errors.hpp"
#include "vposc/kurth.hpp"
#include "vposc/perturbations.hpp"
#include "vposc/profile_io.hpp"

namespace vposc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v, int digits = 10) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string csv_safe(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  }
  return s;
}

std::filesystem::path output_path(const RunConfig& c, const std::string& suffix) {
  std::filesystem::create_directories(c.outputs.dir);
  return std::filesystem::path(c.outputs.dir) / (c.stem() + suffix);
}

double max_relative_drift(const std::vector<double>& v) {
  if (v.empty() || v.front() == 0.0) return kNaN;
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, std::abs(x - v.front()) / std::abs(v.front()));
  return worst;
}

}  // namespace

InitialState prepare_initial_state(const RunConfig& cfg) {
  cfg.validate();
  const TilingSpec tiling{cfg.engine.particles, cfg.engine.jitter, cfg.engine.seed};
  InitialState s;
  if (cfg.kurth) {
    s.ensemble = initialize_kurth(cfg.kurth->eps, tiling);
    s.f0 = kurth_f0;
    s.dynamical_time = 1.0 / std::sqrt(3.0 / (4.0 * std::numbers::pi));
  } else {
    const SteadyStateBlock& b = *cfg.steady_state;
    const GridSpec grid = b.grid();
    auto profile = std::make_shared<const SteadyStateProfile>(
        solve_steady_state(build_ansatz(b.family, b.k, b.l, b.L0), b.y0, grid));
    s.ensemble = initialize_particles(*profile, tiling);
    s.f0 = [profile](double r, double w, double L) { return evaluate_f0(*profile, r, w, L); };
    s.dynamical_time = profile->dynamical_time();
    s.profile = std::move(profile);
  }
  apply_perturbation(s.ensemble, cfg.perturbation, s.f0, s.dynamical_time, cfg.engine);
  if (s.ensemble.empty()) throw EmptySupport("perturbation removed every particle");
  return s;
}

RunSummary describe(const RunConfig& cfg) {
  RunSummary s;
  s.id = cfg.id;
  if (cfg.kurth) {
    s.model = "kurth";
    s.kurth_eps = cfg.kurth->eps;
    s.k = s.l = s.L0 = s.y0 = kNaN;
  } else {
    const SteadyStateBlock& b = *cfg.steady_state;
    s.model = std::string(to_string(b.family));
    s.k = b.k;
    s.l = b.l;
    s.L0 = b.L0;
    s.y0 = b.y0;
    s.kurth_eps = kNaN;
  }
  s.perturbation = std::string(to_string(cfg.perturbation.kind));
  const PhaseShift& sh = cfg.perturbation.shift;
  s.eps = cfg.perturbation.kind == PerturbationKind::Shift ? std::hypot(sh.dr, sh.dw, sh.dL)
                                                            : cfg.perturbation.eps;
  s.particles = cfg.engine.particles;
  s.period = s.uncertainty = s.amplitude = s.decay_rate = s.decay_residual = s.er_constant = kNaN;
  s.energy_drift = s.mass_drift = kNaN;
  return s;
}

RunSummary analyze_series(const RunConfig& cfg, const DiagnosticSeries& series) {
  RunSummary s = describe(cfg);
  s.energy_drift = max_relative_drift(series.h_total);
  s.mass_drift = max_relative_drift(series.mass);
  const auto& values =
      cfg.analysis.observable == Observable::KineticEnergy ? series.e_kin : series.e_pot;

  PeriodOptions po;
  po.window_start = cfg.analysis.window_start;
  po.window_end = cfg.analysis.window_end;
  po.noise_floor = cfg.analysis.noise_floor;
  po.min_cycles = cfg.analysis.min_cycles;
  try {
    const PeriodEstimate pe = estimate_period(series.times, values, po);
    s.period = pe.period;
    s.uncertainty = pe.uncertainty;
    s.amplitude = pe.amplitude;
  } catch (const NoOscillation& e) {
    s.status = "no_oscillation";
    s.message = e.what();
  }
  // Strongly damped runs may fail the period check and still give a decay fit.
  if (cfg.analysis.damping) {
    DampingOptions d;
    d.period = po;
    try {
      const DampingFit fit = fit_damping(series.times, values, d);
      s.decay_rate = fit.rate;
      s.decay_residual = fit.residual;
      s.nonmonotone = fit.nonmonotone_count;
    } catch (const NoOscillation& e) {
      if (s.message.empty()) s.message = std::string("damping: ") + e.what();
    }
  }
  if (s.status == "ok" && cfg.steady_state && cfg.steady_state->family != Family::King) {
    s.er_constant = eddington_ritter_constant(s.k, s.l, s.y0, s.period);
  }
  return s;
}

SimulationOutcome simulate(const RunConfig& cfg, std::ostream* log) {
  InitialState init = prepare_initial_state(cfg);
  if (log) {
    *log << cfg.id << ": " << init.ensemble.size() << " particles, mass "
         << num(init.ensemble.total_mass()) << ", " << cfg.engine.steps() << " steps\n";
  }
  SimulationOutcome out;
  out.profile = init.profile;
  out.result = run(std::move(init.ensemble), cfg.engine);
  out.summary = analyze_series(cfg, out.result.series);
  return out;
}

void write_analysis_header(std::ostream& out) {
  out << "run_id,model,k,l,L0,y0,kurth_eps,perturbation,eps,particles,period,uncertainty,"
         "amplitude,decay_rate,decay_residual,nonmonotone,er_constant,energy_drift,mass_drift,"
         "status,message\n";
}

void write_analysis_row(std::ostream& out, const RunSummary& s) {
  out << csv_safe(s.id) << ',' << s.model << ',' << num(s.k) << ',' << num(s.l) << ','
      << num(s.L0) << ',' << num(s.y0) << ',' << num(s.kurth_eps) << ',' << s.perturbation << ','
      << num(s.eps) << ',' << s.particles << ',' << num(s.period) << ',' << num(s.uncertainty)
      << ',' << num(s.amplitude) << ',' << num(s.decay_rate) << ',' << num(s.decay_residual)
      << ',' << s.nonmonotone << ',' << num(s.er_constant) << ',' << num(s.energy_drift) << ','
      << num(s.mass_drift) << ',' << s.status << ',' << csv_safe(s.message) << '\n';
}

void write_summary(std::ostream& out, const RunSummary& s) {
  out << "id             " << s.id << '\n'
      << "status         " << s.status << (s.message.empty() ? "" : " (" + s.message + ")") << '\n'
      << "period         " << num(s.period) << " +- " << num(s.uncertainty) << '\n'
      << "amplitude      " << num(s.amplitude) << '\n'
      << "decay_rate     " << num(s.decay_rate) << '\n'
      << "nonmonotone    " << s.nonmonotone << '\n'
      << "er_constant    " << num(s.er_constant) << '\n'
      << "energy_drift   " << num(s.energy_drift) << '\n'
      << "mass_drift     " << num(s.mass_drift) << '\n';
}

SteadyStateProfile cmd_steady(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  if (!cfg.steady_state) throw InvalidArgument("steady needs a steady_state block");
  const SteadyStateBlock& b = *cfg.steady_state;
  const GridSpec grid = b.grid();
  SteadyStateProfile p;
  try {
    p = solve_steady_state(build_ansatz(b.family, b.k, b.l, b.L0), b.y0, grid);
  } catch (const NonCompactSupport& e) {
    throw NonCompactSupport(std::string(e.what()) +
                                " via steady_state.r_max or max_doublings; polytropes have compact "
                                "support only for k < 3l + 7/2",
                            e.r_max(), e.y_at_r_max());
  }
  const auto path = output_path(cfg, ".profile.txt");
  write_profile(path, p);
  log << "R        " << num(p.R()) << '\n'
      << "Ri       " << num(p.Ri()) << '\n'
      << "E0       " << num(p.E0()) << '\n'
      << "M_total  " << num(p.M_total()) << '\n'
      << "rho(0)   " << num(p.rho().front()) << '\n'
      << "rho_max  " << num(central_density(p)) << '\n'
      << "profile  " << path.string() << '\n';
  return p;
}

RunSummary cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  const SimulationOutcome out = simulate(cfg, &log);
  const RunResult& r = out.result;
  if (cfg.outputs.series) write_series_csv(output_path(cfg, ".series.csv"), r.series);
  if (cfg.outputs.final_snapshot) {
    write_snapshot(output_path(cfg, ".snapshot"), r.final_state, r.final_time,
                   fnv1a64(serialize(cfg)));
  }
  if (cfg.outputs.snapshots) {
    if (cfg.engine.snapshots > 0) write_densities(output_path(cfg, ".density.txt"), r.series);
    if (cfg.engine.histograms) write_histograms(output_path(cfg, ".hist"), r.series);
  }
  {
    std::ofstream csv(output_path(cfg, ".analysis.csv"));
    write_analysis_header(csv);
    write_analysis_row(csv, out.summary);
  }
  {
    std::ofstream txt(output_path(cfg, ".summary.txt"));
    write_summary(txt, out.summary);
  }
  write_summary(log, out.summary);
  return out.summary;
}

std::vector<RunSummary> cmd_sweep(const SweepConfig& sweep, std::ostream& log) {
  sweep.validate();
  const std::size_t n = sweep.values.size();
  std::vector<RunSummary> rows(n);
  std::mutex log_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const RunConfig rc = sweep.row(i);
      try {
        const SimulationOutcome out = simulate(rc);
        if (rc.outputs.series) write_series_csv(output_path(rc, ".series.csv"), out.result.series);
        rows[i] = out.summary;
      } catch (const Error& e) {
        rows[i] = describe(rc);
        rows[i].status = "error";
        rows[i].message = e.what();
      }
      if (!sweep.er_constant) rows[i].er_constant = kNaN;
      const std::lock_guard lock(log_mutex);
      log << rc.id << ": " << rows[i].status << ", period " << num(rows[i].period)
          << ", er_constant " << num(rows[i].er_constant) << '\n';
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < sweep.parallel_runs; ++t) pool.emplace_back(worker);
    worker();
  }
  std::ofstream csv(output_path(sweep.base, ".sweep.csv"));
  write_analysis_header(csv);
  for (const auto& row : rows) write_analysis_row(csv, row);
  return rows;
}

DeltaMaps delta_maps(const DiagnosticSeries& series, double t_lo, double t_hi,
                     bool require_histograms) {
  const bool have_f = series.histograms.size() == series.snapshots() && series.snapshots() > 0;
  if (require_histograms && !have_f) throw InvalidArgument("run stored no phase-space histograms");
  if (series.densities.size() != series.snapshots()) {
    throw InvalidArgument("run stored no radial densities");
  }
  DiagnosticSeries sub;
  sub.binning = series.binning;
  for (std::size_t i = 0; i < series.snapshots(); ++i) {
    const double t = series.snapshot_times[i];
    if (t < t_lo || t > t_hi) continue;
    sub.snapshot_times.push_back(t);
    sub.densities.push_back(series.densities[i]);
    if (have_f) sub.histograms.push_back(series.histograms[i]);
  }
  DeltaMaps out;
  out.delta_rho = {"delta_rho", sub.snapshot_times, delta_rho_map(sub)};
  if (have_f) out.delta_f = {"delta_f", sub.snapshot_times, delta_f_map(sub)};
  if (sub.snapshots() >= 3) {
    const double spacing = sub.snapshot_times[1] - sub.snapshot_times[0];
    try {
      out.rho_recurrence = first_recurrence(mean_by_lag(out.delta_rho.matrix), spacing);
    } catch (const NoOscillation&) {
    }
    if (have_f) {
      try {
        out.f_recurrence = first_recurrence(mean_by_lag(out.delta_f.matrix), spacing);
      } catch (const NoOscillation&) {
      }
    }
  }
  return out;
}

DeltaMaps cmd_deltamap(const std::filesystem::path& prefix, double t_lo, double t_hi,
                       std::ostream& log) {
  const std::filesystem::path hist = prefix.string() + ".hist";
  const std::filesystem::path dens = prefix.string() + ".density.txt";
  if (!std::filesystem::exists(hist)) {
    throw InvalidArgument("missing histograms: " + hist.string() +
                          " (run with engine.histograms and outputs.snapshots)");
  }
  if (!std::filesystem::exists(dens)) throw InvalidArgument("missing densities: " + dens.string());
  DiagnosticSeries series;
  read_densities(dens, series);
  const std::vector<double> density_times = series.snapshot_times;
  read_histograms(hist, series);
  if (density_times != series.snapshot_times) {
    throw FormatError("histogram and density stores have different snapshot times");
  }
  const DeltaMaps maps = delta_maps(series, t_lo, t_hi);
  const std::filesystem::path rho_out = prefix.string() + ".delta_rho.txt";
  const std::filesystem::path f_out = prefix.string() + ".delta_f.txt";
  write_matrix(rho_out, maps.delta_rho);
  write_matrix(f_out, maps.delta_f);
  log << "snapshots        " << maps.delta_rho.matrix.n << '\n'
      << "delta_rho        " << rho_out.string() << " (max " << num(maps.delta_rho.matrix.max()) << ")\n"
      << "delta_f          " << f_out.string() << " (max " << num(maps.delta_f.matrix.max()) << ")\n";
  if (maps.rho_recurrence) {
    log << "rho recurrence   lag " << num(maps.rho_recurrence->lag) << ", mean "
        << num(maps.rho_recurrence->value) << '\n';
  }
  if (maps.f_recurrence) {
    log << "f recurrence     lag " << num(maps.f_recurrence->lag) << ", mean "
        << num(maps.f_recurrence->value) << '\n';
  }
  return maps;
}

UnitScanResult cmd_units(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  if (!cfg.steady_state) throw InvalidArgument("units needs a steady_state block");
  if (!cfg.units) throw InvalidArgument("units needs a units block");
  const UnitsBlock& u = *cfg.units;
  if (!(u.period > 0.0)) throw InvalidArgument("units.period must be positive");
  const SteadyStateBlock& b = *cfg.steady_state;
  const GridSpec grid = b.grid();
  const SteadyStateProfile p = solve_steady_state(build_ansatz(b.family, b.k, b.l, b.L0), b.y0, grid);
  UnitScanResult res;
  const bool single = u.R_kpc_lo == u.R_kpc_hi && u.M_sun_lo == u.M_sun_hi;
  if (single) {
    const double years = physical_units(p, u.period, u.R_kpc_lo, u.M_sun_lo);
    res = {years, years, years, u.R_kpc_lo, u.M_sun_lo};
    log << "R_num " << num(p.R()) << ", M_num " << num(p.M_total()) << '\n'
        << "period " << num(years, 4) << " years\n";
    return res;
  }
  const double target = u.target_years > 0.0 ? u.target_years : 1.0;
  res = scan_physical_periods(p, u.period, u.R_kpc_lo, u.R_kpc_hi, u.M_sun_lo, u.M_sun_hi,
                              u.scan_points, target);
  log << "R_num " << num(p.R()) << ", M_num " << num(p.M_total()) << '\n'
      << "period range " << num(res.min_years, 4) << " .. " << num(res.max_years, 4) << " years\n";
  if (u.target_years > 0.0) {
    log << "closest to " << num(target, 4) << ": " << num(res.closest_years, 4) << " years at R = "
        << num(res.closest_R_kpc, 4) << " kpc, M = " << num(res.closest_M_sun, 4) << " M_sun\n";
  }
  return res;
}

}  // namespace vposc
