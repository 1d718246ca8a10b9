// Acceptance criteria 1-12 at desk scale.  One PASS/FAIL line per criterion;
// exit status 1 if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vposc/analysis.hpp"
#include "vposc/experiment.hpp"
#include "vposc/kurth.hpp"
#include "vposc/recurrence.hpp"
#include "vposc/steady_state.hpp"
#include "vposc/units.hpp"

using namespace vposc;

namespace {

int g_workers = 1;
// Mass drift of every particle run, checked by criterion 3.
std::vector<std::pair<std::string, double>> g_mass_drifts;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

PerturbationSpec pert(PerturbationKind kind, double eps) {
  PerturbationSpec p;
  p.kind = kind;
  p.eps = eps;
  return p;
}

RunConfig base_run(std::string id, std::size_t particles, double dt, double t_end) {
  RunConfig c;
  c.id = std::move(id);
  c.engine.particles = particles;
  c.engine.dt = dt;
  c.engine.t_end = t_end;
  c.engine.grid_cells = 512;
  c.engine.output_stride = 5;
  c.engine.snapshots = 0;
  c.engine.workers = g_workers;
  return c;
}

RunConfig steady_run(std::string id, Family f, double k, double l, double L0, double y0,
                     PerturbationSpec p, double t_end, std::size_t particles = 200'000) {
  RunConfig c = base_run(std::move(id), particles, 0.005, t_end);
  c.steady_state = SteadyStateBlock{f, k, l, L0, y0};
  c.perturbation = p;
  return c;
}

RunConfig kurth_run(std::string id, double eps, std::size_t particles, double dt, double t_end) {
  RunConfig c = base_run(std::move(id), particles, dt, t_end);
  c.kurth = KurthBlock{eps};
  return c;
}

SimulationOutcome sim(const RunConfig& c) {
  const auto t0 = std::chrono::steady_clock::now();
  SimulationOutcome o = simulate(c);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << "  " << c.id << ": " << o.summary.status << " period " << o.summary.period << " ("
            << secs << " s)\n";
  g_mass_drifts.emplace_back(c.id, o.summary.mass_drift);
  return o;
}

Verdict kurth_formula() {
  const std::vector<double> table{6.38, 6.68, 7.24, 8.16, 9.67};
  Verdict v{true, "solve_R periods:"};
  for (int i = 0; i < 5; ++i) {
    const double eps = 0.1 * (i + 1);
    const double exact = 2.0 * std::numbers::pi * std::pow(1.0 - eps * eps, -1.5);
    const double measured = solve_R(eps, 6.0 * exact).measured_period();
    const double e = rel(measured, exact);
    v.pass = v.pass && e < 1e-3 && rel(measured, table[i]) < 5e-3;
    v.detail += fmt(" eps=%.1f %.5f (rel %.1e, table %.2f)", eps, measured, e, table[i]);
  }
  return v;
}

Verdict kurth_pic() {
  const std::vector<std::pair<double, double>> cases{{0.1, 6.39}, {0.3, 7.24}, {0.5, 9.66}};
  Verdict v{true, "2e6 particles:"};
  for (auto [eps, table] : cases) {
    const RunConfig c = kurth_run(fmt("kurth_%.1f", eps), eps, 2'000'000, 0.01, 3.5 * kurth_period(eps));
    const RunSummary s = sim(c).summary;
    const bool ok = s.status == "ok" && rel(s.period, table) < 0.02;
    v.pass = v.pass && ok;
    v.detail += fmt(" eps=%.1f %.4f (table %.2f, %s)", eps, s.period, table, s.status.c_str());
  }
  return v;
}

Verdict conservation() {
  const RunConfig c = kurth_run("kurth_0.2_energy", 0.2, 2'000'000, 0.01, kurth_period(0.2));
  const double drift = sim(c).summary.energy_drift;
  bool mass_ok = true;
  for (const auto& [id, m] : g_mass_drifts) mass_ok = mass_ok && m == 0.0;
  return {mass_ok && drift < 0.02,
          fmt("energy drift over one period %.2e; mass drift exactly 0 on %s runs", drift,
              mass_ok ? ("all " + std::to_string(g_mass_drifts.size())).c_str() : "NOT all")};
}

Verdict steady_fidelity() {
  RunConfig c = steady_run("k1_unperturbed", Family::PolytropicBall, 1, 0, 0, 1.0, {}, 50.0);
  c.analysis.damping = false;
  const DiagnosticSeries& s = sim(c).result.series;
  const double p0 = s.e_pot.front();
  double worst = 0.0;
  for (double p : s.e_pot) worst = std::max(worst, std::abs(p - p0) / std::abs(p0));
  return {worst < 5e-3, fmt("max |E_pot(t) - E_pot(0)| / |E_pot(0)| = %.2e up to t = 50", worst)};
}

struct ErRow {
  double y0, period, c;
  std::string status;
};

std::vector<ErRow> er_sweep(const std::string& tag, double k, double l, double t_end) {
  std::vector<ErRow> rows;
  for (double y0 : {0.6, 1.0, 1.6}) {
    const RunConfig c =
        steady_run(fmt("%s_%.1f", tag.c_str(), y0), Family::PolytropicBall, k, l, 0, y0,
                   pert(PerturbationKind::DynAccessFieldScale, 0.02), t_end);
    const RunSummary s = sim(c).summary;
    rows.push_back({y0, s.period, eddington_ritter_constant(k, l, y0, s.period), s.status});
  }
  return rows;
}

Verdict er_periods(const std::string& tag, double k, double l, double t_end,
                   const std::vector<double>& table, bool ratio) {
  const auto rows = er_sweep(tag, k, l, t_end);
  Verdict v{true, ""};
  double cmin = 1e300, cmax = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    v.pass = v.pass && rows[i].status == "ok" && rel(rows[i].period, table[i]) < 0.03;
    cmin = std::min(cmin, rows[i].c);
    cmax = std::max(cmax, rows[i].c);
    v.detail += fmt("y0=%.1f T=%.4f (table %.3f) c=%.4f; ", rows[i].y0, rows[i].period, table[i],
                    rows[i].c);
  }
  if (ratio) {
    v.pass = v.pass && cmax / cmin <= 1.02;
    v.detail += fmt("c_max/c_min = %.4f", cmax / cmin);
  } else {
    v.detail += fmt("exponent %.4f", eddington_ritter_exponent(k, l));
  }
  return v;
}

Verdict er_k0() {
  const auto rows = er_sweep("k0l0", 0, 0, 20.0);
  Verdict v{true, ""};
  for (const ErRow& r : rows) {
    v.pass = v.pass && r.status == "ok" && r.c >= 1.29 && r.c <= 1.38;
    v.detail += fmt("y0=%.1f T=%.4f c=%.4f; ", r.y0, r.period, r.c);
  }
  v.detail += "window [1.29, 1.38]";
  return v;
}

Verdict central_density_scaling() {
  const AnsatzModel m = build_ansatz(Family::PolytropicBall, 1.0, 0.0, 0.0);
  std::vector<double> x, y;
  for (double y0 : {0.4, 0.6, 1.0, 1.6, 2.5, 4.0}) {
    x.push_back(std::log(y0));
    y.push_back(std::log(central_density(solve_steady_state(m, y0))));
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {std::abs(slope - 2.5) <= 0.01, fmt("slope %.6f over %zu points", slope, x.size())};
}

Verdict recurrence_maps() {
  RunConfig c = kurth_run("kurth_0.2_maps", 0.2, 200'000, 0.01, 20.0);
  c.engine.snapshots = 201;
  c.engine.histograms = true;
  c.engine.hist_nr = 32;
  c.engine.hist_nw = 32;
  c.engine.hist_nL = 16;
  const SimulationOutcome o = sim(c);
  const DeltaMaps m = delta_maps(o.result.series, -1e300, 1e300);
  Verdict v{false, ""};
  const double fmax = m.delta_f.matrix.max();
  if (!m.f_recurrence) return {false, "no recurrence minimum in the delta_f lag profile"};
  const bool lag_ok = rel(m.f_recurrence->lag, 6.70) < 0.02;
  const bool depth_ok = m.f_recurrence->value < 0.1 * fmax;

  // Near-zero anti-diagonal bands of delta_rho: interior local minima of the
  // anti-diagonal means below 10% of the maximum, on diagonals with at
  // least n/2 entries.
  const auto sums = mean_by_sum(m.delta_rho.matrix);
  const double rmax = m.delta_rho.matrix.max();
  const std::size_t n = m.delta_rho.matrix.n;
  std::vector<double> bands;
  for (std::size_t s = n / 2; s + 1 < 3 * n / 2 && s + 1 < sums.size(); ++s) {
    if (sums[s] < sums[s - 1] && sums[s] <= sums[s + 1] && sums[s] < 0.1 * rmax) {
      bands.push_back(0.5 * s * (o.result.series.snapshot_times[1] - o.result.series.snapshot_times[0]));
    }
  }
  v.pass = lag_ok && depth_ok && !bands.empty();
  v.detail = fmt("delta_f lag %.4f, min/max %.3f; delta_rho anti-diagonal bands at t_c =",
                 m.f_recurrence->lag, m.f_recurrence->value / fmax);
  for (double b : bands) v.detail += fmt(" %.2f", b);
  if (bands.empty()) v.detail += " none";
  return v;
}

Verdict perturbation_independence() {
  const double eps = 0.005;
  const std::vector<std::pair<const char*, PerturbationKind>> kinds{
      {"P1", PerturbationKind::Amplitude},
      {"P3", PerturbationKind::KurthType},
      {"P4", PerturbationKind::DynAccessFieldScale}};
  std::vector<double> periods;
  Verdict v{true, "King y0=1, eps=0.005:"};
  for (auto [name, kind] : kinds) {
    const RunConfig c = steady_run(fmt("king_%s", name), Family::King, 0, 0, 0, 1.0,
                                   pert(kind, eps), 30.0, 1'000'000);
    const RunSummary s = sim(c).summary;
    v.pass = v.pass && s.status == "ok";
    periods.push_back(s.period);
    v.detail += fmt(" %s %.4f", name, s.period);
  }
  const auto [lo, hi] = std::minmax_element(periods.begin(), periods.end());
  v.pass = v.pass && (*hi - *lo) / *lo <= 0.02;
  v.detail += fmt("; spread %.2f%%", 100.0 * (*hi - *lo) / *lo);
  return v;
}

DampingFit damping_of(RunConfig c) {
  c.analysis.observable = Observable::PotentialEnergy;
  const DiagnosticSeries& s = sim(c).result.series;
  return fit_damping(s.times, s.e_pot);
}

Verdict damping_suite() {
  const auto p = pert(PerturbationKind::DynAccessFieldScale, 0.05);
  const DampingFit k16 =
      damping_of(steady_run("k1.6_damped", Family::PolytropicBall, 1.6, 0, 0, 1.0, p, 40.0, 1'000'000));
  const DampingFit k3l5 =
      damping_of(steady_run("k3l5", Family::PolytropicBall, 3, 5, 0, 1.0, p, 40.0));
  const DampingFit shell =
      damping_of(steady_run("shell", Family::PolytropicShell, 1, 0.5, 1.0, 1.0, p, 40.0));
  // Stronger perturbations (two-mode envelopes).
  const DampingFit k16_beats = damping_of(steady_run(
      "k1.6_strong", Family::PolytropicBall, 1.6, 0, 0, 1.0,
      pert(PerturbationKind::DynAccessFieldScale, 0.1), 60.0));
  const DampingFit king_beats = damping_of(steady_run(
      "king_strong", Family::King, 0, 0, 0, 1.0, pert(PerturbationKind::DynAccessFieldScale, 0.3), 40.0));

  const bool significant = k16.rate > 3.0 * k16.rate_stderr && k16.rate > 0.0;
  const bool undamped = 5.0 * std::abs(k3l5.rate) <= k16.rate && 5.0 * std::abs(shell.rate) <= k16.rate;
  const bool flagged = k16_beats.nonmonotone_count > 0 && king_beats.nonmonotone_count > 0;
  return {significant && undamped && flagged,
          fmt("k=1.6 rate %.4f +- %.4f; k=3,l=5 %.2e; shell %.2e; non-monotone envelopes: "
              "k=1.6 strong %d, King strong %d",
              k16.rate, k16.rate_stderr, k3l5.rate, shell.rate, k16_beats.nonmonotone_count,
              king_beats.nonmonotone_count)};
}

Verdict units_scan() {
  struct Case {
    double y0, period, small, large;
  };
  Verdict v{true, ""};
  const AnsatzModel m = build_ansatz(Family::PolytropicBall, 1.0, 0.0, 0.0);
  for (const Case c : {Case{0.6, 5.233, 1.7e7, 5.4e8}, Case{1.6, 1.539, 1.1e7, 3.4e8}}) {
    const SteadyStateProfile p = solve_steady_state(m, c.y0);
    v.detail += fmt("y0=%.1f:", c.y0);
    for (double target : {c.small, c.large}) {
      const UnitScanResult r = scan_physical_periods(p, c.period, 0.1, 100.0, 1e7, 1e13, 61, target);
      const bool ok = r.min_years <= target && target <= r.max_years &&
                      rel(r.closest_years, target) < 0.1;
      v.pass = v.pass && ok;
      v.detail += fmt(" %.2g yr -> %.3g (R %.3g kpc, M %.3g)", target, r.closest_years,
                      r.closest_R_kpc, r.closest_M_sun);
      if (target == c.small) v.detail += fmt(", range [%.3g, %.3g];", r.min_years, r.max_years);
    }
    v.detail += " ";
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vposc acceptance criteria"};
  std::vector<int> only;
  app.add_option("--workers", g_workers, "threads per run")->check(CLI::PositiveNumber);
  app.add_option("--only", only, "run a subset of criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  // Criterion 3 runs last: it also checks the mass drift of every earlier run.
  struct Criterion {
    int id;
    std::function<Verdict()> fn;
  };
  const std::vector<Criterion> criteria{
      {1, kurth_formula},
      {2, kurth_pic},
      {4, steady_fidelity},
      {5, [] { return er_periods("k1l0", 1, 0, 30.0, {5.233, 2.761, 1.539}, true); }},
      {6, er_k0},
      {7, [] { return er_periods("k0l2", 0, 2, 35.0, {6.650, 4.167, 2.717}, false); }},
      {8, central_density_scaling},
      {9, recurrence_maps},
      {10, perturbation_independence},
      {11, damping_suite},
      {12, units_scan},
      {3, conservation},
  };
  const std::set<int> selected(only.begin(), only.end());
  std::vector<std::pair<int, Verdict>> results;
  for (const auto& [id, fn] : criteria) {
    if (!selected.empty() && !selected.contains(id)) continue;
    std::cerr << "criterion " << id << "\n";
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    results.emplace_back(id, v);
  }
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  bool all = true;
  for (const auto& [id, v] : results) {
    all = all && v.pass;
    std::cout << fmt("criterion %2d %s  ", id, v.pass ? "PASS" : "FAIL") << v.detail << '\n';
  }
  return all ? 0 : 1;
}
