#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "vposc/errors.hpp"
#include "vposc/experiment.hpp"

using namespace vposc;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const char* name) {
  const char* env = std::getenv("VPOSC_TEST_TMP");
  const fs::path dir = (env ? fs::path(env) : fs::temp_directory_path() / "vposc_tests") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig small_kurth(const fs::path& dir) {
  RunConfig c;
  c.id = "kurth_small";
  c.kurth = KurthBlock{0.3};
  c.engine.dt = 0.02;
  c.engine.t_end = 26.0;
  c.engine.particles = 20000;
  c.engine.grid_cells = 128;
  c.engine.output_stride = 2;
  c.engine.snapshots = 66;
  c.engine.histograms = true;
  c.engine.hist_nr = 16;
  c.engine.hist_nw = 16;
  c.engine.hist_nL = 8;
  c.outputs.dir = dir.string();
  c.outputs.snapshots = true;
  c.outputs.final_snapshot = true;
  return c;
}

}  // namespace

TEST_SUITE("experiment") {
  TEST_CASE("initial states") {
    RunConfig c;
    c.steady_state = SteadyStateBlock{};
    c.engine.particles = 10000;
    const InitialState s = prepare_initial_state(c);
    REQUIRE(s.profile);
    CHECK(s.ensemble.total_mass() == doctest::Approx(s.profile->M_total()).epsilon(5e-3));
    CHECK(s.dynamical_time == doctest::Approx(s.profile->dynamical_time()));
    CHECK(s.f0(0.1, 0.0, 0.0) > 0.0);

    RunConfig k;
    k.kurth = KurthBlock{0.2};
    k.engine.particles = 10000;
    const InitialState ks = prepare_initial_state(k);
    CHECK(!ks.profile);
    CHECK(ks.dynamical_time == doctest::Approx(std::sqrt(4.0 * std::numbers::pi / 3.0)));
    CHECK(ks.ensemble.total_mass() == doctest::Approx(1.0));
  }

  TEST_CASE("series analysis reports NaN for missing quantities") {
    RunConfig c;
    c.steady_state = SteadyStateBlock{};
    DiagnosticSeries s;
    for (int i = 0; i < 200; ++i) s.record(0.05 * i, Energies{0.3, -0.6}, 1.0, 1.0);
    const RunSummary r = analyze_series(c, s);
    CHECK(r.status == "no_oscillation");
    CHECK(std::isnan(r.period));
    CHECK(std::isnan(r.er_constant));
    CHECK(r.energy_drift == 0.0);
    CHECK(r.model == "polytropic_ball");

    DiagnosticSeries o;
    for (int i = 0; i < 800; ++i) {
      const double t = 0.05 * i;
      o.record(t, Energies{0.3 + 0.01 * std::sin(2.0 * std::numbers::pi * t / 2.5), -0.6}, 1.0, 1.0);
    }
    const RunSummary ok = analyze_series(c, o);
    CHECK(ok.status == "ok");
    CHECK(ok.period == doctest::Approx(2.5).epsilon(1e-3));
    CHECK(ok.er_constant == doctest::Approx(std::pow(1.0, 1.25) * ok.period));
    CHECK(std::abs(ok.decay_rate) < 1e-3);
  }

  TEST_CASE("simulate, delta maps and artifacts") {
    const fs::path dir = scratch_dir("simulate");
    const RunConfig c = small_kurth(dir);
    std::ostringstream log;
    const RunSummary s = cmd_simulate(c, log);
    CHECK(s.status == "ok");
    CHECK(s.period == doctest::Approx(7.24).epsilon(0.03));
    CHECK(s.mass_drift == 0.0);
    for (const char* ext : {".series.csv", ".analysis.csv", ".summary.txt", ".snapshot", ".hist",
                            ".density.txt"}) {
      CHECK(fs::exists(dir / ("kurth_small" + std::string(ext))));
    }
    const Snapshot snap = read_snapshot(dir / "kurth_small.snapshot");
    CHECK(snap.config_hash == fnv1a64(serialize(c)));
    CHECK(snap.time == doctest::Approx(26.0));

    const DeltaMaps m = cmd_deltamap(dir / "kurth_small", 0.0, 1e9, log);
    CHECK(fs::exists(dir / "kurth_small.delta_f.txt"));
    REQUIRE(m.f_recurrence);
    CHECK(m.f_recurrence->lag == doctest::Approx(7.24).epsilon(0.03));
    const NamedMatrix back = read_matrix(dir / "kurth_small.delta_rho.txt");
    CHECK(back.matrix.n == m.delta_rho.matrix.n);
    CHECK_THROWS_AS(cmd_deltamap(dir / "absent", 0.0, 1.0, log), InvalidArgument);

    DiagnosticSeries series;
    read_densities(dir / "kurth_small.density.txt", series);
    const DeltaMaps part = delta_maps(series, 5.0, 15.0, false);
    CHECK(part.delta_rho.matrix.n < m.delta_rho.matrix.n);
    CHECK(part.delta_f.matrix.n == 0);
    CHECK_THROWS_AS(delta_maps(series, 0.0, 1e9), InvalidArgument);
  }

  TEST_CASE("steady, sweep and units commands") {
    const fs::path dir = scratch_dir("commands");
    RunConfig c;
    c.id = "poly";
    c.steady_state = SteadyStateBlock{Family::PolytropicBall, 1.0, 0.0, 0.0, 0.6, 1024};
    c.outputs.dir = dir.string();
    std::ostringstream log;
    const SteadyStateProfile p = cmd_steady(c, log);
    CHECK(fs::exists(dir / "poly.profile.txt"));
    CHECK(log.str().find("M_total") != std::string::npos);

    c.units = UnitsBlock{5.233, 0.1, 100.0, 1e7, 1e13, 61, 1.7e7};
    const UnitScanResult u = cmd_units(c, log);
    CHECK(u.min_years < 1.7e7);
    CHECK(u.closest_years == doctest::Approx(1.7e7).epsilon(0.1));
    c.units = UnitsBlock{5.233, 1.0, 1.0, 1e10, 1e10, 61, 0.0};
    CHECK(cmd_units(c, log).min_years == doctest::Approx(physical_units(p, 5.233, 1.0, 1e10)));

    SweepConfig s;
    s.base = c;
    s.base.units.reset();
    s.base.engine.particles = 5000;
    s.base.engine.t_end = 1.0;
    s.base.engine.dt = 0.05;
    s.base.engine.grid_cells = 64;
    s.base.engine.snapshots = 0;
    s.param = SweepParam::Y0;
    s.values = {0.6, 1.0};
    s.parallel_runs = 2;
    const auto rows = cmd_sweep(s, log);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].id == "poly_1");
    CHECK(rows[1].y0 == 1.0);
    CHECK(fs::exists(dir / "poly.sweep.csv"));
    CHECK(fs::exists(dir / "poly_0.series.csv"));
    std::ifstream csv(dir / "poly.sweep.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header.rfind("run_id,model,", 0) == 0);
  }
}
