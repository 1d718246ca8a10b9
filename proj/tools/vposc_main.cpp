// vposc: steady states, PIC runs, sweeps, recurrence maps and unit
// conversion from JSON configs.  Exit codes: 0 ok, 2 config error,
// 3 numerical failure.

#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vposc/config.hpp"
#include "vposc/errors.hpp"
#include "vposc/experiment.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;

struct Overrides {
  std::string config;
  std::optional<std::size_t> particles;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;

  void add_to(CLI::App* app, bool config_required = true) {
    auto* opt = app->add_option("--config", config, "JSON config file");
    if (config_required) opt->required();
    app->add_option("--particles", particles, "override engine.particles");
    app->add_option("--seed", seed, "override engine.seed");
    app->add_option("--workers", workers, "override engine.workers");
    app->add_option("--out", out, "override outputs.dir");
  }

  void apply(vposc::RunConfig& c) const {
    if (particles) c.engine.particles = *particles;
    if (seed) c.engine.seed = *seed;
    if (workers) c.engine.workers = *workers;
    if (out) c.outputs.dir = *out;
  }
};

vposc::RunConfig load_run(const Overrides& o) {
  vposc::RunConfig c = vposc::load_run_config(o.config);
  o.apply(c);
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vlasov-Poisson oscillation experiments"};
  app.require_subcommand(1);

  Overrides steady_o, sim_o, sweep_o, delta_o, units_o;
  auto* steady = app.add_subcommand("steady", "solve a steady state and write its profile");
  steady_o.add_to(steady);
  auto* simulate = app.add_subcommand("simulate", "run one PIC simulation and analyse it");
  sim_o.add_to(simulate);
  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep into a table CSV");
  sweep_o.add_to(sweep);
  auto* deltamap = app.add_subcommand("deltamap", "recurrence matrices of a stored run");
  delta_o.add_to(deltamap, false);
  std::string run_prefix;
  double t_min = -std::numeric_limits<double>::infinity();
  double t_max = std::numeric_limits<double>::infinity();
  deltamap->add_option("--run", run_prefix, "run prefix <dir>/<stem> (default from --config)");
  deltamap->add_option("--t-min", t_min, "first snapshot time");
  deltamap->add_option("--t-max", t_max, "last snapshot time");
  auto* units = app.add_subcommand("units", "convert a code-unit period to years");
  units_o.add_to(units);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (steady->parsed()) {
      vposc::cmd_steady(load_run(steady_o), std::cout);
    } else if (simulate->parsed()) {
      const vposc::RunConfig c = load_run(sim_o);
      for (const auto& w : c.perturbation.warnings()) std::cerr << "warning: " << w << '\n';
      vposc::cmd_simulate(c, std::cout);
    } else if (sweep->parsed()) {
      vposc::SweepConfig s = vposc::load_sweep_config(sweep_o.config);
      sweep_o.apply(s.base);
      s.validate();
      vposc::cmd_sweep(s, std::cout);
    } else if (deltamap->parsed()) {
      if (run_prefix.empty()) {
        if (delta_o.config.empty()) throw vposc::InvalidArgument("deltamap needs --run or --config");
        const vposc::RunConfig c = load_run(delta_o);
        run_prefix = (std::filesystem::path(c.outputs.dir) / c.stem()).string();
      }
      vposc::cmd_deltamap(run_prefix, t_min, t_max, std::cout);
    } else if (units->parsed()) {
      vposc::cmd_units(load_run(units_o), std::cout);
    }
  } catch (const vposc::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const vposc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
