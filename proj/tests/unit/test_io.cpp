#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "vposc/errors.hpp"
#include "vposc/profile_io.hpp"
#include "vposc/snapshot_io.hpp"

using namespace vposc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
  const char* env = std::getenv("VPOSC_TEST_TMP");
  const fs::path dir = env ? fs::path(env) : fs::temp_directory_path() / "vposc_tests";
  fs::create_directories(dir);
  return dir / name;
}

DiagnosticSeries make_series() {
  DiagnosticSeries s;
  for (int i = 0; i < 5; ++i) {
    s.record(0.1 * i, Energies{0.3 + 1e-3 * i, -0.6 - 1e-17 * i}, 1.0, 1.0 + 0.01 * i);
  }
  s.binning = HistogramBinning{2, 3, 2, 0.0, 1.5, -2.0, 2.0, 0.0, 0.7};
  for (int i = 0; i < 3; ++i) {
    s.snapshot_times.push_back(0.2 * i);
    PhaseHistogram h;
    for (std::size_t b = 0; b < s.binning.bins(); ++b) h.weights.push_back(0.01f * (b + i));
    h.overflow = 0.125 * i;
    s.histograms.push_back(h);
    s.densities.push_back(DensityProfile{0.25, {1.0 / 3.0, 0.5 + i, 0.0}});
  }
  return s;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("FNV-1a reference values") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  }

  TEST_CASE("particle snapshot round trip is bit exact") {
    ParticleEnsemble e;
    e.push_back(0.1, -0.2, 1.0 / 3.0, 1e-9);
    e.push_back(2.0, 0.5, 0.0, 1e-300);
    const fs::path p = scratch("roundtrip.snapshot");
    write_snapshot(p, e, 12.5, 0xdeadbeefULL);
    const Snapshot s = read_snapshot(p);
    CHECK(s.ensemble == e);
    CHECK(s.time == 12.5);
    CHECK(s.config_hash == 0xdeadbeefULL);
  }

  TEST_CASE("truncated or foreign snapshots are rejected") {
    ParticleEnsemble e;
    e.push_back(0.1, -0.2, 0.3, 0.4);
    std::stringstream full;
    write_snapshot(full, e, 0.0, 1);
    const std::string bytes = full.str();
    std::stringstream cut(bytes.substr(0, bytes.size() - 5));
    CHECK_THROWS_AS(read_snapshot(cut), FormatError);
    std::stringstream foreign("something else\n");
    CHECK_THROWS_AS(read_snapshot(foreign), FormatError);
    CHECK_THROWS_AS(read_snapshot(scratch("missing.snapshot")), FormatError);
  }

  TEST_CASE("series CSV round trip") {
    const DiagnosticSeries s = make_series();
    std::stringstream io;
    write_series_csv(io, s);
    CHECK(io.str().rfind("t,E_kin,E_pot,H,mass,r_max\n", 0) == 0);
    const DiagnosticSeries r = read_series_csv(io);
    CHECK(r.times == s.times);
    CHECK(r.e_kin == s.e_kin);
    CHECK(r.e_pot == s.e_pot);
    CHECK(r.h_total == s.h_total);
    CHECK(r.r_support == s.r_support);
    std::stringstream bad("t,E\n0,1\n");
    CHECK_THROWS_AS(read_series_csv(bad), FormatError);
  }

  TEST_CASE("histogram and density stores round trip") {
    const DiagnosticSeries s = make_series();
    const fs::path hp = scratch("roundtrip.hist");
    const fs::path dp = scratch("roundtrip.density.txt");
    write_histograms(hp, s);
    write_densities(dp, s);
    DiagnosticSeries h, d;
    read_histograms(hp, h);
    read_densities(dp, d);
    CHECK(h.binning == s.binning);
    CHECK(h.snapshot_times == s.snapshot_times);
    REQUIRE(h.histograms.size() == 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(h.histograms[i].weights == s.histograms[i].weights);
      CHECK(h.histograms[i].overflow == s.histograms[i].overflow);
      CHECK(d.densities[i].rho == s.densities[i].rho);
      CHECK(d.densities[i].dr == s.densities[i].dr);
    }
    CHECK(d.snapshot_times == s.snapshot_times);
  }

  TEST_CASE("matrix round trip") {
    NamedMatrix m{"delta_f", {0.0, 0.5}, DenseMatrix(2)};
    m.matrix(0, 1) = m.matrix(1, 0) = 0.1 + 1e-16;
    std::stringstream io;
    write_matrix(io, m);
    const NamedMatrix r = read_matrix(io);
    CHECK(r.name == "delta_f");
    CHECK(r.times == m.times);
    CHECK(r.matrix.data == m.matrix.data);
    std::stringstream bad("# vposc-matrix 1\n# name x\n# n 2\n# times 0 1\n0 1\n");
    CHECK_THROWS_AS(read_matrix(bad), FormatError);
  }

  TEST_CASE("steady-state profile round trip") {
    const SteadyStateProfile p =
        solve_steady_state(build_ansatz(Family::PolytropicShell, 1, 0.5, 1.0), 1.0, GridSpec{256});
    std::stringstream io;
    write_profile(io, p);
    const SteadyStateProfile r = read_profile(io);
    CHECK(r.ansatz() == p.ansatz());
    CHECK(r.y0() == p.y0());
    CHECK(r.R() == p.R());
    CHECK(r.Ri() == p.Ri());
    CHECK(r.M_total() == p.M_total());
    CHECK(r.rho() == p.rho());
    CHECK(r.field() == p.field());
    std::stringstream bad("# vposc-profile 2\n");
    CHECK_THROWS_AS(read_profile(bad), FormatError);
  }
}
