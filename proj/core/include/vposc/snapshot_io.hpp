#pragma once

// Run artifacts.  Layouts are described in docs/formats.md.
//
//   particle snapshot   text header + columnar float64 (r, w, L, weight)
//   series CSV          t,E_kin,E_pot,H,mass,r_max
//   histogram store     text header + per snapshot (time, overflow, float32 bins)
//   density store       text, one row per snapshot: t dr rho_0 ... rho_n
//   dense matrix        text header with the time grid, then n rows of n values

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "vposc/diagnostics.hpp"
#include "vposc/particles.hpp"
#include "vposc/recurrence.hpp"

namespace vposc {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

struct Snapshot {
  ParticleEnsemble ensemble;
  double time = 0.0;
  std::uint64_t config_hash = 0;
};

void write_snapshot(std::ostream& out, const ParticleEnsemble& ensemble, double time,
                    std::uint64_t config_hash);
void write_snapshot(const std::filesystem::path& path, const ParticleEnsemble& ensemble,
                    double time, std::uint64_t config_hash);
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::filesystem::path& path);

/// Scalars only; snapshot data is not part of the CSV.
void write_series_csv(std::ostream& out, const DiagnosticSeries& series);
void write_series_csv(const std::filesystem::path& path, const DiagnosticSeries& series);
DiagnosticSeries read_series_csv(std::istream& in);
DiagnosticSeries read_series_csv(const std::filesystem::path& path);

/// Histograms with their binning and snapshot times.
void write_histograms(std::ostream& out, const DiagnosticSeries& series);
void write_histograms(const std::filesystem::path& path, const DiagnosticSeries& series);
/// Fills binning, snapshot_times and histograms of `series`.
void read_histograms(std::istream& in, DiagnosticSeries& series);
void read_histograms(const std::filesystem::path& path, DiagnosticSeries& series);

void write_densities(std::ostream& out, const DiagnosticSeries& series);
void write_densities(const std::filesystem::path& path, const DiagnosticSeries& series);
/// Fills snapshot_times and densities of `series`.
void read_densities(std::istream& in, DiagnosticSeries& series);
void read_densities(const std::filesystem::path& path, DiagnosticSeries& series);

struct NamedMatrix {
  std::string name;
  std::vector<double> times;
  DenseMatrix matrix;
};

void write_matrix(std::ostream& out, const NamedMatrix& m);
void write_matrix(const std::filesystem::path& path, const NamedMatrix& m);
NamedMatrix read_matrix(std::istream& in);
NamedMatrix read_matrix(const std::filesystem::path& path);

}  // namespace vposc
