#pragma once

// L1 recurrence distances between stored snapshots.  A state that returns
// to itself after time T shows near-zero values along |t_i - t_j| = k T.

#include <cstddef>
#include <vector>

#include "vposc/diagnostics.hpp"

namespace vposc {

/// Dense square matrix, row-major.
struct DenseMatrix {
  std::size_t n = 0;
  std::vector<double> data;

  explicit DenseMatrix(std::size_t size = 0) : n(size), data(size * size, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
  double max() const;
};

/// int |rho_a - rho_b| 4 pi r^2 dr for piecewise-linear profiles, evaluated
/// exactly on the union of both node sets.
double l1_radial_distance(const DensityProfile& a, const DensityProfile& b);

/// sum over bins |a - b| plus |overflow_a - overflow_b|.  Throws
/// InvalidArgument when the binnings differ in size.
double l1_phase_distance(const PhaseHistogram& a, const PhaseHistogram& b);

/// Distances between snapshots i and j.  Throw InvalidArgument when the
/// snapshot (or its histogram) is missing.
double delta_rho(const DiagnosticSeries& series, std::size_t i, std::size_t j);
double delta_f(const DiagnosticSeries& series, std::size_t i, std::size_t j);

DenseMatrix delta_rho_map(const DiagnosticSeries& series);
DenseMatrix delta_f_map(const DiagnosticSeries& series);

/// Mean of the matrix along each diagonal j - i = k, k = 0..n-1 (the maps
/// are symmetric, so only the upper triangle is read).
std::vector<double> mean_by_lag(const DenseMatrix& m);

/// Mean along anti-diagonals i + j = s, s = 0..2n-2.
std::vector<double> mean_by_sum(const DenseMatrix& m);

struct LagMinimum {
  double lag = 0.0;
  double value = 0.0;
};

/// First local minimum of the lag profile after it has risen above half
/// its maximum; parabolic refinement on the uniform snapshot spacing.
LagMinimum first_recurrence(const std::vector<double>& lag_profile, double spacing);

}  // namespace vposc
