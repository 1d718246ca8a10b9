#include "vposc/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vposc/errors.hpp"

namespace vposc {

namespace {

// int_a^b |d(r)| r^2 dr for d linear between d(a) = da and d(b) = db.
double abs_linear_r2(double a, double b, double da, double db) {
  const auto poly = [](double a0, double b0, double alpha, double beta) {
    return alpha * (b0 * b0 * b0 - a0 * a0 * a0) / 3.0 +
           beta * (b0 * b0 * b0 * b0 - a0 * a0 * a0 * a0) / 4.0;
  };
  if (!(b > a)) return 0.0;
  const double beta = (db - da) / (b - a);
  const double alpha = da - beta * a;
  if ((da >= 0.0 && db >= 0.0) || (da <= 0.0 && db <= 0.0)) {
    return std::abs(poly(a, b, alpha, beta));
  }
  const double root = a + (b - a) * da / (da - db);
  return std::abs(poly(a, root, alpha, beta)) + std::abs(poly(root, b, alpha, beta));
}

void require_snapshot(const DiagnosticSeries& s, std::size_t i) {
  if (i >= s.snapshots()) throw InvalidArgument("snapshot index out of range");
}

template <class F>
DenseMatrix symmetric_map(std::size_t n, F&& distance) {
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance(i, j);
      m(i, j) = d;
      m(j, i) = d;
    }
  }
  return m;
}

}  // namespace

double DenseMatrix::max() const {
  return data.empty() ? 0.0 : *std::max_element(data.begin(), data.end());
}

double l1_radial_distance(const DensityProfile& a, const DensityProfile& b) {
  std::vector<double> nodes;
  nodes.reserve(a.rho.size() + b.rho.size());
  for (std::size_t j = 0; j < a.rho.size(); ++j) nodes.push_back(a.dr * static_cast<double>(j));
  for (std::size_t j = 0; j < b.rho.size(); ++j) nodes.push_back(b.dr * static_cast<double>(j));
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  double sum = 0.0;
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    const double r0 = nodes[k - 1];
    const double r1 = nodes[k];
    // A profile vanishes on segments past its last node (a jump, not a ramp).
    const auto on = [r0](const DensityProfile& p, double r) {
      return r0 < p.outer_radius() ? p.at(r) : 0.0;
    };
    const double d0 = on(a, r0) - on(b, r0);
    const double d1 = on(a, r1) - on(b, r1);
    sum += abs_linear_r2(r0, r1, d0, d1);
  }
  return 4.0 * std::numbers::pi * sum;
}

double l1_phase_distance(const PhaseHistogram& a, const PhaseHistogram& b) {
  if (a.weights.size() != b.weights.size()) {
    throw InvalidArgument("phase histograms use different binnings");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < a.weights.size(); ++j) {
    sum += std::abs(static_cast<double>(a.weights[j]) - static_cast<double>(b.weights[j]));
  }
  return sum + std::abs(a.overflow - b.overflow);
}

double delta_rho(const DiagnosticSeries& s, std::size_t i, std::size_t j) {
  require_snapshot(s, i);
  require_snapshot(s, j);
  if (s.densities.size() != s.snapshots()) throw InvalidArgument("series has no stored densities");
  return l1_radial_distance(s.densities[i], s.densities[j]);
}

double delta_f(const DiagnosticSeries& s, std::size_t i, std::size_t j) {
  require_snapshot(s, i);
  require_snapshot(s, j);
  if (s.histograms.size() != s.snapshots()) {
    throw InvalidArgument("series has no stored phase-space histograms");
  }
  return l1_phase_distance(s.histograms[i], s.histograms[j]);
}

DenseMatrix delta_rho_map(const DiagnosticSeries& s) {
  if (s.densities.size() != s.snapshots()) throw InvalidArgument("series has no stored densities");
  return symmetric_map(s.snapshots(), [&s](std::size_t i, std::size_t j) {
    return l1_radial_distance(s.densities[i], s.densities[j]);
  });
}

DenseMatrix delta_f_map(const DiagnosticSeries& s) {
  if (s.histograms.size() != s.snapshots()) {
    throw InvalidArgument("series has no stored phase-space histograms");
  }
  return symmetric_map(s.snapshots(), [&s](std::size_t i, std::size_t j) {
    return l1_phase_distance(s.histograms[i], s.histograms[j]);
  });
}

std::vector<double> mean_by_lag(const DenseMatrix& m) {
  std::vector<double> out(m.n, 0.0);
  for (std::size_t k = 0; k < m.n; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i + k < m.n; ++i) sum += m(i, i + k);
    out[k] = sum / static_cast<double>(m.n - k);
  }
  return out;
}

std::vector<double> mean_by_sum(const DenseMatrix& m) {
  if (m.n == 0) return {};
  std::vector<double> out(2 * m.n - 1, 0.0);
  std::vector<std::size_t> count(out.size(), 0);
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t j = 0; j < m.n; ++j) {
      out[i + j] += m(i, j);
      ++count[i + j];
    }
  }
  for (std::size_t s = 0; s < out.size(); ++s) out[s] /= static_cast<double>(count[s]);
  return out;
}

LagMinimum first_recurrence(const std::vector<double>& p, double spacing) {
  if (p.size() < 3) throw NoOscillation("lag profile too short for a recurrence");
  const double top = *std::max_element(p.begin(), p.end());
  std::size_t k = 1;
  while (k < p.size() && p[k] < 0.5 * top) ++k;
  for (; k + 1 < p.size(); ++k) {
    if (p[k] < p[k - 1] && p[k] <= p[k + 1]) {
      const double denom = p[k - 1] - 2.0 * p[k] + p[k + 1];
      const double shift = denom > 0.0 ? 0.5 * (p[k - 1] - p[k + 1]) / denom : 0.0;
      return {(static_cast<double>(k) + shift) * spacing, p[k]};
    }
  }
  throw NoOscillation("lag profile has no interior minimum");
}

}  // namespace vposc
