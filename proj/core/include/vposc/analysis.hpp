#pragma once

// Oscillation analysis of scalar time series (kinetic or potential energy).

#include <span>
#include <vector>

namespace vposc {

enum class PeriodMethod { PeakSpacing, Autocorrelation };

struct PeriodEstimate {
  double period = 0.0;
  /// Half the peak-to-trough range of the detrended series.
  double amplitude = 0.0;
  PeriodMethod method = PeriodMethod::PeakSpacing;
  double uncertainty = 0.0;
  std::vector<double> maxima;
  std::vector<double> minima;
};

struct PeriodOptions {
  /// Analysis window in time; defaults to the whole series.
  double window_start = -1e300;
  double window_end = 1e300;
  PeriodMethod method = PeriodMethod::PeakSpacing;
  /// NoOscillation when amplitude < noise_floor * |mean of the series|.
  double noise_floor = 1e-3;
  int min_cycles = 3;
  /// NoOscillation when the spread of extremum spacings exceeds this
  /// fraction of the period (noise rather than an oscillation).
  double max_irregularity = 0.2;
};

/// Period of a uniformly sampled series.  The series is detrended with a
/// centred moving mean one autocorrelation period wide; maxima and minima of
/// the (lightly smoothed) detrended series are located with hysteresis and
/// refined by parabolas.  The period is the mean spacing of successive
/// maxima and of successive minima together, which makes the estimate
/// invariant under s -> a s + b.  Throws NoOscillation.
PeriodEstimate estimate_period(std::span<const double> times, std::span<const double> values,
                               const PeriodOptions& options = {});

/// First maximum of the autocorrelation of the linearly detrended series
/// after its first zero crossing, parabolically refined.  Throws
/// NoOscillation when the autocorrelation never turns.
double autocorrelation_period(std::span<const double> times, std::span<const double> values);

struct DampingFit {
  /// gamma in |peak - mean| ~ exp(-gamma t); <= 0 means no decay.
  double rate = 0.0;
  double rate_stderr = 0.0;
  /// RMS residual of log-amplitudes.
  double residual = 0.0;
  /// Sign changes of the envelope slope larger than the tolerance.
  int nonmonotone_count = 0;
  std::vector<double> peak_times;
  std::vector<double> amplitudes;
};

struct DampingOptions {
  PeriodOptions period{};
  int min_cycles = 5;
  /// Envelope changes below this fraction of the largest amplitude are
  /// ignored when counting non-monotonicity.
  double envelope_tolerance = 0.05;
};

/// Least-squares exponential fit of the extremal amplitudes (maxima and
/// minima of the detrended series).  The window must span min_cycles
/// autocorrelation periods; extrema lost in the noise are not required.
/// Throws NoOscillation (propagated from the detrending, for a short window
/// or for fewer than 3 extrema).
DampingFit fit_damping(std::span<const double> times, std::span<const double> values,
                       const DampingOptions& options = {});

/// (k + 2l + 3/2) / (2l + 2).
double eddington_ritter_exponent(double k, double l);

/// y0^{(k + 2l + 3/2)/(2l + 2)} T.
double eddington_ritter_constant(double k, double l, double y0, double period);

}  // namespace vposc
