#include "vposc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vposc/errors.hpp"

namespace vposc {

namespace {

struct Extremum {
  double t;
  double value;  // detrended, refined
  bool maximum;
};

struct Detrended {
  std::vector<double> t;
  std::vector<double> d;  // smoothed, detrended
  double dt = 0.0;
  double mean = 0.0;
  double amplitude = 0.0;
  double acf_period = 0.0;
  std::vector<Extremum> extrema;
};

void check_series(std::span<const double> t, std::span<const double> s) {
  if (t.size() != s.size()) throw InvalidArgument("times and values differ in length");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(s[i])) {
      throw InvalidArgument("series contains non-finite samples");
    }
    if (i > 0 && !(t[i] > t[i - 1])) throw InvalidArgument("series times must increase strictly");
  }
}

// Window selection; a trailing sample off the uniform grid (the final record
// of a run whose length is not a multiple of the stride) is dropped.
std::pair<std::vector<double>, std::vector<double>> window(std::span<const double> t,
                                                           std::span<const double> s,
                                                           double lo, double hi) {
  std::vector<double> tw, sw;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= lo && t[i] <= hi) {
      tw.push_back(t[i]);
      sw.push_back(s[i]);
    }
  }
  if (tw.size() >= 3) {
    const double h0 = tw[1] - tw[0];
    const double hl = tw.back() - tw[tw.size() - 2];
    if (std::abs(hl - h0) > 1e-6 * h0) {
      tw.pop_back();
      sw.pop_back();
    }
  }
  if (tw.size() < 8) throw NoOscillation("fewer than 8 samples in the analysis window");
  const double h = (tw.back() - tw.front()) / static_cast<double>(tw.size() - 1);
  for (std::size_t i = 1; i < tw.size(); ++i) {
    if (std::abs(tw[i] - tw[i - 1] - h) > 1e-6 * h) {
      throw InvalidArgument("series must be uniformly sampled");
    }
  }
  return {std::move(tw), std::move(sw)};
}

std::vector<double> remove_linear_trend(const std::vector<double>& s) {
  const double n = static_cast<double>(s.size());
  const double xm = 0.5 * (n - 1.0);
  const double ym = std::accumulate(s.begin(), s.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double x = static_cast<double>(i) - xm;
    sxy += x * (s[i] - ym);
    sxx += x * x;
  }
  const double slope = sxy / sxx;
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    out[i] = s[i] - ym - slope * (static_cast<double>(i) - xm);
  }
  return out;
}

// Lag (in samples, refined) of the first autocorrelation maximum after the
// first zero crossing.
double acf_lag(const std::vector<double>& s) {
  const std::vector<double> x = remove_linear_trend(s);
  const std::size_t n = x.size();
  const std::size_t kmax = 2 * n / 3;
  std::vector<double> acf(kmax + 1, 0.0);
  for (std::size_t k = 0; k <= kmax; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) sum += x[i] * x[i + k];
    acf[k] = sum / static_cast<double>(n - k);
  }
  if (!(acf[0] > 0.0)) throw NoOscillation("series is constant");
  std::size_t k = 1;
  while (k <= kmax && acf[k] > 0.0) ++k;
  for (; k + 1 <= kmax; ++k) {
    if (acf[k] > 0.0 && acf[k] >= acf[k - 1] && acf[k] >= acf[k + 1]) {
      const double denom = acf[k - 1] - 2.0 * acf[k] + acf[k + 1];
      const double shift = denom < 0.0 ? 0.5 * (acf[k - 1] - acf[k + 1]) / denom : 0.0;
      return static_cast<double>(k) + shift;
    }
  }
  throw NoOscillation("autocorrelation has no maximum after its first zero");
}

// Mean over a window of `width` samples centred on i, shifted to stay inside.
std::vector<double> moving_mean(const std::vector<double>& s, std::size_t width, bool clamp) {
  const std::size_t n = s.size();
  width = std::clamp<std::size_t>(width, 1, n);
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + s[i];
  std::vector<double> out(n);
  const auto half = static_cast<std::ptrdiff_t>(width / 2);
  for (std::size_t i = 0; i < n; ++i) {
    std::ptrdiff_t a = static_cast<std::ptrdiff_t>(i) - half;
    std::ptrdiff_t b = a + static_cast<std::ptrdiff_t>(width);
    if (clamp) {
      if (a < 0) {
        b -= a;
        a = 0;
      }
      if (b > static_cast<std::ptrdiff_t>(n)) {
        a -= b - static_cast<std::ptrdiff_t>(n);
        b = static_cast<std::ptrdiff_t>(n);
      }
    } else {
      // Symmetric truncation near the edges.
      const std::ptrdiff_t reach = std::min<std::ptrdiff_t>(
          {half, static_cast<std::ptrdiff_t>(i), static_cast<std::ptrdiff_t>(n - 1 - i)});
      a = static_cast<std::ptrdiff_t>(i) - reach;
      b = static_cast<std::ptrdiff_t>(i) + reach + 1;
    }
    out[i] = (prefix[static_cast<std::size_t>(b)] - prefix[static_cast<std::size_t>(a)]) /
             static_cast<double>(b - a);
  }
  return out;
}

Extremum refine(const Detrended& x, std::size_t i, bool maximum) {
  double shift = 0.0;
  double value = x.d[i];
  if (i > 0 && i + 1 < x.d.size()) {
    const double a = x.d[i - 1], b = x.d[i], c = x.d[i + 1];
    const double denom = a - 2.0 * b + c;
    if (denom != 0.0) {
      shift = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
      value = b - 0.25 * (a - c) * shift;
    }
  }
  return {x.t[i] + shift * x.dt, value, maximum};
}

Detrended detrend(std::span<const double> times, std::span<const double> values,
                  const PeriodOptions& opt) {
  check_series(times, values);
  auto [t, s] = window(times, values, opt.window_start, opt.window_end);
  Detrended x;
  x.dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  x.mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
  const double lag = acf_lag(s);
  x.acf_period = lag * x.dt;

  const auto width = static_cast<std::size_t>(std::max(3.0, std::round(lag)));
  const std::vector<double> trend = moving_mean(s, width, true);
  std::vector<double> raw(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) raw[i] = s[i] - trend[i];
  const auto smooth_width = static_cast<std::size_t>(std::max(1.0, std::round(lag / 20.0))) | 1u;
  x.d = moving_mean(raw, smooth_width, false);
  x.t = std::move(t);

  const auto [lo, hi] = std::minmax_element(x.d.begin(), x.d.end());
  x.amplitude = 0.5 * (*hi - *lo);
  if (!(x.amplitude > opt.noise_floor * std::abs(x.mean))) {
    throw NoOscillation("oscillation amplitude below the noise floor");
  }

  double noise = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) noise += (raw[i] - x.d[i]) * (raw[i] - x.d[i]);
  noise = std::sqrt(noise / static_cast<double>(raw.size()));
  // Hysteresis follows the local amplitude (half range over one period) so
  // that decaying oscillations keep their late extrema.
  const std::size_t n = x.d.size();
  std::vector<double> h(n);
  {
    const auto reach = static_cast<std::ptrdiff_t>(width / 2);
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(i) - reach);
      const auto b = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n) - 1,
                                              static_cast<std::ptrdiff_t>(i) + reach);
      const auto [wlo, whi] = std::minmax_element(x.d.begin() + a, x.d.begin() + b + 1);
      h[i] = std::max(0.05 * (*whi - *wlo), 4.0 * noise);
    }
  }

  // Hysteresis segmentation: a maximum is the largest sample of a run that
  // went above +h and ended by dropping below -h (and vice versa).
  int state = 0;
  std::size_t best = 0;
  std::size_t start = 0;
  auto close = [&](bool maximum) {
    const bool at_edge = (best == start && start == 0) || best == 0 || best + 1 == n;
    if (!at_edge) x.extrema.push_back(refine(x, best, maximum));
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double v = x.d[i];
    if (v > h[i]) {
      if (state != 1) {
        if (state == -1) close(false);
        state = 1;
        best = start = i;
      } else if (v > x.d[best]) {
        best = i;
      }
    } else if (v < -h[i]) {
      if (state != -1) {
        if (state == 1) close(true);
        state = -1;
        best = start = i;
      } else if (v < x.d[best]) {
        best = i;
      }
    }
  }
  return x;
}

}  // namespace

double autocorrelation_period(std::span<const double> times, std::span<const double> values) {
  check_series(times, values);
  auto [t, s] = window(times, values, -1e300, 1e300);
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  return acf_lag(s) * dt;
}

PeriodEstimate estimate_period(std::span<const double> times, std::span<const double> values,
                               const PeriodOptions& opt) {
  const Detrended x = detrend(times, values, opt);
  PeriodEstimate out;
  out.method = opt.method;
  out.amplitude = x.amplitude;
  for (const auto& e : x.extrema) (e.maximum ? out.maxima : out.minima).push_back(e.t);

  const std::size_t nmax = out.maxima.size();
  const std::size_t nmin = out.minima.size();
  const auto needed = static_cast<std::size_t>(std::max(2, 2 * opt.min_cycles - 1));
  if (nmax < 2 || nmin < 2 || nmax + nmin < needed) {
    throw NoOscillation("too few oscillation cycles in the analysis window");
  }

  std::vector<double> spacings;
  for (const auto* list : {&out.maxima, &out.minima}) {
    for (std::size_t i = 1; i < list->size(); ++i) spacings.push_back((*list)[i] - (*list)[i - 1]);
  }
  const double span_sum = (out.maxima.back() - out.maxima.front()) +
                          (out.minima.back() - out.minima.front());
  const double peak_period = span_sum / static_cast<double>(nmax + nmin - 2);
  double var = 0.0;
  for (double s : spacings) var += (s - peak_period) * (s - peak_period);
  const double spread = std::sqrt(var / static_cast<double>(spacings.size()));
  if (spread > opt.max_irregularity * peak_period) {
    throw NoOscillation("extremum spacings are irregular (noise)");
  }

  if (opt.method == PeriodMethod::PeakSpacing) {
    out.period = peak_period;
    out.uncertainty = std::max(spread, x.dt);
  } else {
    out.period = x.acf_period;
    out.uncertainty = std::max(std::abs(x.acf_period - peak_period), x.dt);
  }
  return out;
}

DampingFit fit_damping(std::span<const double> times, std::span<const double> values,
                       const DampingOptions& opt) {
  const Detrended x = detrend(times, values, opt.period);
  DampingFit fit;
  std::vector<double> amp_max, amp_min;
  for (const auto& e : x.extrema) {
    fit.peak_times.push_back(e.t);
    fit.amplitudes.push_back(std::abs(e.value));
    (e.maximum ? amp_max : amp_min).push_back(std::abs(e.value));
  }
  const double span = x.t.back() - x.t.front();
  if (span < static_cast<double>(opt.min_cycles) * x.acf_period) {
    throw NoOscillation("analysis window shorter than the cycles required for a damping fit");
  }
  if (fit.amplitudes.size() < 3) throw NoOscillation("fewer than 3 extrema for a damping fit");

  const std::size_t n = fit.amplitudes.size();
  std::vector<double> logs(n);
  for (std::size_t i = 0; i < n; ++i) logs[i] = std::log(fit.amplitudes[i]);
  const double tm = std::accumulate(fit.peak_times.begin(), fit.peak_times.end(), 0.0) / n;
  const double lm = std::accumulate(logs.begin(), logs.end(), 0.0) / n;
  double stt = 0.0, stl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    stt += (fit.peak_times[i] - tm) * (fit.peak_times[i] - tm);
    stl += (fit.peak_times[i] - tm) * (logs[i] - lm);
  }
  const double slope = stl / stt;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double res = logs[i] - lm - slope * (fit.peak_times[i] - tm);
    rss += res * res;
  }
  fit.rate = -slope;
  fit.residual = std::sqrt(rss / static_cast<double>(n));
  fit.rate_stderr = n > 2 ? std::sqrt(rss / static_cast<double>(n - 2) / stt) : 0.0;

  const double top = *std::max_element(fit.amplitudes.begin(), fit.amplitudes.end());
  const double tol = opt.envelope_tolerance * top;
  for (const auto* seq : {&amp_max, &amp_min}) {
    int last_sign = 0;
    for (std::size_t i = 1; i < seq->size(); ++i) {
      const double diff = (*seq)[i] - (*seq)[i - 1];
      if (std::abs(diff) < tol) continue;
      const int sign = diff > 0.0 ? 1 : -1;
      if (last_sign != 0 && sign != last_sign) ++fit.nonmonotone_count;
      last_sign = sign;
    }
  }
  return fit;
}

double eddington_ritter_exponent(double k, double l) { return (k + 2.0 * l + 1.5) / (2.0 * l + 2.0); }

double eddington_ritter_constant(double k, double l, double y0, double period) {
  return std::pow(y0, eddington_ritter_exponent(k, l)) * period;
}

}  // namespace vposc
