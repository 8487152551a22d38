#pragma once

// Seasonal-Trend decomposition using Loess for a single seasonal period: the
// classic inner loop (detrend, cycle-subseries smoothing, low-pass filtering,
// trend smoothing) wrapped in an optional robustness-reweighting outer loop.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "loess.hpp"
#include "series.hpp"

namespace mstlkit {

// Sentinel for seasonal_window selecting exact per-phase means instead of a
// loess fit ("periodic" mode): the seasonal component then repeats exactly.
inline constexpr int kPeriodicWindow = -1;

struct StlParams {
  int period = 0;
  int seasonal_window = kPeriodicWindow;  // positive odd, or kPeriodicWindow
  int trend_window = 0;                   // 0 -> derived from seasonal window
  int lowpass_window = 0;                 // 0 -> smallest odd >= period
  int seasonal_degree = 0;                // 0 or 1
  int trend_degree = 1;                   // 0, 1, or 2
  int lowpass_degree = 1;                 // 0 or 1
  int inner_iterations = 0;               // 0 -> 2 plain / 1 robust
  int outer_iterations = -1;              // -1 -> 0 plain / 15 robust
  int seasonal_jump = 0;                  // 0 -> ceil(window/10)
  int trend_jump = 0;
  int lowpass_jump = 0;
  bool robust = false;
};

struct StlFit {
  std::vector<double> seasonal;
  std::vector<double> trend;
  std::vector<double> remainder;
  std::vector<double> robustness_weights;
};

// Bisquare weights from a remainder: h = 6 * median(|r|), w = (1-(|r|/h)^2)^2
// for |r| < h and 0 beyond. A degenerate h (at least half the remainders are
// exactly zero) keeps weight 1 on the zero residuals so that an all-zero
// remainder yields all-ones weights.
inline std::vector<double> bisquare_robustness(std::span<const double> remainder) {
  const std::size_t n = remainder.size();
  if (n == 0) throw std::invalid_argument("bisquare_robustness: empty remainder");
  std::vector<double> mag(n);
  for (std::size_t i = 0; i < n; ++i) mag[i] = std::abs(remainder[i]);
  std::vector<double> sorted = mag;
  const std::size_t mid = n / 2;
  std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
  double median = sorted[mid];
  if (n % 2 == 0) {
    const double below = *std::max_element(sorted.begin(), sorted.begin() + mid);
    median = 0.5 * (below + median);
  }
  const double h = 6.0 * median;
  std::vector<double> w(n);
  if (h <= 0.0) {
    for (std::size_t i = 0; i < n; ++i) w[i] = (mag[i] == 0.0) ? 1.0 : 0.0;
    return w;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (mag[i] >= h) {
      w[i] = 0.0;
    } else {
      const double u = mag[i] / h;
      const double c = 1.0 - u * u;
      w[i] = c * c;
    }
  }
  return w;
}

// Each cycle-subseries replaced by its arithmetic mean; the result repeats
// with exact period. (1,2,3,4) at period 2 becomes (2,3,2,3).
inline std::vector<double> periodic_seasonal(std::span<const double> values, int period) {
  const std::size_t n = values.size();
  if (period < 1) throw std::invalid_argument("periodic_seasonal: period must be >= 1");
  if (n < static_cast<std::size_t>(period))
    throw std::invalid_argument("periodic_seasonal: series shorter than one period");
  const std::size_t p = static_cast<std::size_t>(period);
  std::vector<double> mean(p, 0.0);
  std::vector<std::size_t> count(p, 0);
  for (std::size_t t = 0; t < n; ++t) {
    mean[t % p] += values[t];
    ++count[t % p];
  }
  for (std::size_t j = 0; j < p; ++j) mean[j] /= static_cast<double>(count[j]);
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = mean[t % p];
  return out;
}

namespace detail {

inline int smallest_odd_at_least(double x) {
  int c = static_cast<int>(std::ceil(x));
  if (c < 1) c = 1;
  return (c % 2 == 0) ? c + 1 : c;
}

inline int default_jump(int window) { return (window + 9) / 10; }

struct ResolvedStl {
  int period;
  int seasonal_window;  // kPeriodicWindow or positive odd
  int trend_window;
  int lowpass_window;
  int seasonal_degree;
  int trend_degree;
  int lowpass_degree;
  int inner;
  int outer;
  int seasonal_jump;
  int trend_jump;
  int lowpass_jump;
};

inline ResolvedStl resolve_stl_params(const StlParams& p, std::size_t n) {
  ResolvedStl r{};
  if (p.period < 2) throw std::invalid_argument("stl: period must be >= 2");
  r.period = p.period;
  if (n < 2 * static_cast<std::size_t>(p.period))
    throw std::invalid_argument("stl: series must span at least two periods (period " +
                                std::to_string(p.period) + ", length " + std::to_string(n) + ")");

  const bool periodic = p.seasonal_window == kPeriodicWindow;
  if (!periodic && (p.seasonal_window < 1 || p.seasonal_window % 2 == 0))
    throw std::invalid_argument("stl: seasonal_window must be a positive odd integer or periodic");
  r.seasonal_window = p.seasonal_window;

  // Effective seasonal span for the trend-window rule; the periodic sentinel
  // acts like an extremely wide span.
  const double sw_eff = periodic ? 10.0 * static_cast<double>(n) + 1.0
                                 : static_cast<double>(p.seasonal_window);
  r.trend_window = p.trend_window != 0
                       ? p.trend_window
                       : smallest_odd_at_least(1.5 * p.period / (1.0 - 1.5 / sw_eff));
  r.lowpass_window = p.lowpass_window != 0 ? p.lowpass_window : smallest_odd_at_least(p.period);
  if (r.trend_window < 1 || r.trend_window % 2 == 0)
    throw std::invalid_argument("stl: trend_window must be a positive odd integer");
  if (r.lowpass_window < 1 || r.lowpass_window % 2 == 0)
    throw std::invalid_argument("stl: lowpass_window must be a positive odd integer");

  if (p.seasonal_degree != 0 && p.seasonal_degree != 1)
    throw std::invalid_argument("stl: seasonal_degree must be 0 or 1");
  if (p.trend_degree < 0 || p.trend_degree > 2)
    throw std::invalid_argument("stl: trend_degree must be 0, 1, or 2");
  if (p.lowpass_degree != 0 && p.lowpass_degree != 1)
    throw std::invalid_argument("stl: lowpass_degree must be 0 or 1");
  r.seasonal_degree = p.seasonal_degree;
  r.trend_degree = p.trend_degree;
  r.lowpass_degree = p.lowpass_degree;

  r.inner = p.inner_iterations != 0 ? p.inner_iterations : (p.robust ? 1 : 2);
  r.outer = p.outer_iterations >= 0 ? p.outer_iterations : (p.robust ? 15 : 0);
  if (r.inner < 1) throw std::invalid_argument("stl: inner_iterations must be positive");

  r.seasonal_jump = p.seasonal_jump != 0 ? p.seasonal_jump : default_jump(periodic ? 1 : r.seasonal_window);
  r.trend_jump = p.trend_jump != 0 ? p.trend_jump : default_jump(r.trend_window);
  r.lowpass_jump = p.lowpass_jump != 0 ? p.lowpass_jump : default_jump(r.lowpass_window);
  if (r.seasonal_jump < 1 || r.trend_jump < 1 || r.lowpass_jump < 1)
    throw std::invalid_argument("stl: jumps must be positive");
  return r;
}

// Cycle-subseries smoothing. Fills `ext` (size n + 2p) with fitted values
// indexed by time + p: every subseries is evaluated at its own positions plus
// one position before the first and after the last, so the low-pass cascade
// downstream has a full period of margin at both ends.
inline void smooth_subseries(std::span<const double> detrended, std::span<const double> weights,
                             const ResolvedStl& rp, std::span<const double> sub_positions,
                             std::vector<double>& ext) {
  const std::size_t n = detrended.size();
  const std::size_t p = static_cast<std::size_t>(rp.period);
  ext.resize(n + 2 * p);
  std::vector<double> subvals;
  std::vector<double> subw;
  std::vector<double> scratch;
  for (std::size_t j = 0; j < p; ++j) {
    const std::size_t k = (n - 1 - j) / p + 1;
    subvals.clear();
    subw.clear();
    for (std::size_t i = 0; i < k; ++i) {
      subvals.push_back(detrended[j + i * p]);
      if (!weights.empty()) subw.push_back(weights[j + i * p]);
    }
    if (rp.seasonal_window == kPeriodicWindow) {
      double wsum = 0.0, vsum = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        const double wt = subw.empty() ? 1.0 : subw[i];
        wsum += wt;
        vsum += wt * subvals[i];
      }
      if (wsum <= 0.0) {
        // Every point in this phase was downweighted to zero; fall back to
        // the plain mean rather than dividing by zero.
        vsum = std::accumulate(subvals.begin(), subvals.end(), 0.0);
        wsum = static_cast<double>(k);
      }
      const double mu = vsum / wsum;
      ext[j] = mu;
      for (std::size_t i = 0; i <= k; ++i) ext[p + j + i * p] = mu;
      continue;
    }
    const WeightedSeries s{sub_positions.subspan(0, k), subvals,
                           subw.empty() ? std::span<const double>{} : std::span<const double>(subw)};
    const LoessConfig cfg{rp.seasonal_window, rp.seasonal_degree, rp.seasonal_jump};
    const std::vector<double> fitted = loess_smooth(s, cfg);
    std::size_t hint = 0;
    ext[j] = detail::fit_point_hinted(s, 0.0, cfg, hint, scratch);
    for (std::size_t i = 0; i < k; ++i) ext[p + j + i * p] = fitted[i];
    hint = k > static_cast<std::size_t>(rp.seasonal_window) ? k - rp.seasonal_window : 0;
    ext[p + j + k * p] =
        detail::fit_point_hinted(s, static_cast<double>(k + 1), cfg, hint, scratch);
  }
}

// In-place moving average: out[i] = mean(values[i .. i+width)).
inline void moving_average(const std::vector<double>& values, std::size_t width,
                           std::vector<double>& out) {
  const std::size_t n = values.size();
  out.resize(n - width + 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < width; ++i) acc += values[i];
  out[0] = acc / static_cast<double>(width);
  for (std::size_t i = 1; i + width <= n; ++i) {
    acc += values[i + width - 1] - values[i - 1];
    out[i] = acc / static_cast<double>(width);
  }
}

// Low-pass stage: moving averages of length period, period, 3 collapse the
// extended subseries output (n + 2p values) to n, then a loess smooth.
inline void lowpass_filter(const std::vector<double>& ext, const ResolvedStl& rp,
                           std::span<const double> positions, std::vector<double>& out,
                           std::vector<double>& tmp1, std::vector<double>& tmp2) {
  const std::size_t p = static_cast<std::size_t>(rp.period);
  moving_average(ext, p, tmp1);
  moving_average(tmp1, p, tmp2);
  moving_average(tmp2, 3, tmp1);
  const WeightedSeries s{positions.subspan(0, tmp1.size()), tmp1, {}};
  out = loess_smooth(s, LoessConfig{rp.lowpass_window, rp.lowpass_degree, rp.lowpass_jump});
}

}  // namespace detail

inline StlFit stl_decompose(std::span<const double> values, const StlParams& params) {
  const std::size_t n = values.size();
  const detail::ResolvedStl rp = detail::resolve_stl_params(params, n);
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(values[i]))
      throw std::invalid_argument("stl: non-finite value at index " + std::to_string(i));

  const std::size_t p = static_cast<std::size_t>(rp.period);
  std::vector<double> positions(n);
  for (std::size_t i = 0; i < n; ++i) positions[i] = static_cast<double>(i + 1);
  const std::size_t max_cycles = (n - 1) / p + 1;
  std::vector<double> sub_positions(max_cycles);
  for (std::size_t i = 0; i < max_cycles; ++i) sub_positions[i] = static_cast<double>(i + 1);

  StlFit fit;
  fit.seasonal.assign(n, 0.0);
  fit.trend.assign(n, 0.0);
  fit.robustness_weights.assign(n, 1.0);

  std::vector<double> detrended(n), deseasonalized(n), ext, lowpass, tmp1, tmp2;
  for (int pass = 0; pass <= rp.outer; ++pass) {
    const bool use_weights = pass > 0;
    const std::span<const double> rw =
        use_weights ? std::span<const double>(fit.robustness_weights) : std::span<const double>{};
    for (int it = 0; it < rp.inner; ++it) {
      for (std::size_t t = 0; t < n; ++t) detrended[t] = values[t] - fit.trend[t];
      detail::smooth_subseries(detrended, rw, rp, sub_positions, ext);
      detail::lowpass_filter(ext, rp, positions, lowpass, tmp1, tmp2);
      for (std::size_t t = 0; t < n; ++t) fit.seasonal[t] = ext[t + p] - lowpass[t];
      for (std::size_t t = 0; t < n; ++t) deseasonalized[t] = values[t] - fit.seasonal[t];
      const WeightedSeries s{positions, deseasonalized, rw};
      fit.trend = loess_smooth(s, LoessConfig{rp.trend_window, rp.trend_degree, rp.trend_jump});
    }
    if (pass < rp.outer) {
      std::vector<double> remainder(n);
      for (std::size_t t = 0; t < n; ++t)
        remainder[t] = values[t] - fit.seasonal[t] - fit.trend[t];
      fit.robustness_weights = bisquare_robustness(remainder);
    }
  }

  fit.remainder.resize(n);
  for (std::size_t t = 0; t < n; ++t)
    fit.remainder[t] = values[t] - fit.seasonal[t] - fit.trend[t];
  return fit;
}

}  // namespace mstlkit
