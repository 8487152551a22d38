#pragma once

// Multiple Seasonal-Trend decomposition using Loess: iterative refinement of
// one STL fit per seasonal period, shortest period first, with a super
// smoother supplying the trend when no seasonal period survives filtering.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "preprocess.hpp"
#include "series.hpp"
#include "stl.hpp"
#include "supsmu.hpp"

namespace mstlkit {

struct MultiSeasonalSeries {
  std::vector<double> values;  // NaN marks a missing observation
  std::vector<int> periods;    // candidate seasonal frequencies, any order
  std::string origin = "0";    // reporting metadata only
  double step = 1.0;           // reporting metadata only
};

struct MstlParams {
  int iterate = 2;                 // outer refinement passes
  std::optional<double> lambda;    // Box-Cox exponent in [0, 1]
  std::vector<int> s_windows;      // per retained period (ascending); missing
                                   // tail filled from default_s_windows
  StlParams stl_overrides;         // applied to every inner fit; period and
                                   // seasonal_window fields are ignored
  SupsmuConfig supsmu;             // trend smoother for the non-seasonal branch
};

// Appendix-style seasonal window rule: the i-th retained period (1-based)
// gets the smallest odd value >= C + K*i.
struct SWindowPolicy {
  int C = 7;
  int K = 4;
};

inline std::vector<int> default_s_windows(int num_periods, SWindowPolicy policy = {}) {
  if (num_periods < 1)
    throw std::invalid_argument("default_s_windows: num_periods must be >= 1");
  std::vector<int> out(static_cast<std::size_t>(num_periods));
  for (int i = 1; i <= num_periods; ++i) {
    const int v = policy.C + policy.K * i;
    out[static_cast<std::size_t>(i - 1)] = (v % 2 == 1) ? v : v + 1;
  }
  return out;
}

// Seasonally adjusted series: transformed input minus every seasonal
// component, which equals trend + remainder.
inline std::vector<double> seasonal_adjust(const Decomposition& d) {
  return d.seasonally_adjusted();
}

inline Decomposition mstl_decompose(const MultiSeasonalSeries& series,
                                    const MstlParams& params = {}) {
  const std::size_t n = series.values.size();
  if (n < 3) throw std::invalid_argument("mstl: series must have at least 3 values");
  if (params.iterate < 1) throw std::invalid_argument("mstl: iterate must be >= 1");
  if (params.lambda && !(*params.lambda >= 0.0 && *params.lambda <= 1.0))
    throw std::invalid_argument("mstl: lambda must lie in [0, 1]");

  const std::vector<int> retained = retain_periods(series.periods, n);

  std::vector<double> x = interpolate_missing(series.values, series.periods);
  if (params.lambda) x = boxcox(x, *params.lambda);

  Decomposition d;
  d.data = x;
  d.periods = retained;
  d.lambda_applied = params.lambda;

  if (retained.empty()) {
    d.trend = supsmu_smooth(x, params.supsmu);
    d.remainder.resize(n);
    for (std::size_t t = 0; t < n; ++t) d.remainder[t] = x[t] - d.trend[t];
    return d;
  }

  const std::size_t m = retained.size();
  std::vector<int> windows(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (i < params.s_windows.size()) {
      const int w = params.s_windows[i];
      if (w != kPeriodicWindow && (w < 1 || w % 2 == 0))
        throw std::invalid_argument("mstl: s_windows entries must be positive odd or periodic");
      windows[i] = w;
    } else {
      windows[i] = default_s_windows(static_cast<int>(m))[i];
    }
  }

  // A single retained period needs no cross-period refinement; one pass makes
  // the result coincide with a direct single-period fit.
  const int iterate = m == 1 ? 1 : params.iterate;

  d.seasonals.assign(m, std::vector<double>(n, 0.0));
  std::vector<double> deseas = x;
  StlFit fit;
  for (int j = 0; j < iterate; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t t = 0; t < n; ++t) deseas[t] += d.seasonals[i][t];
      StlParams sp = params.stl_overrides;
      sp.period = retained[i];
      sp.seasonal_window = windows[i];
      fit = stl_decompose(deseas, sp);
      d.seasonals[i] = fit.seasonal;
      for (std::size_t t = 0; t < n; ++t) deseas[t] -= d.seasonals[i][t];
    }
  }
  d.trend = std::move(fit.trend);
  d.remainder.resize(n);
  for (std::size_t t = 0; t < n; ++t) d.remainder[t] = deseas[t] - d.trend[t];
  return d;
}

}  // namespace mstlkit
