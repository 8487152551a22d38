#pragma once

// Variable-span super smoother (Friedman). Three fixed spans are fit by a
// running least-squares line; leave-one-out residuals pick the best span per
// point, and the final curve interpolates between the bracketing span fits.
// Used as the trend estimator for series with no retained seasonal period.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mstlkit {

struct SupsmuConfig {
  std::array<double, 3> spans{0.05, 0.2, 0.5};  // tweeter, midrange, woofer
  double bass = 0.0;                            // 0..10, larger favors smoother fits
};

struct RunningLineFit {
  std::vector<double> fit;
  std::vector<double> cv_residual;  // leave-one-out residual (signed)
};

// Running least-squares line over a sliding window of `span_count` points.
// Interior windows are the symmetric nearest neighbours; near the edges the
// window keeps its full size and shifts inward. The window statistics are
// updated incrementally, one point in and one point out per step. The
// leave-one-out residual comes from the hat diagonal in closed form:
// h_ii = 1/m + (x_i - xbar)^2 / sxx, cv = (y_i - fit_i) / (1 - h_ii).
inline RunningLineFit running_linear_smooth(std::span<const double> x,
                                            std::span<const double> y, int span_count) {
  const std::size_t n = x.size();
  if (n == 0) throw std::invalid_argument("running_linear_smooth: empty input");
  if (y.size() != n)
    throw std::invalid_argument("running_linear_smooth: x and y differ in length");
  if (span_count < 3 || span_count % 2 == 0 || static_cast<std::size_t>(span_count) > n)
    throw std::invalid_argument("running_linear_smooth: span_count must be odd, in [3, n]");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(x[i] < x[i + 1]))
      throw std::invalid_argument("running_linear_smooth: x must be strictly increasing");

  const std::size_t m = static_cast<std::size_t>(span_count);
  const std::size_t half = m / 2;
  RunningLineFit out;
  out.fit.resize(n);
  out.cv_residual.resize(n);

  // Running first/second moments of the current window.
  double xm = 0.0, ym = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t cnt = 0;
  auto add = [&](std::size_t k) {
    ++cnt;
    const double dx = x[k] - xm;
    const double dy = y[k] - ym;
    xm += dx / static_cast<double>(cnt);
    ym += dy / static_cast<double>(cnt);
    sxx += dx * (x[k] - xm);
    sxy += dx * (y[k] - ym);
  };
  auto remove = [&](std::size_t k) {
    const double dx = x[k] - xm;
    const double dy = y[k] - ym;
    --cnt;
    xm -= dx / static_cast<double>(cnt);
    ym -= dy / static_cast<double>(cnt);
    sxx -= (x[k] - xm) * dx;
    sxy -= (x[k] - xm) * dy;
  };

  std::size_t lo = 0;
  for (std::size_t k = 0; k < m; ++k) add(k);
  const double fm = static_cast<double>(m);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t want = std::min(i > half ? i - half : 0, n - m);
    while (lo < want) {
      remove(lo);
      add(lo + m);
      ++lo;
    }
    const double span_width = x[lo + m - 1] - x[lo];
    const bool degenerate = !(sxx > 1e-14 * span_width * span_width);
    const double slope = degenerate ? 0.0 : sxy / sxx;
    const double fit = ym + slope * (x[i] - xm);
    out.fit[i] = fit;
    const double h =
        degenerate ? 1.0 / fm : 1.0 / fm + (x[i] - xm) * (x[i] - xm) / sxx;
    out.cv_residual[i] = h < 1.0 ? (y[i] - fit) / (1.0 - h) : 0.0;
  }
  return out;
}

namespace detail {

inline int span_to_count(double span, std::size_t n) {
  int ibw = static_cast<int>(0.5 * span * static_cast<double>(n) + 0.5);
  if (ibw < 2) ibw = 2;
  int m = 2 * ibw + 1;
  if (static_cast<std::size_t>(m) > n) {
    m = static_cast<int>(n);
    if (m % 2 == 0) --m;
  }
  return m;
}

}  // namespace detail

inline std::vector<double> supsmu_smooth(std::span<const double> values,
                                         const SupsmuConfig& cfg = {}) {
  const std::size_t n = values.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(values[i]))
      throw std::invalid_argument("supsmu: non-finite value at index " + std::to_string(i));
  if (!(cfg.spans[0] > 0.0 && cfg.spans[0] < cfg.spans[1] && cfg.spans[1] < cfg.spans[2] &&
        cfg.spans[2] <= 1.0))
    throw std::invalid_argument("supsmu: spans must be strictly increasing within (0, 1]");
  if (cfg.bass < 0.0 || cfg.bass > 10.0)
    throw std::invalid_argument("supsmu: bass must lie in [0, 10]");

  if (n <= 2) return {values.begin(), values.end()};

  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i + 1);

  const int mid_count = detail::span_to_count(cfg.spans[1], n);
  if (n < 10) return running_linear_smooth(x, values, mid_count).fit;

  // Pass 1: fit each span; smooth its absolute CV residuals with the
  // midrange span so the per-point comparison is stable.
  std::array<std::vector<double>, 3> fits;
  std::array<std::vector<double>, 3> cv;
  for (int s = 0; s < 3; ++s) {
    RunningLineFit r = running_linear_smooth(x, values, detail::span_to_count(cfg.spans[s], n));
    fits[s] = std::move(r.fit);
    for (double& v : r.cv_residual) v = std::abs(v);
    cv[s] = running_linear_smooth(x, r.cv_residual, mid_count).fit;
  }

  // Pass 2: pick the span with the smallest smoothed CV residual per point;
  // ties go to the larger span. Bass enhancement drags the choice toward the
  // woofer when its residual is close to the minimum.
  std::vector<double> chosen(n);
  for (std::size_t i = 0; i < n; ++i) {
    double resmin = cv[0][i];
    int best = 0;
    for (int s = 1; s < 3; ++s) {
      if (cv[s][i] <= resmin) {
        resmin = cv[s][i];
        best = s;
      }
    }
    double span = cfg.spans[best];
    if (cfg.bass > 0.0 && span < cfg.spans[2]) {
      double ratio = cv[2][i] > 0.0 ? resmin / cv[2][i] : 1.0;
      ratio = std::clamp(ratio, 1e-7, 1.0);
      span += (cfg.spans[2] - span) * std::pow(ratio, 10.0 - cfg.bass);
    }
    chosen[i] = span;
  }

  // Pass 3: smooth the span choices, interpolate between the bracketing span
  // fits, and polish with the tweeter span.
  std::vector<double> smoothed_span = running_linear_smooth(x, chosen, mid_count).fit;
  std::vector<double> blended(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = std::clamp(smoothed_span[i], cfg.spans[0], cfg.spans[2]);
    int k = s <= cfg.spans[1] ? 0 : 1;
    const double f = (s - cfg.spans[k]) / (cfg.spans[k + 1] - cfg.spans[k]);
    blended[i] = (1.0 - f) * fits[k][i] + f * fits[k + 1][i];
  }
  return running_linear_smooth(x, blended, detail::span_to_count(cfg.spans[0], n)).fit;
}

}  // namespace mstlkit
