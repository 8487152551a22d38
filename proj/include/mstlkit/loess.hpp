#pragma once

// Locally weighted polynomial regression with tricube neighbourhood weights.
// This is the numerical kernel behind the seasonal, trend, and low-pass
// smoothing steps of the decomposition pipeline.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mstlkit {

struct LoessConfig {
  int window_width = 7;  // q: number of nearest neighbours, positive odd
  int degree = 1;        // local polynomial degree, 0..2
  int jump = 1;          // stride between directly evaluated points
};

// Non-owning view of a smoothing problem. `robustness` may be empty, which
// stands for all-ones weights.
struct WeightedSeries {
  std::span<const double> positions;   // strictly increasing
  std::span<const double> values;      // same length
  std::span<const double> robustness;  // same length or empty, entries >= 0
};

inline double tricube_weight(double u) {
  const double a = std::abs(u);
  if (a >= 1.0) return 0.0;
  const double c = 1.0 - a * a * a;
  return c * c * c;
}

namespace detail {

inline void validate_loess_inputs(const WeightedSeries& s, const LoessConfig& cfg) {
  const std::size_t n = s.positions.size();
  if (n == 0) throw std::invalid_argument("loess: series is empty");
  if (s.values.size() != n)
    throw std::invalid_argument("loess: positions and values differ in length");
  if (!s.robustness.empty() && s.robustness.size() != n)
    throw std::invalid_argument("loess: robustness weights differ in length");
  if (cfg.degree < 0 || cfg.degree > 2)
    throw std::invalid_argument("loess: degree must be 0, 1, or 2");
  if (cfg.window_width < 1 || cfg.window_width % 2 == 0)
    throw std::invalid_argument("loess: window_width must be a positive odd integer");
  if (cfg.window_width < cfg.degree + 1)
    throw std::invalid_argument("loess: window_width must be at least degree + 1");
  if (cfg.jump < 1) throw std::invalid_argument("loess: jump must be >= 1");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(s.positions[i] < s.positions[i + 1]))
      throw std::invalid_argument("loess: positions must be strictly increasing");
}

struct LoessWindow {
  std::size_t lo = 0;
  std::size_t hi = 0;
  double half_width = 0.0;
};

// Window of the min(q, n) positions nearest to `at`. `lo_hint` must not exceed
// the optimal left edge; passing the previous window's edge makes a sweep over
// increasing evaluation points O(n) overall.
inline LoessWindow find_window(std::span<const double> x, double at, int q,
                               std::size_t lo_hint) {
  const std::size_t n = x.size();
  const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(q), n);
  std::size_t lo = std::min(lo_hint, n - m);
  while (lo + m < n && x[lo + m] - at < at - x[lo]) ++lo;
  const std::size_t hi = lo + m - 1;
  double h = std::max(at - x[lo], x[hi] - at);
  if (static_cast<std::size_t>(q) > n) h *= static_cast<double>(q) / static_cast<double>(n);
  return {lo, hi, h};
}

// Weighted least-squares fit over one window, evaluated at `at`. Solves the
// normal equations of the polynomial centred at the evaluation point, so the
// fitted value is simply the constant coefficient. Degrades the degree when
// the window cannot support it.
inline double fit_window(const WeightedSeries& s, double at, int degree,
                         const LoessWindow& w, std::vector<double>& weights) {
  const std::size_t m = w.hi - w.lo + 1;
  if (m == 1) return s.values[w.lo];

  weights.resize(m);
  const double h = w.half_width;
  std::size_t effective = 0;
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double r = std::abs(s.positions[w.lo + j] - at);
    double wt = tricube_weight(r / h);
    if (!s.robustness.empty()) wt *= s.robustness[w.lo + j];
    weights[j] = wt;
    sum += wt;
    if (wt > 0.0) ++effective;
  }
  if (sum <= 0.0) {
    // All neighbours were zeroed by robustness weights; retry unweighted.
    effective = 0;
    sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double r = std::abs(s.positions[w.lo + j] - at);
      weights[j] = tricube_weight(r / h);
      sum += weights[j];
      if (weights[j] > 0.0) ++effective;
    }
    if (sum <= 0.0)
      throw std::runtime_error("loess: degenerate neighbourhood (all weights zero) at position " +
                               std::to_string(at));
  }

  int d = std::min<int>(degree, static_cast<int>(effective) - 1);
  while (d > 0) {
    // Moments of u = (x - at)/h, which keeps the system well-scaled.
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    double t0 = 0, t1 = 0, t2 = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const double wt = weights[j];
      if (wt == 0.0) continue;
      const double u = (s.positions[w.lo + j] - at) / h;
      const double wu = wt * u;
      const double y = s.values[w.lo + j];
      s0 += wt;
      s1 += wu;
      s2 += wu * u;
      t0 += wt * y;
      t1 += wu * y;
      if (d == 2) {
        s3 += wu * u * u;
        s4 += wu * u * u * u;
        t2 += wu * u * y;
      }
    }
    if (d == 1) {
      const double det = s0 * s2 - s1 * s1;
      if (det > 1e-12 * s0 * s2) return (t0 * s2 - t1 * s1) / det;
    } else {
      const double det = s0 * (s2 * s4 - s3 * s3) - s1 * (s1 * s4 - s2 * s3) +
                         s2 * (s1 * s3 - s2 * s2);
      const double scale = s0 * s2 * s4;
      if (std::abs(det) > 1e-12 * std::abs(scale) && scale > 0.0) {
        // Cramer's rule for the constant coefficient only.
        const double det0 = t0 * (s2 * s4 - s3 * s3) - s1 * (t1 * s4 - t2 * s3) +
                            s2 * (t1 * s3 - t2 * s2);
        return det0 / det;
      }
    }
    --d;
  }
  double t0 = 0, s0 = 0;
  for (std::size_t j = 0; j < m; ++j) {
    t0 += weights[j] * s.values[w.lo + j];
    s0 += weights[j];
  }
  return t0 / s0;
}

inline double fit_point_hinted(const WeightedSeries& s, double at, const LoessConfig& cfg,
                               std::size_t& lo_hint, std::vector<double>& scratch) {
  const LoessWindow w = find_window(s.positions, at, cfg.window_width, lo_hint);
  lo_hint = w.lo;
  return fit_window(s, at, cfg.degree, w, scratch);
}

}  // namespace detail

// Fitted value at an arbitrary position `at` (not necessarily one of the
// series positions).
inline double loess_fit_point(const WeightedSeries& s, double at, const LoessConfig& cfg) {
  detail::validate_loess_inputs(s, cfg);
  std::size_t hint = 0;
  std::vector<double> scratch;
  return detail::fit_point_hinted(s, at, cfg, hint, scratch);
}

// Fitted values at every series position. Points skipped by `jump` are filled
// by linear interpolation between the directly evaluated neighbours; both
// endpoints are always evaluated directly.
inline std::vector<double> loess_smooth(const WeightedSeries& s, const LoessConfig& cfg) {
  detail::validate_loess_inputs(s, cfg);
  const std::size_t n = s.positions.size();
  std::vector<double> out(n);
  std::vector<double> scratch;
  std::size_t hint = 0;

  std::size_t prev = 0;
  out[0] = detail::fit_point_hinted(s, s.positions[0], cfg, hint, scratch);
  std::size_t i = 0;
  while (i + 1 < n) {
    i = std::min(i + static_cast<std::size_t>(cfg.jump), n - 1);
    out[i] = detail::fit_point_hinted(s, s.positions[i], cfg, hint, scratch);
    if (i > prev + 1) {
      const double denom = s.positions[i] - s.positions[prev];
      for (std::size_t k = prev + 1; k < i; ++k) {
        const double alpha = (s.positions[k] - s.positions[prev]) / denom;
        out[k] = (1.0 - alpha) * out[prev] + alpha * out[i];
      }
    }
    prev = i;
  }
  return out;
}

}  // namespace mstlkit
