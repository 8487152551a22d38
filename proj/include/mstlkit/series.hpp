#pragma once

// Shared value types for the decomposition pipeline.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mstlkit {

// Additive decomposition of a series into trend, zero or more seasonal
// components (one per retained period, ascending), and a remainder.
// data == trend + sum(seasonals) + remainder holds element-wise, where data
// is the series after interpolation and any Box-Cox transform.
struct Decomposition {
  std::vector<double> data;
  std::vector<double> trend;
  std::vector<int> periods;                     // ascending, matches seasonals
  std::vector<std::vector<double>> seasonals;   // one per retained period
  std::vector<double> remainder;
  std::optional<double> lambda_applied;

  std::vector<double> seasonally_adjusted() const {
    std::vector<double> out = data;
    for (const auto& s : seasonals)
      for (std::size_t i = 0; i < out.size(); ++i) out[i] -= s[i];
    return out;
  }
};

// Filters candidate seasonal periods against the series length: keeps values
// with 1 < p and p < n/2, then sorts ascending and removes duplicates. The
// returned list may be empty, in which case the caller should treat the
// series as non-seasonal.
inline std::vector<int> retain_periods(std::vector<int> periods, std::size_t n) {
  std::vector<int> kept;
  kept.reserve(periods.size());
  for (int p : periods) {
    if (p <= 1) continue;
    if (2.0 * static_cast<double>(p) >= static_cast<double>(n)) continue;
    kept.push_back(p);
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  return kept;
}

namespace detail {

inline double sample_mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

// Unbiased (n-1) sample variance.
inline double sample_variance(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  const double m = sample_mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

inline void require_finite(const std::vector<double>& x, const std::string& what) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]))
      throw std::invalid_argument(what + ": non-finite value at index " + std::to_string(i));
}

}  // namespace detail

}  // namespace mstlkit
