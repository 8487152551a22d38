#pragma once

// Input conditioning ahead of decomposition: Box-Cox variance stabilization
// and missing-value interpolation. Missing observations are marked with NaN.

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "series.hpp"

namespace mstlkit {

inline bool is_missing(double v) { return std::isnan(v); }

namespace detail {

inline void validate_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("boxcox: lambda must lie in [0, 1]");
}

}  // namespace detail

// y = ln(x) when lambda == 0, else (x^lambda - 1)/lambda.
inline std::vector<double> boxcox(std::span<const double> values, double lambda) {
  detail::validate_lambda(lambda);
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = values[i];
    if (lambda == 0.0) {
      if (!(x > 0.0))
        throw std::invalid_argument("boxcox: non-positive value at index " + std::to_string(i) +
                                    " with lambda = 0");
      out[i] = std::log(x);
    } else {
      if (x < 0.0 && lambda != 1.0)
        throw std::invalid_argument("boxcox: negative value at index " + std::to_string(i) +
                                    " is outside the transform domain");
      out[i] = (std::pow(x, lambda) - 1.0) / lambda;
    }
  }
  return out;
}

inline std::vector<double> inv_boxcox(std::span<const double> values, double lambda) {
  detail::validate_lambda(lambda);
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double y = values[i];
    if (lambda == 0.0) {
      out[i] = std::exp(y);
    } else {
      const double base = lambda * y + 1.0;
      if (base < 0.0)
        throw std::invalid_argument("inv_boxcox: value at index " + std::to_string(i) +
                                    " is outside the inverse-transform domain");
      out[i] = std::pow(base, 1.0 / lambda);
    }
  }
  return out;
}

namespace detail {

// Linear interpolation across NaN gaps with constant extrapolation at the
// edges. Requires at least one observed value.
inline std::vector<double> linear_fill(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<double> out(values.begin(), values.end());
  std::size_t prev = n;  // last observed index seen, n = none yet
  for (std::size_t i = 0; i < n; ++i) {
    if (is_missing(out[i])) continue;
    if (prev == n) {
      for (std::size_t k = 0; k < i; ++k) out[k] = out[i];
    } else if (i > prev + 1) {
      const double step = (out[i] - out[prev]) / static_cast<double>(i - prev);
      for (std::size_t k = prev + 1; k < i; ++k)
        out[k] = out[prev] + step * static_cast<double>(k - prev);
    }
    prev = i;
  }
  if (prev == n) throw std::invalid_argument("interpolate_missing: all values are missing");
  for (std::size_t k = prev + 1; k < n; ++k) out[k] = out[prev];
  return out;
}

// Fourier design row for time t: intercept followed by sin/cos pairs for each
// period (up to min(p/2, 5) harmonics).
inline void fourier_row(double t, const std::vector<int>& periods, Eigen::RowVectorXd& row) {
  Eigen::Index c = 0;
  row(c++) = 1.0;
  for (int p : periods) {
    const int harmonics = std::min(p / 2, 5);
    for (int k = 1; k <= harmonics; ++k) {
      const double w = 2.0 * M_PI * k * t / static_cast<double>(p);
      row(c++) = std::sin(w);
      row(c++) = std::cos(w);
    }
  }
}

}  // namespace detail

// Replaces NaN entries. With no retained seasonal period the fill is a plain
// linear interpolation; with seasonality, a Fourier-regression surrogate is
// subtracted first so that the interpolation happens on the seasonally
// adjusted series, and the surrogate is added back at the filled positions.
// Observed values pass through untouched.
inline std::vector<double> interpolate_missing(std::span<const double> values,
                                               const std::vector<int>& periods) {
  const std::size_t n = values.size();
  std::vector<std::size_t> observed;
  observed.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_missing(values[i])) {
      if (!std::isfinite(values[i]))
        throw std::invalid_argument("interpolate_missing: non-finite value at index " +
                                    std::to_string(i));
      observed.push_back(i);
    }
  }
  if (observed.size() < 2)
    throw std::invalid_argument("interpolate_missing: needs at least 2 observed values, have " +
                                std::to_string(observed.size()));
  if (observed.size() == n) return {values.begin(), values.end()};

  const std::vector<int> retained = retain_periods(periods, n);
  if (retained.empty()) return detail::linear_fill(values);

  Eigen::Index cols = 1;
  for (int p : retained) cols += 2 * std::min(p / 2, 5);
  Eigen::MatrixXd design(static_cast<Eigen::Index>(observed.size()), cols);
  Eigen::VectorXd target(static_cast<Eigen::Index>(observed.size()));
  Eigen::RowVectorXd row(cols);
  for (std::size_t r = 0; r < observed.size(); ++r) {
    detail::fourier_row(static_cast<double>(observed[r]), retained, row);
    design.row(static_cast<Eigen::Index>(r)) = row;
    target(static_cast<Eigen::Index>(r)) = values[observed[r]];
  }
  const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(target);

  std::vector<double> adjusted(n);
  std::vector<double> surrogate(n);
  for (std::size_t t = 0; t < n; ++t) {
    detail::fourier_row(static_cast<double>(t), retained, row);
    surrogate[t] = row.dot(beta);
    adjusted[t] = is_missing(values[t]) ? std::nan("") : values[t] - surrogate[t];
  }
  const std::vector<double> filled = detail::linear_fill(adjusted);
  std::vector<double> out(values.begin(), values.end());
  for (std::size_t t = 0; t < n; ++t)
    if (is_missing(out[t])) out[t] = filled[t] + surrogate[t];
  return out;
}

}  // namespace mstlkit
