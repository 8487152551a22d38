#include <catch2/catch_amalgamated.hpp>

#include <mstlkit/mstl.hpp>

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

using mstlkit::Decomposition;
using mstlkit::default_s_windows;
using mstlkit::kPeriodicWindow;
using mstlkit::mstl_decompose;
using mstlkit::MstlParams;
using mstlkit::MultiSeasonalSeries;
using mstlkit::retain_periods;
using mstlkit::SWindowPolicy;

namespace {

std::vector<double> two_season_series(std::size_t n, std::vector<double>* s7 = nullptr,
                                      std::vector<double>* s30 = nullptr) {
  std::vector<double> x(n);
  if (s7) s7->resize(n);
  if (s30) s30->resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double a = 2.0 * std::sin(2.0 * std::numbers::pi * double(t % 7) / 7.0);
    const double b = 1.3 * std::cos(2.0 * std::numbers::pi * double(t % 30) / 30.0) +
                     0.6 * std::sin(4.0 * std::numbers::pi * double(t % 30) / 30.0);
    if (s7) (*s7)[t] = a;
    if (s30) (*s30)[t] = b;
    x[t] = a + b + 0.01 * double(t) + 0.05 * std::sin(1.1 * double(t));
  }
  return x;
}

// Power of the discrete Fourier transform of `v` at frequency k cycles per n
// points, computed directly.
double dft_power(const std::vector<double>& v, double cycles_per_n) {
  double re = 0.0, im = 0.0;
  const std::size_t n = v.size();
  for (std::size_t t = 0; t < n; ++t) {
    const double w = 2.0 * std::numbers::pi * cycles_per_n * double(t) / double(n);
    re += v[t] * std::cos(w);
    im += v[t] * std::sin(w);
  }
  return re * re + im * im;
}

}  // namespace

TEST_CASE("period filtering keeps 1 < p < n/2, sorted and deduplicated", "[mstl]") {
  CHECK(retain_periods({12}, 25) == std::vector<int>{12});
  CHECK(retain_periods({12}, 24).empty());  // 2p == n is too long
  CHECK(retain_periods({365, 7, 24, 7, 1, 0, -4}, 1096) == std::vector<int>{7, 24, 365});
  CHECK(retain_periods({24, 168}, 505) == std::vector<int>{24, 168});
  CHECK(retain_periods({}, 100).empty());
  CHECK(retain_periods({1}, 100).empty());
}

TEST_CASE("default seasonal windows grow oddly with the period index", "[mstl]") {
  CHECK(default_s_windows(1) == std::vector<int>{11});
  CHECK(default_s_windows(2) == std::vector<int>{11, 15});
  CHECK(default_s_windows(3) == std::vector<int>{11, 15, 19});

  const SWindowPolicy policy{10, 3};  // 13, 16 -> 17, 19
  CHECK(default_s_windows(3, policy) == std::vector<int>{13, 17, 19});

  CHECK_THROWS_AS(default_s_windows(0), std::invalid_argument);
}

TEST_CASE("a single retained period reduces to one direct fit", "[mstl]") {
  const std::size_t n = 160;
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t)
    x[t] = std::sin(2.0 * std::numbers::pi * double(t % 12) / 12.0) + 0.02 * double(t) +
           0.1 * std::cos(0.9 * double(t));

  MultiSeasonalSeries series;
  series.values = x;
  series.periods = {12};
  const Decomposition d = mstl_decompose(series);

  mstlkit::StlParams sp;
  sp.period = 12;
  sp.seasonal_window = default_s_windows(1)[0];
  const mstlkit::StlFit direct = mstlkit::stl_decompose(x, sp);

  REQUIRE(d.periods == std::vector<int>{12});
  REQUIRE(d.seasonals.size() == 1);
  // Identical arithmetic on both paths: the match is exact, not approximate.
  CHECK(d.seasonals[0] == direct.seasonal);
  CHECK(d.trend == direct.trend);
  CHECK(d.remainder == direct.remainder);
  CHECK(d.data == x);
}

TEST_CASE("explicit seasonal windows reach the inner fits", "[mstl]") {
  const std::size_t n = 160;
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t)
    x[t] = std::sin(2.0 * std::numbers::pi * double(t % 12) / 12.0) + 0.02 * double(t);

  MultiSeasonalSeries series;
  series.values = x;
  series.periods = {12};

  MstlParams params;
  params.s_windows = {23};
  const Decomposition d = mstl_decompose(series, params);

  mstlkit::StlParams sp;
  sp.period = 12;
  sp.seasonal_window = 23;
  const mstlkit::StlFit direct = mstlkit::stl_decompose(x, sp);
  CHECK(d.seasonals[0] == direct.seasonal);
  CHECK(d.trend == direct.trend);

  // Period and seasonal-window fields of the shared overrides are ignored.
  MstlParams noisy = params;
  noisy.stl_overrides.period = 999;
  noisy.stl_overrides.seasonal_window = 5;
  const Decomposition same = mstl_decompose(series, noisy);
  CHECK(same.seasonals[0] == d.seasonals[0]);
  CHECK(same.trend == d.trend);

  const MstlParams periodic{2, std::nullopt, {kPeriodicWindow}, {}, {}};
  const Decomposition dp = mstl_decompose(series, periodic);
  for (std::size_t t = 0; t + 12 < n; ++t)
    CHECK(std::abs(dp.seasonals[0][t + 12] - dp.seasonals[0][t]) < 1e-12);
}

TEST_CASE("two seasonal components are separated by frequency", "[mstl]") {
  std::vector<double> s7, s30;
  const std::size_t n = 450;
  const std::vector<double> x = two_season_series(n, &s7, &s30);

  MultiSeasonalSeries series;
  series.values = x;
  series.periods = {30, 7};  // deliberately unsorted
  const Decomposition d = mstl_decompose(series);

  REQUIRE(d.periods == std::vector<int>{7, 30});
  REQUIRE(d.seasonals.size() == 2);

  // Reconstruction identity.
  for (std::size_t t = 0; t < n; ++t) {
    const double recon = d.trend[t] + d.seasonals[0][t] + d.seasonals[1][t] + d.remainder[t];
    CHECK(std::abs(recon - d.data[t]) < 1e-9);
  }

  // Each component carries its own frequency: compare DFT power at the two
  // fundamental frequencies within each fitted seasonal (>= 20 dB separation).
  const double cycles7 = double(n) / 7.0;
  const double cycles30 = double(n) / 30.0;
  CHECK(dft_power(d.seasonals[0], cycles7) > 100.0 * dft_power(d.seasonals[0], cycles30));
  CHECK(dft_power(d.seasonals[1], cycles30) > 100.0 * dft_power(d.seasonals[1], cycles7));

  // And each tracks its generating component closely.
  double err7 = 0.0, err30 = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    err7 += (d.seasonals[0][t] - s7[t]) * (d.seasonals[0][t] - s7[t]);
    err30 += (d.seasonals[1][t] - s30[t]) * (d.seasonals[1][t] - s30[t]);
  }
  CHECK(std::sqrt(err7 / double(n)) < 0.15);
  CHECK(std::sqrt(err30 / double(n)) < 0.15);
}

TEST_CASE("iterate count changes the refinement but preserves the identity", "[mstl]") {
  const std::size_t n = 450;
  const std::vector<double> x = two_season_series(n);

  MultiSeasonalSeries series;
  series.values = x;
  series.periods = {7, 30};

  MstlParams once;
  once.iterate = 1;
  MstlParams twice;
  twice.iterate = 2;
  const Decomposition d1 = mstl_decompose(series, once);
  const Decomposition d2 = mstl_decompose(series, twice);

  CHECK(d1.seasonals[0] != d2.seasonals[0]);
  for (const Decomposition* d : {&d1, &d2}) {
    for (std::size_t t = 0; t < n; ++t) {
      const double recon =
          d->trend[t] + d->seasonals[0][t] + d->seasonals[1][t] + d->remainder[t];
      CHECK(std::abs(recon - d->data[t]) < 1e-9);
    }
  }
}

TEST_CASE("without a retained period the super smoother supplies the trend", "[mstl]") {
  const std::size_t n = 120;
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t)
    x[t] = std::sin(0.05 * double(t)) + 0.3 * std::cos(2.1 * double(t));

  MultiSeasonalSeries series;
  series.values = x;
  series.periods = {90};  // dropped: 2*90 > 120
  const MstlParams params;
  const Decomposition d = mstl_decompose(series, params);

  CHECK(d.periods.empty());
  CHECK(d.seasonals.empty());
  CHECK(d.trend == mstlkit::supsmu_smooth(x, params.supsmu));
  for (std::size_t t = 0; t < n; ++t)
    CHECK(d.remainder[t] == x[t] - d.trend[t]);
}

TEST_CASE("interpolation and transform feed the decomposition", "[mstl]") {
  const std::size_t n = 200;
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t)
    x[t] = 10.0 + 3.0 * std::sin(2.0 * std::numbers::pi * double(t % 12) / 12.0) +
           0.05 * double(t);
  std::vector<double> holed = x;
  holed[17] = std::numeric_limits<double>::quiet_NaN();
  holed[111] = std::numeric_limits<double>::quiet_NaN();

  MultiSeasonalSeries series;
  series.values = holed;
  series.periods = {12};
  MstlParams params;
  params.lambda = 0.5;
  const Decomposition d = mstl_decompose(series, params);

  const std::vector<double> expect =
      mstlkit::boxcox(mstlkit::interpolate_missing(holed, {12}), 0.5);
  CHECK(d.data == expect);
  REQUIRE(d.lambda_applied.has_value());
  CHECK(*d.lambda_applied == 0.5);

  for (std::size_t t = 0; t < n; ++t) {
    const double recon = d.trend[t] + d.seasonals[0][t] + d.remainder[t];
    CHECK(std::abs(recon - d.data[t]) < 1e-9);
  }
}

TEST_CASE("seasonally adjusted series equals trend plus remainder", "[mstl]") {
  const std::vector<double> x = two_season_series(450);
  MultiSeasonalSeries series;
  series.values = x;
  series.periods = {7, 30};
  const Decomposition d = mstl_decompose(series);

  const std::vector<double> adjusted = mstlkit::seasonal_adjust(d);
  for (std::size_t t = 0; t < x.size(); ++t)
    CHECK(adjusted[t] == Catch::Approx(d.trend[t] + d.remainder[t]).margin(1e-9));
}

TEST_CASE("decomposition inputs are validated", "[mstl]") {
  MultiSeasonalSeries series;
  series.values = {1.0, 2.0};
  CHECK_THROWS_AS(mstl_decompose(series), std::invalid_argument);

  series.values = two_season_series(100);
  series.periods = {7};
  MstlParams params;
  params.iterate = 0;
  CHECK_THROWS_AS(mstl_decompose(series, params), std::invalid_argument);

  params = MstlParams{};
  params.lambda = 1.5;
  CHECK_THROWS_AS(mstl_decompose(series, params), std::invalid_argument);
  params.lambda = -0.5;
  CHECK_THROWS_AS(mstl_decompose(series, params), std::invalid_argument);

  params = MstlParams{};
  params.s_windows = {10};  // even
  CHECK_THROWS_AS(mstl_decompose(series, params), std::invalid_argument);
  params.s_windows = {-7};
  CHECK_THROWS_AS(mstl_decompose(series, params), std::invalid_argument);
}
