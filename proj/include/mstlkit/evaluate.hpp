#pragma once

// Scoring and benchmarking: per-component RMSE of a decomposition against
// recorded ground truth, corpus-level aggregation (pooled squared errors and
// mean-of-RMSE, both reported), and a threaded benchmark driver that reads a
// manifest, decomposes every series, and emits a versioned JSON report.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <nlohmann/json.hpp>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mstl.hpp"
#include "series.hpp"
#include "series_io.hpp"
#include "simulate.hpp"

namespace mstlkit {

inline constexpr const char* kReportSchema = "mstlkit-report-v1";

inline double rmse(std::span<const double> truth, std::span<const double> estimate) {
  if (truth.size() != estimate.size())
    throw std::invalid_argument("rmse: arrays differ in length (" + std::to_string(truth.size()) +
                                " vs " + std::to_string(estimate.size()) + ")");
  if (truth.empty()) throw std::invalid_argument("rmse: empty arrays");
  double acc = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = truth[i] - estimate[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(truth.size()));
}

struct ComponentWeights {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
};

struct ComponentScores {
  std::string series_id;
  std::size_t length = 0;
  double trend_rmse = 0.0;
  std::vector<int> periods;            // ascending, matches seasonal_rmse
  std::vector<double> seasonal_rmse;
  double remainder_rmse = 0.0;
  double wall_clock_seconds = 0.0;
};

namespace detail {

inline std::size_t seasonal_index(const Decomposition& d, int period) {
  for (std::size_t i = 0; i < d.periods.size(); ++i)
    if (d.periods[i] == period) return i;
  throw std::invalid_argument("score_decomposition: result has no seasonal component for period " +
                              std::to_string(period));
}

inline std::vector<double> scaled(std::span<const double> x, double w) {
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) v *= w;
  return out;
}

}  // namespace detail

// Scores against simulated ground truth. The decomposer only ever sees the
// composite, so seasonal and remainder truths are compared at their weighted
// scale: alpha*S_short, beta*S_long, gamma*R. Trend enters with weight 1.
inline ComponentScores score_decomposition(const GroundTruth& truth, const Decomposition& result,
                                           const ComponentWeights& w) {
  const std::size_t n = truth.composite.size();
  if (result.trend.size() != n || result.remainder.size() != n)
    throw std::invalid_argument("score_decomposition: result length does not match truth");
  ComponentScores s;
  s.length = n;
  s.trend_rmse = rmse(truth.trend, result.trend);
  const std::vector<std::pair<int, const std::vector<double>*>> truth_seasonals{
      {truth.periods[0], &truth.seasonal_short}, {truth.periods[1], &truth.seasonal_long}};
  const double weights[2] = {w.alpha, w.beta};
  for (int k = 0; k < 2; ++k) {
    const auto& [period, component] = truth_seasonals[static_cast<std::size_t>(k)];
    const std::size_t idx = detail::seasonal_index(result, period);
    s.periods.push_back(period);
    s.seasonal_rmse.push_back(
        rmse(detail::scaled(*component, weights[k]), result.seasonals[idx]));
  }
  s.remainder_rmse = rmse(detail::scaled(truth.remainder, w.gamma), result.remainder);
  return s;
}

// Scores against a recorded decomposition (the bootstrap protocol): raw
// component-by-component comparison, seasonals matched by period.
inline ComponentScores score_decomposition(const Decomposition& truth,
                                           const Decomposition& result) {
  const std::size_t n = truth.data.size();
  if (result.trend.size() != n || result.remainder.size() != n)
    throw std::invalid_argument("score_decomposition: result length does not match truth");
  ComponentScores s;
  s.length = n;
  s.trend_rmse = rmse(truth.trend, result.trend);
  for (std::size_t i = 0; i < truth.periods.size(); ++i) {
    const std::size_t idx = detail::seasonal_index(result, truth.periods[i]);
    s.periods.push_back(truth.periods[i]);
    s.seasonal_rmse.push_back(rmse(truth.seasonals[i], result.seasonals[idx]));
  }
  s.remainder_rmse = rmse(truth.remainder, result.remainder);
  return s;
}

struct SeriesError {
  std::string series_id;
  std::string message;
};

// Per-component aggregates. `pooled` treats every squared error in the corpus
// as one pool: sqrt(sum_s n_s * rmse_s^2 / sum_s n_s). `mean` is the plain
// average of per-series RMSEs. Seasonal slots aggregate by position.
struct AggregateScores {
  double trend_pooled = 0.0, trend_mean = 0.0;
  std::vector<int> periods;
  std::vector<double> seasonal_pooled, seasonal_mean;
  double remainder_pooled = 0.0, remainder_mean = 0.0;
};

struct EvaluationReport {
  std::string schema = kReportSchema;
  std::vector<ComponentScores> series;
  std::vector<SeriesError> errors;
  bool aggregate_defined = false;
  AggregateScores aggregate;
  double total_wall_seconds = 0.0;
  nlohmann::json config_echo;
};

inline AggregateScores aggregate_scores(const std::vector<ComponentScores>& series) {
  if (series.empty()) throw std::invalid_argument("aggregate_scores: no series");
  AggregateScores a;
  const std::size_t slots = series.front().periods.size();
  a.periods = series.front().periods;
  a.seasonal_pooled.assign(slots, 0.0);
  a.seasonal_mean.assign(slots, 0.0);
  double total_n = 0.0;
  double trend_sq = 0.0, rem_sq = 0.0;
  std::vector<double> seas_sq(slots, 0.0);
  for (const ComponentScores& s : series) {
    if (s.periods.size() != slots)
      throw std::invalid_argument("aggregate_scores: inconsistent seasonal component counts");
    const double n = static_cast<double>(s.length);
    total_n += n;
    trend_sq += n * s.trend_rmse * s.trend_rmse;
    rem_sq += n * s.remainder_rmse * s.remainder_rmse;
    a.trend_mean += s.trend_rmse;
    a.remainder_mean += s.remainder_rmse;
    for (std::size_t k = 0; k < slots; ++k) {
      if (s.periods[k] != a.periods[k]) a.periods[k] = -1;  // mixed corpus
      seas_sq[k] += n * s.seasonal_rmse[k] * s.seasonal_rmse[k];
      a.seasonal_mean[k] += s.seasonal_rmse[k];
    }
  }
  const double count = static_cast<double>(series.size());
  a.trend_pooled = std::sqrt(trend_sq / total_n);
  a.remainder_pooled = std::sqrt(rem_sq / total_n);
  a.trend_mean /= count;
  a.remainder_mean /= count;
  for (std::size_t k = 0; k < slots; ++k) {
    a.seasonal_pooled[k] = std::sqrt(seas_sq[k] / total_n);
    a.seasonal_mean[k] /= count;
  }
  return a;
}

inline void to_json(nlohmann::json& j, const ComponentScores& s) {
  j = nlohmann::json{{"series_id", s.series_id},
                     {"length", s.length},
                     {"trend_rmse", s.trend_rmse},
                     {"periods", s.periods},
                     {"seasonal_rmse", s.seasonal_rmse},
                     {"remainder_rmse", s.remainder_rmse},
                     {"wall_clock_seconds", s.wall_clock_seconds}};
}

inline void to_json(nlohmann::json& j, const SeriesError& e) {
  j = nlohmann::json{{"series_id", e.series_id}, {"message", e.message}};
}

inline void to_json(nlohmann::json& j, const AggregateScores& a) {
  j = nlohmann::json{{"trend", {{"pooled", a.trend_pooled}, {"mean", a.trend_mean}}},
                     {"remainder", {{"pooled", a.remainder_pooled}, {"mean", a.remainder_mean}}}};
  nlohmann::json seasonal = nlohmann::json::array();
  for (std::size_t k = 0; k < a.seasonal_pooled.size(); ++k)
    seasonal.push_back({{"period", a.periods[k]},
                        {"pooled", a.seasonal_pooled[k]},
                        {"mean", a.seasonal_mean[k]}});
  j["seasonal"] = seasonal;
}

inline void to_json(nlohmann::json& j, const EvaluationReport& r) {
  j = nlohmann::json{{"schema", r.schema},
                     {"series", r.series},
                     {"errors", r.errors},
                     {"total_wall_seconds", r.total_wall_seconds},
                     {"config", r.config_echo}};
  if (r.aggregate_defined) {
    j["aggregate"] = r.aggregate;
  } else {
    j["aggregate"] = nullptr;
  }
}

namespace detail {

inline nlohmann::json mstl_params_echo(const MstlParams& p) {
  nlohmann::json j{{"iterate", p.iterate},
                   {"s_windows", p.s_windows},
                   {"robust", p.stl_overrides.robust}};
  if (p.lambda) j["lambda"] = *p.lambda;
  else j["lambda"] = nullptr;
  return j;
}

}  // namespace detail

// Decomposes and scores every manifest entry. Entries with kind "simulated"
// are scored at their recorded alpha/beta/gamma weights; everything else
// (bootstrap corpora) is scored raw. Failures become error records and the
// run continues. `threads` <= 1 runs serially.
inline EvaluationReport run_benchmark(const std::filesystem::path& manifest_path,
                                      const MstlParams& params, unsigned threads = 1) {
  const auto t_start = std::chrono::steady_clock::now();
  const std::vector<nlohmann::json> entries = io::read_manifest(manifest_path);
  const std::filesystem::path base_dir = manifest_path.parent_path();

  EvaluationReport report;
  report.config_echo = detail::mstl_params_echo(params);
  const std::size_t count = entries.size();
  std::vector<ComponentScores> scores(count);
  std::vector<std::string> failures(count);
  std::vector<char> failed(count, 0);

  auto process = [&](std::size_t i) {
    const nlohmann::json& e = entries[i];
    const std::string id = e.value("path", "entry_" + std::to_string(i));
    try {
      const auto t0 = std::chrono::steady_clock::now();
      const io::CorpusSeries cs = io::read_corpus_csv(base_dir / e.at("path").get<std::string>());
      const std::vector<int> periods = e.at("periods").get<std::vector<int>>();

      MultiSeasonalSeries input;
      input.values = cs.composite;
      input.periods = periods;
      const Decomposition result = mstl_decompose(input, params);

      Decomposition truth;
      truth.data = cs.composite;
      truth.trend = cs.trend;
      truth.remainder = cs.remainder;
      truth.periods = retain_periods(periods, cs.composite.size());
      if (truth.periods.size() != cs.seasonals.size())
        throw std::invalid_argument("seasonal column count does not match the declared periods");
      truth.seasonals = cs.seasonals;
      if (e.value("kind", "") == "simulated") {
        const ComponentWeights w{e.value("alpha", 1.0), e.value("beta", 1.0),
                                 e.value("gamma", 1.0)};
        for (std::size_t k = 0; k < truth.seasonals.size(); ++k)
          for (double& v : truth.seasonals[k]) v *= (k == 0 ? w.alpha : w.beta);
        for (double& v : truth.remainder) v *= w.gamma;
      }
      ComponentScores s = score_decomposition(truth, result);
      s.series_id = id;
      s.wall_clock_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      scores[i] = std::move(s);
    } catch (const std::exception& ex) {
      failed[i] = 1;
      failures[i] = ex.what();
      scores[i].series_id = id;
    }
  };

  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) process(i);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        process(i);
      }
    };
    std::vector<std::thread> pool;
    const unsigned n_threads = std::min<unsigned>(threads, static_cast<unsigned>(count));
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  for (std::size_t i = 0; i < count; ++i) {
    if (failed[i])
      report.errors.push_back({scores[i].series_id, failures[i]});
    else
      report.series.push_back(std::move(scores[i]));
  }
  if (!report.series.empty()) {
    report.aggregate = aggregate_scores(report.series);
    report.aggregate_defined = true;
  }
  report.total_wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

}  // namespace mstlkit
