#pragma once

// Moving block bootstrap of a decomposition's remainder: overlapping blocks
// of the remainder are resampled and added back onto trend + seasonals to
// manufacture perturbed copies of a real series whose true components are,
// by assumption, the recorded decomposition.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rng.hpp"
#include "series.hpp"

namespace mstlkit {

struct MbbConfig {
  int block_length = 0;  // 0 -> 2 * max(period), capped at floor(n/2)
  int replicates = 1;
  std::uint64_t seed = 0;
};

// Default block length: twice the largest seasonal period so a block spans
// the longest dependence scale, capped at half the series.
inline std::size_t default_block_length(std::size_t n, std::span<const int> periods) {
  std::size_t l = 1;
  for (int p : periods) l = std::max(l, 2 * static_cast<std::size_t>(std::max(p, 0)));
  l = std::min(l, n / 2);
  return std::max<std::size_t>(l, 1);
}

namespace detail {

// Assembly core shared by the random path and the tests: concatenate the
// blocks given by `starts`, drop `offset` values from the head, keep n.
inline std::vector<double> mbb_assemble(std::span<const double> values, std::size_t block_length,
                                        std::span<const std::size_t> starts, std::size_t offset) {
  const std::size_t n = values.size();
  std::vector<double> concat;
  concat.reserve(starts.size() * block_length);
  for (std::size_t s : starts)
    for (std::size_t k = 0; k < block_length; ++k) concat.push_back(values[s + k]);
  if (concat.size() < offset + n)
    throw std::invalid_argument("mbb_assemble: not enough blocks to cover the series");
  return {concat.begin() + static_cast<std::ptrdiff_t>(offset),
          concat.begin() + static_cast<std::ptrdiff_t>(offset + n)};
}

inline std::vector<double> mbb_resample_stream(std::span<const double> values,
                                               std::size_t block_length, RandomStream& rng) {
  const std::size_t n = values.size();
  const std::size_t num_blocks = n / block_length + 2;
  std::vector<std::size_t> starts(num_blocks);
  for (std::size_t& s : starts) s = rng.uniform_below(n - block_length + 1);
  const std::size_t offset = rng.uniform_below(block_length);
  return mbb_assemble(values, block_length, starts, offset);
}

}  // namespace detail

// One bootstrap replicate of `remainder`. `replicate` selects the RNG
// substream, so replicates can be produced independently and in parallel.
inline std::vector<double> mbb_resample(std::span<const double> remainder, const MbbConfig& cfg,
                                        std::uint64_t replicate = 0) {
  const std::size_t n = remainder.size();
  if (n == 0) throw std::invalid_argument("mbb_resample: empty input");
  if (cfg.block_length < 1)
    throw std::invalid_argument("mbb_resample: block_length must be positive");
  if (static_cast<std::size_t>(cfg.block_length) > n)
    throw std::invalid_argument("mbb_resample: block_length " +
                                std::to_string(cfg.block_length) + " exceeds series length " +
                                std::to_string(n));
  RandomStream rng(cfg.seed, replicate);
  return detail::mbb_resample_stream(remainder, static_cast<std::size_t>(cfg.block_length), rng);
}

// `replicates` perturbed copies of the series: trend + all seasonals +
// a bootstrap resample of the remainder. The decomposition doubles as the
// recorded ground truth for downstream scoring.
inline std::vector<std::vector<double>> perturb_series(std::span<const double> series,
                                                       const Decomposition& d, MbbConfig cfg) {
  const std::size_t n = series.size();
  if (d.trend.size() != n || d.remainder.size() != n)
    throw std::invalid_argument("perturb_series: decomposition does not match the series length");
  for (const auto& s : d.seasonals)
    if (s.size() != n)
      throw std::invalid_argument("perturb_series: seasonal component length mismatch");
  if (cfg.replicates < 1)
    throw std::invalid_argument("perturb_series: replicates must be positive");
  if (cfg.block_length == 0)
    cfg.block_length = static_cast<int>(default_block_length(n, d.periods));

  std::vector<double> base = d.trend;
  for (const auto& s : d.seasonals)
    for (std::size_t t = 0; t < n; ++t) base[t] += s[t];

  std::vector<std::vector<double>> out(static_cast<std::size_t>(cfg.replicates));
  for (std::size_t r = 0; r < out.size(); ++r) {
    std::vector<double> resampled = mbb_resample(d.remainder, cfg, r);
    for (std::size_t t = 0; t < n; ++t) resampled[t] += base[t];
    out[r] = std::move(resampled);
  }
  return out;
}

}  // namespace mstlkit
