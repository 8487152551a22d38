#pragma once

// Counter-based random number generation (Philox4x32-10, Salmon et al. 2011,
// "Parallel random numbers: as easy as 1, 2, 3").
//
// Every random quantity in this library is drawn from a RandomStream addressed
// by (seed, stream). Distinct stream ids yield statistically independent
// sequences without any coordination of draw counts, so a corpus generator can
// dedicate one stream per series component (trend, each seasonal, remainder)
// and one per bootstrap replicate. Draw k of a stream is a pure function of
// (seed, stream, k), which makes generated corpora reproducible.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace mstlkit {

// One Philox4x32-10 block: 4 output words from a 64-bit key and 128-bit counter.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 2> key,
                                               std::array<std::uint32_t, 4> ctr) {
  constexpr std::uint32_t m0 = 0xD2511F53u;
  constexpr std::uint32_t m1 = 0xCD9E8D57u;
  constexpr std::uint32_t w0 = 0x9E3779B9u;
  constexpr std::uint32_t w1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(m0) * ctr[0];
    const std::uint64_t p1 = std::uint64_t(m1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
           static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
           static_cast<std::uint32_t>(p0)};
    key[0] += w0;
    key[1] += w1;
  }
  return ctr;
}

// A single substream of the seeded generator. Block i of stream s under seed k
// is philox4x32(key = k, counter = (i, s)); one block feeds one draw.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Uniform on [0, 1), 53 random bits.
  double uniform() {
    const auto b = next_block();
    return static_cast<double>(bits53(b[0], b[1])) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; one block per draw.
  double normal() {
    const auto b = next_block();
    // First uniform shifted into (0, 1] so the log is finite.
    const double u1 = static_cast<double>(bits53(b[0], b[1]) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(bits53(b[2], b[3])) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Uniform integer on [0, bound). Modulo bias is < bound / 2^64.
  std::uint64_t uniform_below(std::uint64_t bound) {
    const auto b = next_block();
    const std::uint64_t v = (std::uint64_t(b[0]) << 32) | b[1];
    return v % bound;
  }

 private:
  static std::uint64_t bits53(std::uint32_t hi, std::uint32_t lo) {
    return ((std::uint64_t(hi) << 32) | lo) >> 11;
  }

  std::array<std::uint32_t, 4> next_block() {
    const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_),
                                           static_cast<std::uint32_t>(seed_ >> 32)};
    const std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(counter_),
                                           static_cast<std::uint32_t>(counter_ >> 32),
                                           static_cast<std::uint32_t>(stream_),
                                           static_cast<std::uint32_t>(stream_ >> 32)};
    ++counter_;
    return philox4x32(key, ctr);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace mstlkit
