#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace relkac {

/// Identifies one independent random stream: the (seed, stream_id) pair is
/// the whole state needed to reproduce every draw of a Monte Carlo sample.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  bool operator==(const RngStream&) const = default;
};

/// Philox2x64-10 counter-based bijection: key = seed, counter = (block, stream_id).
std::array<std::uint64_t, 2> philox2x64(std::array<std::uint64_t, 2> counter,
                                        std::uint64_t key);

/// UniformRandomBitGenerator over a single stream. Draw k is a pure
/// function of (seed, stream_id, k).
class PhiloxEngine {
 public:
  using result_type = std::uint64_t;

  explicit PhiloxEngine(RngStream stream) : stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (lane_ == 2) {
      buffer_ = philox2x64({block_++, stream_.stream_id}, stream_.seed);
      lane_ = 0;
    }
    return buffer_[lane_++];
  }

  RngStream stream() const { return stream_; }

 private:
  RngStream stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int lane_ = 2;
};

/// The variates every sampler needs, drawn from one stream.
class RandomSource {
 public:
  explicit RandomSource(RngStream stream) : engine_(stream) {}

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  double exponential() { return -std::log(uniform_open()); }
  double normal() { return normal_(engine_); }
  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<std::uint64_t>(mean)(engine_);
  }

  RngStream stream() const { return engine_.stream(); }

 private:
  PhiloxEngine engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace relkac
