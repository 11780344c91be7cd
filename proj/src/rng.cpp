#include "relkac/rng.hpp"

namespace relkac {

namespace {

// Full 64 x 64 -> 128-bit product as (hi, lo), from 32-bit halves.
std::array<std::uint64_t, 2> mulhilo(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t a_lo = a & 0xFFFFFFFFULL, a_hi = a >> 32;
  const std::uint64_t b_lo = b & 0xFFFFFFFFULL, b_hi = b >> 32;
  const std::uint64_t ll = a_lo * b_lo;
  const std::uint64_t lh = a_lo * b_hi;
  const std::uint64_t hl = a_hi * b_lo;
  const std::uint64_t hh = a_hi * b_hi;
  const std::uint64_t middle = (ll >> 32) + (lh & 0xFFFFFFFFULL) + (hl & 0xFFFFFFFFULL);
  const std::uint64_t hi = hh + (lh >> 32) + (hl >> 32) + (middle >> 32);
  const std::uint64_t lo = (middle << 32) | (ll & 0xFFFFFFFFULL);
  return {hi, lo};
}

}  // namespace

std::array<std::uint64_t, 2> philox2x64(std::array<std::uint64_t, 2> counter,
                                        std::uint64_t key) {
  constexpr std::uint64_t kMultiplier = 0xD2B74407B1CE6E93ULL;
  constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ULL;
  for (int round = 0; round < 10; ++round) {
    const auto [hi, lo] = mulhilo(kMultiplier, counter[0]);
    counter = {hi ^ key ^ counter[1], lo};
    key += kWeyl;
  }
  return counter;
}

}  // namespace relkac
