#pragma once

#include <cstdint>
#include <limits>

namespace hnw {

// SplitMix64 finalizer (Stafford variant 13). A bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Small counter-based engine used for per-(generation, node) substreams.
// Satisfies UniformRandomBitGenerator so it plugs into <random> distributions.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

// Seed of the substream owned by `node` during `generation` of a run.
constexpr std::uint64_t substream_seed(std::uint64_t run_seed, std::uint64_t generation,
                                       std::uint64_t node) noexcept {
  std::uint64_t h = mix64(run_seed + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ (generation + 0x632be59bd9b4e019ULL));
  return mix64(h ^ (node + 0x8cb92ba72f3d8dd7ULL));
}

}  // namespace hnw
