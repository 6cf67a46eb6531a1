#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace escapelab {

// splitmix64 step (Steele, Lea, Flood); used only to key xoshiro state.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Counter-keyed random stream: xoshiro256++ seeded from (seed, stream,
// substream) through splitmix64. Distinct keys give statistically
// independent streams, so trajectory i always sees the same numbers no
// matter how work is split across threads.
class Rng {
public:
  Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0) {
    std::uint64_t k = seed;
    splitmix64_next(k);
    k ^= 0xd1b54a32d192ed03ull * (stream + 1);
    splitmix64_next(k);
    k ^= 0x8cb92ba72f3d8dd7ull * (substream + 1);
    for (auto& word : state_) word = splitmix64_next(k);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0,1), 53-bit mantissa, identical across platforms.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Single fair bit.
  bool next_bit() { return (next_u64() >> 63) != 0; }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t state_[4];
};

// Uniform point of the closed unit disk, by rejection from the square.
inline std::complex<double> sample_unit_disk(Rng& rng) {
  for (;;) {
    const double re = rng.uniform(-1.0, 1.0);
    const double im = rng.uniform(-1.0, 1.0);
    if (re * re + im * im <= 1.0) return {re, im};
  }
}

// Substream tags so that the pipelines never share trajectory streams.
namespace stream_tag {
inline constexpr std::uint64_t survival = 1;
inline constexpr std::uint64_t solenoid = 2;
inline constexpr std::uint64_t induced = 3;
inline constexpr std::uint64_t synthetic = 4;
inline constexpr std::uint64_t max_dev = 5;
inline constexpr std::uint64_t norms = 6;
inline constexpr std::uint64_t base_mass = 7;
inline constexpr std::uint64_t ulam = 8;
inline constexpr std::uint64_t invariant = 9;
}  // namespace stream_tag

}  // namespace escapelab
