#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace bipnav {

inline std::uint64_t splitmix64_next(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Derive an independent stream seed from (seed, tag). Used to key per-episode
// and per-purpose RNG streams off one master seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t s = seed ^ (0xa0761d6478bd642full + tag * 0xe7037ed1a0b428dbull);
  return splitmix64_next(s);
}

// xoshiro256** with hand-rolled uniform/normal. std:: distributions are
// implementation-defined, so they cannot back the bit-reproducibility
// guarantees; everything random in this codebase goes through this class.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : root_(seed) {
    std::uint64_t s = seed;
    for (auto& w : s_) w = splitmix64_next(s);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // [0, 1), 53-bit resolution
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Box-Muller, two draws per call, no cached state
  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
  }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Child stream keyed off the root seed; independent of how many values
  // have been drawn from this stream.
  Rng fork(std::uint64_t tag) const { return Rng(derive_seed(root_, tag)); }

  std::array<std::uint64_t, 4> state() const { return s_; }
  std::uint64_t root_seed() const { return root_; }
  void set_state(const std::array<std::uint64_t, 4>& s, std::uint64_t root) {
    s_ = s;
    root_ = root;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> s_{};
  std::uint64_t root_ = 0;
};

}  // namespace bipnav
