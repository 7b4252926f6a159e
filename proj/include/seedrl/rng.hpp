#pragma once

#include <cmath>
#include <cstdint>

namespace seedrl {

// splitmix64 finalizer; also used as a keyed hash for counter-based streams.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t key2(uint64_t a, uint64_t b) { return mix64(a ^ mix64(b)); }
inline uint64_t key3(uint64_t a, uint64_t b, uint64_t c) { return key2(key2(a, b), c); }
inline uint64_t key4(uint64_t a, uint64_t b, uint64_t c, uint64_t d) {
  return key2(key2(a, b), key2(c, d));
}

// Uniform in the open interval (0, 1); never returns 0 or 1. Uses 52 bits
// plus a half-step offset so every value (k + 0.5) * 2^-52 is exact: the
// naive 53-bit form rounds to 1.0 at the top of the range.
inline double u01_from(uint64_t h) {
  return (static_cast<double>(h >> 12) + 0.5) * 0x1.0p-52;
}

// One standard normal variate from a 64-bit key (Box-Muller, cosine branch).
inline double normal_from(uint64_t key) {
  double u1 = u01_from(mix64(key ^ 0xd1b54a32d192ed03ULL));
  double u2 = u01_from(mix64(key ^ 0x8cb92ba72f3d8dd7ULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

// One Exp(1) variate from a 64-bit key.
inline double exp1_from(uint64_t key) {
  return -std::log(u01_from(mix64(key ^ 0x2545f4914f6cdd1dULL)));
}

// Sequential splitmix64 generator. Cheap to copy; fork() derives a
// decorrelated child stream, so a single master seed can fan out
// deterministically over agents / instances / purposes.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double u01() { return u01_from(next_u64()); }

  double normal() {
    double u1 = u01();
    double u2 = u01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  double normal(double mu, double sd) { return mu + sd * normal(); }
  double exp1() { return -std::log(u01()); }
  double uniform(double a, double b) { return a + (b - a) * u01(); }

  // Uniform over {0, …, n−1}; modulo bias is ~n/2^64, negligible here.
  int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<uint64_t>(n)); }

  Rng fork(uint64_t stream) const { return Rng(key2(state_, stream)); }

  // UniformRandomBitGenerator interface for <random> interop.
  using result_type = uint64_t;
  static constexpr uint64_t min() { return 0; }
  static constexpr uint64_t max() { return ~0ULL; }
  uint64_t operator()() { return next_u64(); }

 private:
  uint64_t state_;
};

}  // namespace seedrl
