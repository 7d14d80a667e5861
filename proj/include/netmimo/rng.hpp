#pragma once
// Deterministic random number generation. Gaussian samples come from an
// in-repo Box-Muller transform rather than std::normal_distribution because
// the standard leaves that algorithm unspecified and reruns must be
// byte-identical. Substreams are derived by hashing (seed, index) so drops
// and Monte-Carlo blocks can be evaluated in any order or in parallel
// without changing results.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace netmimo {

// splitmix64 finalizer; good avalanche for cheap stream derivation.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t base, uint64_t index) {
  return mix64(base ^ mix64(index + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1), 53 bits of precision.
  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
  int uniform_int(int n) {
    uint64_t un = uint64_t(n);
    uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    uint64_t r;
    do {
      r = eng_();
    } while (r >= limit);
    return int(r % un);
  }

  // Standard normal via Box-Muller; the paired sample is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // 1 - uniform() lies in (0, 1], keeping the log argument positive.
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace netmimo
