#pragma once

#include <cstdint>
#include <cmath>

#include "ssa/error.hpp"

namespace ssa {

// Identifier recorded alongside any randomized output so runs can be
// reproduced bit-for-bit across platforms.
inline constexpr const char* kRngAlgorithm = "xoshiro256ss/boxmuller/marsaglia-tsang";

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256** seeded through splitmix64, with explicitly coded normal, gamma
// and Student-t variates so the streams do not depend on the standard
// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  // Derives an independent stream; used to keep parallel batches
  // deterministic regardless of scheduling.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t sm = seed;
    splitmix64(sm);
    return Rng(splitmix64(sm) + 0x9e3779b97f4a7c15ULL * (index + 1));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on (0, 1).
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Marsaglia-Tsang; valid for shape >= 1 which covers every df used here.
  double gamma(double shape) {
    if (shape < 1.0) throw Error(ErrorCode::domain, "gamma shape must be >= 1");
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Student-t scaled to unit variance; requires df > 2.
  double student_t_unit(double df) {
    if (df <= 2.0)
      throw Error(ErrorCode::domain, "t variates need df > 2 for finite variance");
    const double chi2 = 2.0 * gamma(df / 2.0);
    const double t = normal() / std::sqrt(chi2 / df);
    return t * std::sqrt((df - 2.0) / df);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ssa
