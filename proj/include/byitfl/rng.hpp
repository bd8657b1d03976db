#pragma once

#include <cstdint>
#include <random>

#include <gmpxx.h>

#include "byitfl/field.hpp"

namespace byitfl {

// splitmix64; used to derive per-party / per-purpose seeds from a master
// seed so that adversary placement never perturbs honest randomness.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic stream of uniform field elements and real draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed)
      : seed_(seed), gmp_(gmp_randinit_mt), real_(seed) {
    gmp_.seed(static_cast<unsigned long>(seed));
  }

  std::uint64_t seed() const { return seed_; }
  Rng substream(std::uint64_t stream) const {
    return Rng(mix_seed(seed_, stream));
  }

  FieldElement uniform(const Field& f) {
    mpz_class v = gmp_.get_z_range(f.prime());
    return f.from_int(v);
  }

  FieldElement uniform_nonzero(const Field& f) {
    for (;;) {
      FieldElement e = uniform(f);
      if (!e.is_zero()) return e;
    }
  }

  // Uniform in [0, 1).
  double real01() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(real_);
  }

  double uniform_real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(real_);
  }

  double gaussian(double mean, double stddev) {
    return std::normal_distribution<double>(mean, stddev)(real_);
  }

  std::uint64_t uniform_u64(std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(real_);
  }

  std::mt19937_64& engine() { return real_; }

 private:
  std::uint64_t seed_;
  gmp_randclass gmp_;
  std::mt19937_64 real_;
};

}  // namespace byitfl
