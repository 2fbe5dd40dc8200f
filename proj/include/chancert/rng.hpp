#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace chancert {

// Deterministic pseudo-random generator: xoshiro256++ (Blackman & Vigna),
// seeded through splitmix64. The integer stream is bit-identical for a given
// seed on any platform; derived doubles are identical on IEEE-754 systems.
// The generator is always passed explicitly, never global.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform01();

  // Standard normal via the Marsaglia polar method (no trig calls).
  double gaussian();

  // Complex standard normal: independent N(0, 1/2) real and imaginary parts,
  // so E|z|^2 = 1.
  std::complex<double> complex_gaussian();

  std::uint64_t seed() const { return seed_; }

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t seed_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace chancert
