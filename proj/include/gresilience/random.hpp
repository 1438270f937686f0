#pragma once

#include <cstdint>
#include <random>

namespace gresilience {

// Seeded uniform stream. Built on mt19937_64, whose output sequence is fixed
// by the standard; the conversions below avoid std:: distributions, whose
// algorithms are implementation-defined, so streams replay bit-for-bit on any
// platform.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    ++draws_;
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi]; returns exactly lo when lo == hi.
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Exponential with the given rate (events per unit time).
  double exponential(double rate);

  // Uniform index in [0, n).
  std::size_t index(std::size_t n);

  std::uint64_t draws() const { return draws_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

// Independent sub-stream seed for a given purpose (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace gresilience
