#pragma once

#include <cstdint>

#include "renyi/hermitian.hpp"

namespace renyi {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Counter-based generator: the k-th output is mix64(key + k·0x9E3779B97F4A7C15).
/// Streams for independent samples are derived with Rng::stream(seed, index),
/// so any sample can be regenerated without replaying the others. All
/// conversions are written out here rather than delegated to <random>
/// distributions, whose algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : key_(key) {}
  /// Key mix64(seed ^ mix64(index + 0xD1B54A32D192ED03)).
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();
  /// (x >> 11)·2^-53, in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal by the Box-Muller transform; both variates are used.
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Hermitian matrix with independent standard normal real and imaginary
/// parts (imaginary parts zero for the real field), symmetrized.
Matrix random_hermitian(Rng& rng, int n, Field field = Field::Complex);
/// Haar-like unitary from the QR factorization of a Gaussian matrix.
Matrix random_unitary(Rng& rng, int n, Field field = Field::Complex);
/// U diag(lambda) U* with log-uniform eigenvalues in [1/cond, 1]·scale.
Matrix random_positive_definite(Rng& rng, int n, double cond = 10.0, double scale = 1.0,
                                Field field = Field::Complex);

}  // namespace renyi
