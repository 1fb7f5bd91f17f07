#pragma once

#include "gatedist/matrix.hpp"

#include <cstdint>
#include <random>

namespace gatedist {

/// Seeded random source. Gaussian deviates use an explicit Box-Muller
/// transform on top of mt19937_64 so a given seed reproduces the same
/// stream independent of the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform01();

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);

  /// Standard normal deviate.
  double normal();

  /// Complex normal with E|z|^2 = 1.
  Complex complex_normal();

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// R-diagonal phases folded into Q.
Matrix haar_unitary(int n, Rng& rng);
Matrix haar_unitary(int n, std::uint64_t seed);

/// Haar-distributed pure state (equivalently a column of a Haar unitary):
/// normalized complex Gaussian vector.
Vector haar_state(int n, Rng& rng);

/// Random Hermitian matrix with independent N(0,1)-scale entries.
Matrix random_hermitian(int n, Rng& rng);

}  // namespace gatedist
