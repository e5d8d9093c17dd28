#pragma once

// Deterministic sampling helpers. Draws use only the raw mt19937_64 stream so
// that reports seeded the same way are identical across standard libraries.

#include <cstdint>
#include <random>

#include "fpa/laurent.hpp"

namespace fpa {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform-ish in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  /// In [lo, hi].
  int range(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  bool coin() { return (engine_() & 1U) != 0; }

 private:
  std::mt19937_64 engine_;
};

/// Random series with terms at exponents in [lo, prec).
laurent::LaurentSeries random_series(Rng& rng, linalg::PrimeField field, int lo, int prec);
laurent::SeriesVector random_vector(Rng& rng, linalg::PrimeField field, std::size_t d, int lo, int prec);

}  // namespace fpa
