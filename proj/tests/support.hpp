#pragma once

// Shared helpers for the test binaries.

#include <cstdint>
#include <vector>

#include "fpa/linalg.hpp"
#include "fpa/random.hpp"

namespace fpa::testing {

using linalg::Matrix;
using linalg::PrimeField;
using linalg::Residue;
using linalg::Subspace;
using linalg::Vector;

inline Matrix random_matrix(Rng& rng, PrimeField f, std::size_t rows, std::size_t cols) {
  Matrix m(f, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, static_cast<Residue>(rng.below(f.p())));
  }
  return m;
}

/// Random matrix of rank at most r (a product of n x r and r x n pieces).
inline Matrix random_low_rank(Rng& rng, PrimeField f, std::size_t rows, std::size_t cols, std::size_t r) {
  return random_matrix(rng, f, rows, r) * random_matrix(rng, f, r, cols);
}

inline std::vector<Vector> all_vectors(PrimeField f, std::size_t dim) {
  std::vector<Vector> out{Vector(dim, 0)};
  for (std::size_t i = 0; i < dim; ++i) {
    const std::size_t n = out.size();
    for (Residue c = 1; c < f.p(); ++c) {
      for (std::size_t j = 0; j < n; ++j) {
        Vector v = out[j];
        v[i] = c;
        out.push_back(std::move(v));
      }
    }
  }
  return out;
}

/// Column-convention product computed entrywise.
inline Vector mat_vec(const Matrix& m, const Vector& v) {
  Vector out(m.rows(), 0);
  const auto& f = m.field();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Residue acc = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc = f.add(acc, f.mul(m(i, j), v[j]));
    out[i] = acc;
  }
  return out;
}

/// Number of vectors of F_p^dim lying in s, counted by enumeration.
inline std::size_t count_members(const Subspace& s) {
  std::size_t n = 0;
  for (const auto& v : all_vectors(s.field(), s.ambient_dim())) n += s.contains_vector(v) ? 1 : 0;
  return n;
}

inline std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace fpa::testing
