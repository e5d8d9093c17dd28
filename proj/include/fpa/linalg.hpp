#pragma once

// Exact dense linear algebra over a prime field F_p, p <= 97.
//
// Subspaces are stored by their reduced row-echelon basis, which is unique,
// so subspace equality is plain comparison of the stored bases.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fpa::linalg {

using Residue = std::uint32_t;
using Vector = std::vector<Residue>;

inline constexpr std::uint32_t kMaxPrime = 97;

bool is_prime(std::uint32_t n) noexcept;

/// The prime field F_p. Construction validates 2 <= p <= 97 and primality.
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p);

  std::uint32_t p() const noexcept { return p_; }

  Residue reduce(std::int64_t v) const noexcept {
    const auto m = static_cast<std::int64_t>(p_);
    std::int64_t r = v % m;
    return static_cast<Residue>(r < 0 ? r + m : r);
  }
  Residue add(Residue a, Residue b) const noexcept { return (a + b) % p_; }
  Residue sub(Residue a, Residue b) const noexcept { return (a + p_ - b) % p_; }
  Residue neg(Residue a) const noexcept { return (p_ - a) % p_; }
  Residue mul(Residue a, Residue b) const noexcept { return (a * b) % p_; }
  Residue inv(Residue a) const;
  Residue pow(Residue a, std::uint64_t e) const noexcept;

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint32_t p_;
};

class Matrix {
 public:
  Matrix(PrimeField field, std::size_t rows, std::size_t cols);

  static Matrix identity(PrimeField field, std::size_t n);
  /// Rows of arbitrary integers, reduced mod p. All rows must have `cols` entries.
  static Matrix from_rows(PrimeField field, std::size_t cols,
                          const std::vector<std::vector<std::int64_t>>& rows);
  static Matrix from_vectors(PrimeField field, std::size_t cols, const std::vector<Vector>& rows);

  const PrimeField& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Residue operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, Residue v) noexcept { data_[r * cols_ + c] = v % field_.p(); }

  std::span<const Residue> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  Vector row_vector(std::size_t r) const { return {row(r).begin(), row(r).end()}; }

  bool is_zero() const noexcept;
  bool is_identity() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  PrimeField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Residue> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& m, std::span<const Residue> v);

Matrix transpose(const Matrix& m);
Matrix power(const Matrix& m, std::uint64_t e);
Matrix minus_identity(const Matrix& m);
/// Throws SingularGenerator when `m` is not invertible.
Matrix inverse(const Matrix& m);
std::size_t rank(const Matrix& m);

struct RrefResult {
  Matrix reduced;
  std::size_t rank;
  std::vector<std::size_t> pivots;
};

RrefResult rref(const Matrix& m);

class Subspace {
 public:
  /// Canonical span of the rows of `generators`.
  Subspace(PrimeField field, std::size_t ambient_dim, const Matrix& generators);

  static Subspace zero(PrimeField field, std::size_t ambient_dim);
  static Subspace full(PrimeField field, std::size_t ambient_dim);
  static Subspace span(PrimeField field, std::size_t ambient_dim, const std::vector<Vector>& vectors);

  const PrimeField& field() const noexcept { return basis_.field(); }
  std::size_t ambient_dim() const noexcept { return basis_.cols(); }
  std::size_t dim() const noexcept { return basis_.rows(); }
  const Matrix& basis() const noexcept { return basis_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  bool contains_vector(std::span<const Residue> v) const;
  /// Coordinates of `v` against the canonical basis; `v` must lie in the subspace.
  Vector coordinates(std::span<const Residue> v) const;

  friend bool operator==(const Subspace& a, const Subspace& b) { return a.basis_ == b.basis_; }

 private:
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

Subspace kernel(const Matrix& m);
/// Rows span the annihilator of `u`, so that u = kernel(annihilator(u)).
Matrix annihilator(const Subspace& u);
Subspace intersect(const Subspace& u, const Subspace& v);
Subspace sum(const Subspace& u, const Subspace& v);
/// True iff v is a subset of u.
bool contains(const Subspace& u, const Subspace& v);
Subspace image(const Matrix& m, const Subspace& u);
Subspace preimage(const Matrix& m, const Subspace& u);

/// ambient / modded with a fixed coset basis.
class QuotientSpace {
 public:
  /// Throws InvalidQuotient unless modded is a subset of ambient.
  QuotientSpace(Subspace ambient, Subspace modded);

  const Subspace& ambient() const noexcept { return ambient_; }
  const Subspace& modded() const noexcept { return modded_; }
  std::size_t dim() const noexcept { return free_.size(); }

  /// Coset coordinates of a vector of the ambient subspace.
  Vector project(std::span<const Residue> v) const;
  /// The coset representative with these coordinates.
  Vector lift(std::span<const Residue> coords) const;
  /// Rows are the representatives of the coset basis.
  Matrix coset_basis() const;

 private:
  Subspace ambient_;
  Subspace modded_;
  Matrix modded_coords_;             // RREF of modded in ambient-basis coordinates
  std::vector<std::size_t> mpivots_;  // pivots of modded_coords_
  std::vector<std::size_t> free_;     // ambient-basis positions spanning the quotient
};

std::string to_string(const Matrix& m);
std::ostream& operator<<(std::ostream& os, const Matrix& m);
std::ostream& operator<<(std::ostream& os, const Subspace& s);

}  // namespace fpa::linalg
