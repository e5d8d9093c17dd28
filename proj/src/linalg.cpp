#include "fpa/linalg.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "fpa/error.hpp"

namespace fpa::linalg {

namespace {

void require_same_field(const PrimeField& a, const PrimeField& b) {
  if (a != b) {
    throw Error(ErrorKind::ModulusMismatch,
                "modulus mismatch: " + std::to_string(a.p()) + " vs " + std::to_string(b.p()));
  }
}

void require_dims(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::DimensionMismatch, std::string("dimension mismatch in ") + what);
}

}  // namespace

bool is_prime(std::uint32_t n) noexcept {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (p > kMaxPrime || !is_prime(p)) {
    throw Error(ErrorKind::InvalidModulus, "modulus must be a prime in [2, 97], got " + std::to_string(p));
  }
}

Residue PrimeField::inv(Residue a) const {
  if (a % p_ == 0) throw Error(ErrorKind::SingularGenerator, "inverse of zero in F_p");
  return pow(a, p_ - 2);
}

Residue PrimeField::pow(Residue a, std::uint64_t e) const noexcept {
  Residue base = a % p_;
  Residue acc = 1 % p_;
  while (e != 0) {
    if (e & 1U) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1U;
  }
  return acc;
}

Matrix::Matrix(PrimeField field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix Matrix::identity(PrimeField field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

Matrix Matrix::from_rows(PrimeField field, std::size_t cols,
                         const std::vector<std::vector<std::int64_t>>& rows) {
  Matrix m(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require_dims(rows[r].size() == cols, "Matrix::from_rows");
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, field.reduce(rows[r][c]));
  }
  return m;
}

Matrix Matrix::from_vectors(PrimeField field, std::size_t cols, const std::vector<Vector>& rows) {
  Matrix m(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require_dims(rows[r].size() == cols, "Matrix::from_vectors");
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

bool Matrix::is_zero() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](Residue v) { return v == 0; });
}

bool Matrix::is_identity() const noexcept {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if ((*this)(r, c) != (r == c ? 1U : 0U)) return false;
    }
  }
  return true;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_field(a.field(), b.field());
  require_dims(a.cols() == b.rows(), "matrix product");
  const auto p = a.field().p();
  Matrix out(a.field(), a.rows(), b.cols());
  std::vector<std::uint64_t> acc(b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const std::uint64_t aik = a(i, k);
      if (aik == 0) continue;
      const auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) acc[j] += aik * brow[j];
    }
    for (std::size_t j = 0; j < b.cols(); ++j) out.set(i, j, static_cast<Residue>(acc[j] % p));
  }
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_field(a.field(), b.field());
  require_dims(a.rows() == b.rows() && a.cols() == b.cols(), "matrix sum");
  Matrix out(a.field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out.set(i, j, a.field().add(a(i, j), b(i, j)));
  }
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_field(a.field(), b.field());
  require_dims(a.rows() == b.rows() && a.cols() == b.cols(), "matrix difference");
  Matrix out(a.field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out.set(i, j, a.field().sub(a(i, j), b(i, j)));
  }
  return out;
}

Vector operator*(const Matrix& m, std::span<const Residue> v) {
  require_dims(m.cols() == v.size(), "matrix-vector product");
  Vector out(m.rows(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::uint64_t acc = 0;
    const auto row = m.row(i);
    for (std::size_t j = 0; j < v.size(); ++j) acc += static_cast<std::uint64_t>(row[j]) * v[j];
    out[i] = static_cast<Residue>(acc % m.field().p());
  }
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.field(), m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out.set(j, i, m(i, j));
  }
  return out;
}

Matrix power(const Matrix& m, std::uint64_t e) {
  require_dims(m.rows() == m.cols(), "matrix power");
  Matrix acc = Matrix::identity(m.field(), m.rows());
  Matrix base = m;
  while (e != 0) {
    if (e & 1U) acc = acc * base;
    e >>= 1U;
    if (e != 0) base = base * base;
  }
  return acc;
}

Matrix minus_identity(const Matrix& m) {
  require_dims(m.rows() == m.cols(), "minus_identity");
  return m - Matrix::identity(m.field(), m.rows());
}

RrefResult rref(const Matrix& m) {
  const PrimeField& f = m.field();
  Matrix a = m;
  std::vector<std::size_t> pivots;
  std::size_t lead_row = 0;
  auto swap_rows = [&a](std::size_t r1, std::size_t r2) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const Residue t = a(r1, c);
      a.set(r1, c, a(r2, c));
      a.set(r2, c, t);
    }
  };
  for (std::size_t col = 0; col < a.cols() && lead_row < a.rows(); ++col) {
    std::size_t pr = lead_row;
    while (pr < a.rows() && a(pr, col) == 0) ++pr;
    if (pr == a.rows()) continue;
    if (pr != lead_row) swap_rows(pr, lead_row);
    const Residue scale = f.inv(a(lead_row, col));
    for (std::size_t c = col; c < a.cols(); ++c) a.set(lead_row, c, f.mul(a(lead_row, c), scale));
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == lead_row) continue;
      const Residue factor = a(r, col);
      if (factor == 0) continue;
      for (std::size_t c = col; c < a.cols(); ++c) {
        a.set(r, c, f.sub(a(r, c), f.mul(factor, a(lead_row, c))));
      }
    }
    pivots.push_back(col);
    ++lead_row;
  }
  return {std::move(a), pivots.size(), std::move(pivots)};
}

std::size_t rank(const Matrix& m) { return rref(m).rank; }

Matrix inverse(const Matrix& m) {
  require_dims(m.rows() == m.cols(), "inverse");
  const std::size_t n = m.rows();
  Matrix aug(m.field(), n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.set(i, j, m(i, j));
    aug.set(i, n + i, 1);
  }
  const RrefResult r = rref(aug);
  if (r.rank < n || (n > 0 && r.pivots[n - 1] != n - 1)) {
    throw Error(ErrorKind::SingularGenerator, "matrix is singular");
  }
  Matrix out(m.field(), n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.set(i, j, r.reduced(i, n + j));
  }
  return out;
}

namespace {

Matrix top_rows(const Matrix& m, std::size_t count) {
  Matrix out(m.field(), count, m.cols());
  for (std::size_t r = 0; r < count; ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out.set(r, c, m(r, c));
  }
  return out;
}

Matrix stack(const Matrix& a, const Matrix& b) {
  require_same_field(a.field(), b.field());
  require_dims(a.cols() == b.cols(), "stack");
  Matrix out(a.field(), a.rows() + b.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out.set(r, c, a(r, c));
  }
  for (std::size_t r = 0; r < b.rows(); ++r) {
    for (std::size_t c = 0; c < b.cols(); ++c) out.set(a.rows() + r, c, b(r, c));
  }
  return out;
}

}  // namespace

Subspace::Subspace(PrimeField field, std::size_t ambient_dim, const Matrix& generators)
    : basis_(field, 0, ambient_dim) {
  require_same_field(field, generators.field());
  require_dims(generators.cols() == ambient_dim, "Subspace");
  RrefResult r = rref(generators);
  basis_ = top_rows(r.reduced, r.rank);
  pivots_ = std::move(r.pivots);
}

Subspace Subspace::zero(PrimeField field, std::size_t ambient_dim) {
  return Subspace(field, ambient_dim, Matrix(field, 0, ambient_dim));
}

Subspace Subspace::full(PrimeField field, std::size_t ambient_dim) {
  return Subspace(field, ambient_dim, Matrix::identity(field, ambient_dim));
}

Subspace Subspace::span(PrimeField field, std::size_t ambient_dim, const std::vector<Vector>& vectors) {
  return Subspace(field, ambient_dim, Matrix::from_vectors(field, ambient_dim, vectors));
}

Vector Subspace::coordinates(std::span<const Residue> v) const {
  require_dims(v.size() == ambient_dim(), "Subspace::coordinates");
  Vector coords(dim());
  for (std::size_t i = 0; i < dim(); ++i) coords[i] = v[pivots_[i]];
  return coords;
}

bool Subspace::contains_vector(std::span<const Residue> v) const {
  require_dims(v.size() == ambient_dim(), "Subspace::contains_vector");
  const PrimeField& f = field();
  Vector rem(v.begin(), v.end());
  for (std::size_t i = 0; i < dim(); ++i) {
    const Residue c = rem[pivots_[i]];
    if (c == 0) continue;
    const auto row = basis_.row(i);
    for (std::size_t j = 0; j < rem.size(); ++j) rem[j] = f.sub(rem[j], f.mul(c, row[j]));
  }
  return std::all_of(rem.begin(), rem.end(), [](Residue x) { return x == 0; });
}

Subspace kernel(const Matrix& m) {
  const PrimeField& f = m.field();
  const RrefResult r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : r.pivots) is_pivot[c] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols(), 0);
    v[free] = 1;
    for (std::size_t i = 0; i < r.rank; ++i) v[r.pivots[i]] = f.neg(r.reduced(i, free));
    basis.push_back(std::move(v));
  }
  return Subspace::span(f, m.cols(), basis);
}

Matrix annihilator(const Subspace& u) { return kernel(u.basis()).basis(); }

Subspace intersect(const Subspace& u, const Subspace& v) {
  require_same_field(u.field(), v.field());
  require_dims(u.ambient_dim() == v.ambient_dim(), "intersect");
  if (u.dim() == 0 || v.dim() == 0) return Subspace::zero(u.field(), u.ambient_dim());
  // x = c * U lies in v iff annihilator(v) * x = 0.
  const Matrix ann = annihilator(v);
  const Matrix constraint = ann * transpose(u.basis());
  const Subspace coeffs = kernel(constraint);
  return Subspace(u.field(), u.ambient_dim(), coeffs.basis() * u.basis());
}

Subspace sum(const Subspace& u, const Subspace& v) {
  require_same_field(u.field(), v.field());
  require_dims(u.ambient_dim() == v.ambient_dim(), "sum");
  return Subspace(u.field(), u.ambient_dim(), stack(u.basis(), v.basis()));
}

bool contains(const Subspace& u, const Subspace& v) {
  require_same_field(u.field(), v.field());
  require_dims(u.ambient_dim() == v.ambient_dim(), "contains");
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (!u.contains_vector(v.basis().row(i))) return false;
  }
  return true;
}

Subspace image(const Matrix& m, const Subspace& u) {
  require_same_field(m.field(), u.field());
  require_dims(m.cols() == u.ambient_dim(), "image");
  return Subspace(m.field(), m.rows(), u.basis() * transpose(m));
}

Subspace preimage(const Matrix& m, const Subspace& u) {
  require_same_field(m.field(), u.field());
  require_dims(m.rows() == u.ambient_dim(), "preimage");
  return kernel(annihilator(u) * m);
}

QuotientSpace::QuotientSpace(Subspace ambient, Subspace modded)
    : ambient_(std::move(ambient)),
      modded_(std::move(modded)),
      modded_coords_(ambient_.field(), 0, ambient_.dim()) {
  require_same_field(ambient_.field(), modded_.field());
  require_dims(ambient_.ambient_dim() == modded_.ambient_dim(), "QuotientSpace");
  if (!contains(ambient_, modded_)) {
    throw Error(ErrorKind::InvalidQuotient, "quotient: modded subspace is not contained in the ambient");
  }
  std::vector<Vector> coords;
  for (std::size_t i = 0; i < modded_.dim(); ++i) coords.push_back(ambient_.coordinates(modded_.basis().row(i)));
  const Subspace mc = Subspace::span(ambient_.field(), ambient_.dim(), coords);
  modded_coords_ = mc.basis();
  mpivots_ = mc.pivots();
  std::vector<bool> is_pivot(ambient_.dim(), false);
  for (auto c : mpivots_) is_pivot[c] = true;
  for (std::size_t j = 0; j < ambient_.dim(); ++j) {
    if (!is_pivot[j]) free_.push_back(j);
  }
}

Vector QuotientSpace::project(std::span<const Residue> v) const {
  if (!ambient_.contains_vector(v)) {
    throw Error(ErrorKind::InvalidQuotient, "quotient: vector is outside the ambient subspace");
  }
  const PrimeField& f = ambient_.field();
  Vector c = ambient_.coordinates(v);
  for (std::size_t i = 0; i < mpivots_.size(); ++i) {
    const Residue k = c[mpivots_[i]];
    if (k == 0) continue;
    const auto row = modded_coords_.row(i);
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = f.sub(c[j], f.mul(k, row[j]));
  }
  Vector out(free_.size());
  for (std::size_t i = 0; i < free_.size(); ++i) out[i] = c[free_[i]];
  return out;
}

Vector QuotientSpace::lift(std::span<const Residue> coords) const {
  require_dims(coords.size() == free_.size(), "QuotientSpace::lift");
  const PrimeField& f = ambient_.field();
  Vector v(ambient_.ambient_dim(), 0);
  for (std::size_t i = 0; i < free_.size(); ++i) {
    if (coords[i] == 0) continue;
    const auto row = ambient_.basis().row(free_[i]);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f.add(v[j], f.mul(coords[i], row[j]));
  }
  return v;
}

Matrix QuotientSpace::coset_basis() const {
  Matrix out(ambient_.field(), free_.size(), ambient_.ambient_dim());
  for (std::size_t i = 0; i < free_.size(); ++i) {
    const auto row = ambient_.basis().row(free_[i]);
    for (std::size_t j = 0; j < row.size(); ++j) out.set(i, j, row[j]);
  }
  return out;
}

std::string to_string(const Matrix& m) {
  std::ostringstream os;
  os << m;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c != 0) os << ',';
      os << m(r, c);
    }
    if (r + 1 < m.rows()) os << '\n';
  }
  return os;
}

std::ostream& operator<<(std::ostream& os, const Subspace& s) {
  os << "Subspace(dim " << s.dim() << " in F_" << s.field().p() << '^' << s.ambient_dim() << ')';
  if (s.dim() != 0) os << '\n' << s.basis();
  return os;
}

}  // namespace fpa::linalg
