#include "fpa/oracle.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

#include "fpa/error.hpp"

namespace fpa::oracle {

namespace {

using Code = std::uint64_t;
using linalg::Residue;
using linalg::Vector;

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return b > kSaturated - a ? kSaturated : a + b; }

Code encode(const Vector& v, std::uint32_t p) {
  Code c = 0;
  for (std::size_t i = v.size(); i-- > 0;) c = c * p + v[i];
  return c;
}

Vector decode(Code c, std::size_t dim, std::uint32_t p) {
  Vector v(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    v[i] = static_cast<Residue>(c % p);
    c /= p;
  }
  return v;
}

/// Column convention: out[i] = sum_j m(i, j) v[j].
Vector apply(const Matrix& m, const Vector& v, PrimeField f) {
  Vector out(m.rows(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc += static_cast<std::uint64_t>(m(i, j)) * v[j];
    out[i] = static_cast<Residue>(acc % f.p());
  }
  return out;
}

Vector axpy(const Vector& y, Residue a, const Vector& x, PrimeField f) {
  Vector out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = f.add(y[i], f.mul(a, x[i]));
  return out;
}

/// All F_p-combinations of the given vectors as codes.
std::unordered_set<Code> element_set(const std::vector<Vector>& basis, std::size_t dim, PrimeField f) {
  std::unordered_set<Code> set{encode(Vector(dim, 0), f.p())};
  std::vector<Vector> elems{Vector(dim, 0)};
  for (const auto& b : basis) {
    const std::size_t n = elems.size();
    for (Residue c = 1; c < f.p(); ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        auto v = axpy(elems[i], c, b, f);
        set.insert(encode(v, f.p()));
        elems.push_back(std::move(v));
      }
    }
  }
  return set;
}

void check_gens(const std::vector<Matrix>& gens, std::size_t dim, PrimeField field) {
  for (const auto& g : gens) {
    if (g.rows() != dim || g.cols() != dim || g.field() != field) {
      throw Error(ErrorKind::DimensionMismatch, "oracle: generator shape does not match the space");
    }
  }
}

}  // namespace

std::uint64_t vector_count(std::uint32_t p, std::size_t dim) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < dim; ++i) n = sat_mul(n, p);
  return n;
}

std::uint64_t subspace_count(std::uint32_t p, std::size_t dim) {
  // Gaussian binomials by the q-Pascal rule [n,k] = [n-1,k-1] + q^k [n-1,k].
  std::vector<std::uint64_t> row{1};
  for (std::size_t n = 1; n <= dim; ++n) {
    std::vector<std::uint64_t> next(n + 1, 0);
    next[0] = 1;
    next[n] = 1;
    for (std::size_t k = 1; k < n; ++k) next[k] = sat_add(row[k - 1], sat_mul(vector_count(p, k), row[k]));
    row = std::move(next);
  }
  std::uint64_t total = 0;
  for (const auto c : row) total = sat_add(total, c);
  return total;
}

Subspace brute_fixed(const std::vector<Matrix>& gens, std::size_t dim, PrimeField field,
                     const EnumerationBudget& budget) {
  check_gens(gens, dim, field);
  const std::uint64_t total = vector_count(field.p(), dim);
  if (total > budget.max_vectors) {
    throw Error(ErrorKind::BudgetExceeded, "brute_fixed: " + std::to_string(field.p()) + "^" + std::to_string(dim) +
                                               " vectors exceed the budget");
  }
  std::vector<Vector> fixed;
  for (Code c = 0; c < total; ++c) {
    const Vector v = decode(c, dim, field.p());
    bool ok = true;
    for (const auto& g : gens) {
      if (apply(g, v, field) != v) {
        ok = false;
        break;
      }
    }
    if (ok) fixed.push_back(v);
  }
  Subspace span = Subspace::span(field, dim, fixed);
  if (vector_count(field.p(), span.dim()) != fixed.size()) {
    throw Error(ErrorKind::InvariantViolation, "brute_fixed: fixed set is not a subspace");
  }
  return span;
}

SubspaceIterator::SubspaceIterator(std::size_t dim, PrimeField field, const EnumerationBudget& budget)
    : field_(field), dim_(dim) {
  if (subspace_count(field.p(), dim) > budget.max_subspaces) {
    throw Error(ErrorKind::BudgetExceeded, "enumerate_subspaces: too many subspaces of F_" +
                                               std::to_string(field.p()) + "^" + std::to_string(dim));
  }
  reset_fill();
}

void SubspaceIterator::reset_fill() {
  free_cells_.clear();
  for (std::size_t i = 0; i < pivots_.size(); ++i) {
    std::size_t next_pivot = i + 1;
    for (std::size_t c = pivots_[i] + 1; c < dim_; ++c) {
      while (next_pivot < pivots_.size() && pivots_[next_pivot] < c) ++next_pivot;
      if (next_pivot < pivots_.size() && pivots_[next_pivot] == c) continue;
      free_cells_.emplace_back(i, c);
    }
  }
  fill_.assign(free_cells_.size(), 0);
}

bool SubspaceIterator::advance_pivots() {
  // Next k-subset of {0..dim-1} in lexicographic order; then move to k+1.
  const std::size_t k = pivots_.size();
  for (std::size_t i = k; i-- > 0;) {
    if (pivots_[i] < dim_ - (k - i)) {
      ++pivots_[i];
      for (std::size_t j = i + 1; j < k; ++j) pivots_[j] = pivots_[j - 1] + 1;
      return true;
    }
  }
  if (k == dim_) return false;
  pivots_.resize(k + 1);
  for (std::size_t j = 0; j <= k; ++j) pivots_[j] = j;
  return true;
}

Subspace SubspaceIterator::current() const {
  Matrix m(field_, pivots_.size(), dim_);
  for (std::size_t i = 0; i < pivots_.size(); ++i) m.set(i, pivots_[i], 1);
  for (std::size_t f = 0; f < free_cells_.size(); ++f) m.set(free_cells_[f].first, free_cells_[f].second, fill_[f]);
  return Subspace(field_, dim_, m);
}

std::optional<Subspace> SubspaceIterator::next() {
  if (done_) return std::nullopt;
  Subspace out = current();
  std::size_t i = 0;
  for (; i < fill_.size(); ++i) {
    if (++fill_[i] < field_.p()) break;
    fill_[i] = 0;
  }
  if (i == fill_.size()) {
    if (advance_pivots()) {
      reset_fill();
    } else {
      done_ = true;
    }
  }
  return out;
}

Subspace brute_max_invariant(const std::vector<Matrix>& gens, std::size_t dim, PrimeField field,
                             const Subspace& b_image, const EnumerationBudget& budget) {
  check_gens(gens, dim, field);
  if (b_image.ambient_dim() != dim) throw Error(ErrorKind::DimensionMismatch, "oracle: b_image ambient mismatch");
  const std::size_t kb = b_image.dim();
  if (vector_count(field.p(), kb) > budget.max_vectors) {
    throw Error(ErrorKind::BudgetExceeded, "brute_max_invariant: b_image has too many vectors");
  }
  std::vector<Vector> b_rows;
  for (std::size_t i = 0; i < kb; ++i) b_rows.push_back(b_image.basis().row_vector(i));

  std::unordered_set<Code> total_set{encode(Vector(dim, 0), field.p())};
  std::vector<Vector> total_gens;
  std::size_t best_dim = 0;

  SubspaceIterator it(kb, field, budget);
  while (auto local = it.next()) {
    std::vector<Vector> basis;
    for (std::size_t r = 0; r < local->dim(); ++r) {
      Vector v(dim, 0);
      for (std::size_t j = 0; j < kb; ++j) {
        const Residue c = local->basis()(r, j);
        if (c != 0) v = axpy(v, c, b_rows[j], field);
      }
      basis.push_back(std::move(v));
    }
    const auto elems = element_set(basis, dim, field);
    bool invariant = true;
    for (const auto& g : gens) {
      for (const auto& v : basis) {
        if (elems.count(encode(apply(g, v, field), field.p())) == 0) {
          invariant = false;
          break;
        }
      }
      if (!invariant) break;
    }
    if (!invariant) continue;
    best_dim = std::max(best_dim, basis.size());
    for (const auto& v : basis) {
      if (total_set.count(encode(v, field.p())) != 0) continue;
      std::vector<Vector> current;
      for (const auto code : total_set) current.push_back(decode(code, dim, field.p()));
      for (Residue c = 1; c < field.p(); ++c) {
        for (const auto& s : current) total_set.insert(encode(axpy(s, c, v, field), field.p()));
      }
      total_gens.push_back(v);
    }
  }

  if (total_set.size() != vector_count(field.p(), best_dim)) {
    throw Error(ErrorKind::InvariantViolation, "brute_max_invariant: invariant subspaces are not closed under sum");
  }
  for (const auto code : total_set) {
    const Vector v = decode(code, dim, field.p());
    for (const auto& g : gens) {
      if (total_set.count(encode(apply(g, v, field), field.p())) == 0) {
        throw Error(ErrorKind::InvariantViolation, "brute_max_invariant: sum of invariant subspaces is not invariant");
      }
    }
  }
  return Subspace::span(field, dim, total_gens);
}

}  // namespace fpa::oracle
