#include "fpa/replab.hpp"

#include <algorithm>
#include <limits>

#include "fpa/error.hpp"

namespace fpa::replab {

FiniteRep::FiniteRep(PrimeField field, std::size_t dim, std::vector<Matrix> generators)
    : field_(field), dim_(dim), generators_(std::move(generators)) {
  for (const auto& g : generators_) {
    if (g.rows() != dim_ || g.cols() != dim_ || g.field() != field_) {
      throw Error(ErrorKind::DimensionMismatch, "generator is not a " + std::to_string(dim_) + "x" +
                                                    std::to_string(dim_) + " matrix over F_" +
                                                    std::to_string(field_.p()));
    }
    if (!linalg::power(g, field_.p()).is_identity()) {
      throw Error(ErrorKind::NotUnipotent, "generator does not satisfy g^p = id");
    }
  }
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    for (std::size_t j = i + 1; j < generators_.size(); ++j) {
      if (!(generators_[i] * generators_[j] == generators_[j] * generators_[i])) {
        throw Error(ErrorKind::NonCommuting,
                    "generators " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " do not commute");
      }
    }
  }
}

Subspace fixed_space(const FiniteRep& rep) {
  Subspace acc = Subspace::full(rep.field(), rep.dim());
  for (const auto& g : rep.generators()) acc = intersect(acc, linalg::kernel(linalg::minus_identity(g)));
  return acc;
}

FiltrationReport kernel_filtration(const Matrix& g, std::uint32_t p) {
  if (g.field().p() != p) throw Error(ErrorKind::ModulusMismatch, "matrix is not over F_" + std::to_string(p));
  if (!linalg::power(g, p).is_identity()) throw Error(ErrorKind::NotUnipotent, "g^p != id");
  FiltrationReport report;
  const Matrix n = linalg::minus_identity(g);
  Matrix acc = Matrix::identity(g.field(), g.rows());
  report.dims.push_back(0);
  for (std::uint32_t i = 1; i <= p; ++i) {
    acc = acc * n;
    report.dims.push_back(g.rows() - linalg::rank(acc));
  }
  report.concave = true;
  for (std::size_t i = 0; i + 1 < report.dims.size(); ++i) {
    report.differences.push_back(report.dims[i + 1] - report.dims[i]);
    if (i > 0 && report.differences[i] > report.differences[i - 1]) report.concave = false;
  }
  report.bound_ok = report.dims[1] * p >= report.dims.back();
  return report;
}

std::string BoundCheck::rhs() const {
  std::uint64_t den = 1;
  for (std::size_t i = 0; i < r; ++i) {
    if (den > std::numeric_limits<std::uint64_t>::max() / p) {
      return std::to_string(numerator) + "/" + std::to_string(p) + "^" + std::to_string(r);
    }
    den *= p;
  }
  return std::to_string(numerator) + "/" + std::to_string(den);
}

namespace {

bool scaled_at_least(std::size_t lhs, std::uint32_t p, std::size_t r, std::size_t target) {
  if (lhs >= target) return true;
  if (lhs == 0) return target == 0;
  std::uint64_t acc = lhs;
  for (std::size_t i = 0; i < r; ++i) {
    acc *= p;
    if (acc >= target) return true;
  }
  return false;
}

}  // namespace

BoundCheck fixed_bound_check(const FiniteRep& rep) {
  BoundCheck out;
  out.lhs = fixed_space(rep).dim();
  out.numerator = rep.dim();
  out.p = rep.p();
  out.r = rep.rank();
  out.ok = scaled_at_least(out.lhs, out.p, out.r, out.numerator);
  return out;
}

bool is_invariant(const FiniteRep& rep, const Subspace& u) {
  for (const auto& g : rep.generators()) {
    if (!contains(u, linalg::image(g, u))) return false;
  }
  return true;
}

FiniteRep subquotient_rep(const FiniteRep& rep, const Subspace& upper, const Subspace& lower) {
  if (!contains(upper, lower)) throw Error(ErrorKind::NonInvariant, "subquotient: lower is not inside upper");
  if (!is_invariant(rep, upper) || !is_invariant(rep, lower)) {
    throw Error(ErrorKind::NonInvariant, "subquotient: subspace is not invariant under the generators");
  }
  const linalg::QuotientSpace q(upper, lower);
  const Matrix reps = q.coset_basis();
  std::vector<Matrix> gens;
  for (const auto& g : rep.generators()) {
    Matrix m(rep.field(), q.dim(), q.dim());
    for (std::size_t j = 0; j < q.dim(); ++j) {
      const auto image = g * reps.row(j);
      const auto coords = q.project(image);
      for (std::size_t i = 0; i < q.dim(); ++i) m.set(i, j, coords[i]);
    }
    gens.push_back(std::move(m));
  }
  return FiniteRep(rep.field(), q.dim(), std::move(gens));
}

FiniteRep quotient_rep(const FiniteRep& rep, const Subspace& u) {
  return subquotient_rep(rep, Subspace::full(rep.field(), rep.dim()), u);
}

FiniteRep restrict_rep(const FiniteRep& rep, const Subspace& u) {
  return subquotient_rep(rep, u, Subspace::zero(rep.field(), rep.dim()));
}

bool ProbeReport::ok() const noexcept {
  for (const auto& row : rows) {
    if (!row.bound.ok) return false;
  }
  return true;
}

ProbeReport dichotomy_probe(const FiniteRep& ambient, const std::vector<Subspace>& chain) {
  ProbeReport report;
  const Subspace fixed = fixed_space(ambient);
  for (std::size_t n = 0; n < chain.size(); ++n) {
    const Subspace& v = chain[n];
    if (n > 0) {
      if (!contains(v, chain[n - 1])) {
        throw Error(ErrorKind::NonInvariant, "chain is not nested at step " + std::to_string(n));
      }
      if (v.dim() == chain[n - 1].dim()) report.strict = false;
    }
    if (!is_invariant(ambient, v)) {
      throw Error(ErrorKind::NonInvariant, "chain member " + std::to_string(n) + " is not invariant");
    }
    ProbeRow row;
    row.dim = v.dim();
    const Subspace vg = intersect(fixed, v);
    row.fixed_dim = vg.dim();
    row.quotient_fixed_dim = fixed_space(subquotient_rep(ambient, v, vg)).dim();
    row.bound = fixed_bound_check(restrict_rep(ambient, v));
    report.rows.push_back(row);
  }
  return report;
}

Matrix jordan_block(PrimeField field, std::size_t n) {
  Matrix m = Matrix::identity(field, n);
  for (std::size_t i = 0; i + 1 < n; ++i) m.set(i, i + 1, 1);
  return m;
}

Matrix block_diagonal(const std::vector<Matrix>& blocks) {
  if (blocks.empty()) throw Error(ErrorKind::DimensionMismatch, "block_diagonal needs at least one block");
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.rows();
  Matrix m(blocks.front().field(), n, n);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i) {
      for (std::size_t j = 0; j < b.cols(); ++j) m.set(off + i, off + j, b(i, j));
    }
    off += b.rows();
  }
  return m;
}

Matrix random_invertible(Rng& rng, PrimeField field, std::size_t n) {
  for (;;) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m.set(i, j, static_cast<linalg::Residue>(rng.below(field.p())));
    }
    if (linalg::rank(m) == n) return m;
  }
}

FiniteRep random_rep(Rng& rng, PrimeField field, std::size_t dim, std::size_t r) {
  if (r > kMaxRandomGenerators) {
    throw Error(ErrorKind::MalformedSpec, "at most " + std::to_string(kMaxRandomGenerators) + " generators");
  }
  if (dim == 0) return FiniteRep(field, 0, std::vector<Matrix>(r, Matrix(field, 0, 0)));
  std::vector<std::size_t> sizes;
  for (std::size_t left = dim; left > 0;) {
    const auto s = static_cast<std::size_t>(rng.range(1, static_cast<int>(std::min<std::size_t>(field.p(), left))));
    sizes.push_back(s);
    left -= s;
  }
  const Matrix pm = random_invertible(rng, field, dim);
  const Matrix pinv = linalg::inverse(pm);
  std::vector<Matrix> gens;
  for (std::size_t g = 0; g < r; ++g) {
    std::vector<Matrix> blocks;
    for (const auto s : sizes) {
      const Matrix nil = linalg::minus_identity(jordan_block(field, s));
      Matrix block = Matrix::identity(field, s);
      Matrix pw = nil;
      for (std::size_t j = 1; j < s; ++j) {
        const auto a = static_cast<linalg::Residue>(rng.below(field.p()));
        for (std::size_t i = 0; i < s; ++i) {
          for (std::size_t k = 0; k < s; ++k) block.set(i, k, field.add(block(i, k), field.mul(a, pw(i, k))));
        }
        pw = pw * nil;
      }
      blocks.push_back(std::move(block));
    }
    gens.push_back(pm * block_diagonal(blocks) * pinv);
  }
  return FiniteRep(field, dim, std::move(gens));
}

}  // namespace fpa::replab
