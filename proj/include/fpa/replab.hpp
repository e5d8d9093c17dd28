#pragma once

// Representations of elementary abelian p-groups on finite F_p-spaces, given
// by commuting generator matrices of order dividing p (column convention).

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fpa/linalg.hpp"
#include "fpa/random.hpp"

namespace fpa::replab {

using linalg::Matrix;
using linalg::PrimeField;
using linalg::Subspace;

inline constexpr std::size_t kMaxRandomGenerators = 6;

class FiniteRep {
 public:
  /// Throws DimensionMismatch for non-square or mis-sized generators,
  /// NotUnipotent if some g^p != id, NonCommuting if two generators disagree.
  FiniteRep(PrimeField field, std::size_t dim, std::vector<Matrix> generators);

  const PrimeField& field() const noexcept { return field_; }
  std::uint32_t p() const noexcept { return field_.p(); }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return generators_.size(); }
  const std::vector<Matrix>& generators() const noexcept { return generators_; }

 private:
  PrimeField field_;
  std::size_t dim_;
  std::vector<Matrix> generators_;
};

/// V^G as the intersection of the kernels of g_i - id.
Subspace fixed_space(const FiniteRep& rep);

struct FiltrationReport {
  /// dims[i] = dim ker (g - id)^i, i = 0 .. p.
  std::vector<std::size_t> dims;
  std::vector<std::size_t> differences;
  bool concave = false;
  /// d(1) * p >= d(p).
  bool bound_ok = false;
};

/// Throws NotUnipotent when g^p != id.
FiltrationReport kernel_filtration(const Matrix& g, std::uint32_t p);

struct BoundCheck {
  std::size_t lhs = 0;
  std::size_t numerator = 0;
  std::uint32_t p = 0;
  std::size_t r = 0;
  bool ok = false;

  /// "V_dim/p^r" with the power expanded when it fits in 64 bits.
  std::string rhs() const;
};

/// dim V^G >= V_dim / p^r, decided without forming p^r.
BoundCheck fixed_bound_check(const FiniteRep& rep);

/// True iff g(u) is contained in u for every generator.
bool is_invariant(const FiniteRep& rep, const Subspace& u);

/// The representation on upper / lower in the coset basis of QuotientSpace.
/// Both subspaces must be invariant with lower inside upper (NonInvariant otherwise).
FiniteRep subquotient_rep(const FiniteRep& rep, const Subspace& upper, const Subspace& lower);
FiniteRep quotient_rep(const FiniteRep& rep, const Subspace& u);
/// The representation on u in the coordinates of its canonical basis.
FiniteRep restrict_rep(const FiniteRep& rep, const Subspace& u);

struct ProbeRow {
  std::size_t dim = 0;
  std::size_t fixed_dim = 0;
  /// dim (V_n / V_n^G)^G.
  std::size_t quotient_fixed_dim = 0;
  BoundCheck bound;
};

struct ProbeReport {
  std::vector<ProbeRow> rows;
  bool strict = true;
  bool ok() const noexcept;
};

/// Rows for the nested invariant subspaces V_0 ⊆ V_1 ⊆ ... of the ambient rep.
/// Throws NonInvariant if the chain is not nested or some V_n is not invariant.
ProbeReport dichotomy_probe(const FiniteRep& ambient, const std::vector<Subspace>& chain);

/// Unipotent Jordan block of size n: ones on the diagonal and superdiagonal.
Matrix jordan_block(PrimeField field, std::size_t n);
Matrix block_diagonal(const std::vector<Matrix>& blocks);

/// r commuting generators of order dividing p on F_p^dim: on random blocks of
/// size <= p each generator is a random polynomial id + sum a_j N^j in the
/// block's nilpotent part, and all are conjugated by one random invertible P.
/// Throws MalformedSpec if r exceeds kMaxRandomGenerators.
FiniteRep random_rep(Rng& rng, PrimeField field, std::size_t dim, std::size_t r);
Matrix random_invertible(Rng& rng, PrimeField field, std::size_t n);

}  // namespace fpa::replab
