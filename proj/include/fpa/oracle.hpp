#pragma once

// Brute-force baselines. Everything here works on explicit element sets of
// vectors encoded in base p; linalg is used only to canonicalize the answer.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fpa/linalg.hpp"

namespace fpa::oracle {

using linalg::Matrix;
using linalg::PrimeField;
using linalg::Subspace;

struct EnumerationBudget {
  std::uint64_t max_vectors = std::uint64_t{1} << 20;
  std::uint64_t max_subspaces = std::uint64_t{1} << 22;
};

/// p^dim, saturating at UINT64_MAX.
std::uint64_t vector_count(std::uint32_t p, std::size_t dim);
/// Number of subspaces of F_p^dim (sum of Gaussian binomials), saturating.
std::uint64_t subspace_count(std::uint32_t p, std::size_t dim);

/// Vectors fixed by every generator, found by enumerating all of F_p^dim.
/// Throws BudgetExceeded when p^dim > budget.max_vectors.
Subspace brute_fixed(const std::vector<Matrix>& gens, std::size_t dim, PrimeField field,
                     const EnumerationBudget& budget = {});

/// Yields every subspace of F_p^dim once: by dimension, then pivot set in
/// lexicographic order, then free entries counted in base p.
class SubspaceIterator {
 public:
  /// Throws BudgetExceeded when the subspace count exceeds budget.max_subspaces.
  SubspaceIterator(std::size_t dim, PrimeField field, const EnumerationBudget& budget = {});

  std::optional<Subspace> next();

 private:
  bool advance_pivots();
  void reset_fill();
  Subspace current() const;

  PrimeField field_;
  std::size_t dim_;
  std::size_t k_ = 0;
  std::vector<std::size_t> pivots_;
  std::vector<std::pair<std::size_t, std::size_t>> free_cells_;
  std::vector<linalg::Residue> fill_;
  bool done_ = false;
};

/// The largest subspace N of b_image with g(N) = N for every generator, found
/// by testing every subspace of b_image. Also confirms that the invariant
/// subspaces are closed under sum, so the maximum is unique.
/// Throws BudgetExceeded; throws InvariantViolation if sum-closure fails.
Subspace brute_max_invariant(const std::vector<Matrix>& gens, std::size_t dim, PrimeField field,
                             const Subspace& b_image, const EnumerationBudget& budget = {});

}  // namespace fpa::oracle
