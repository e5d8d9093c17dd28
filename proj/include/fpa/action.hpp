#pragma once

// Equivariant actions phi: F_p((t)) -> Aut(F_p((t))^d) generated by one seed.
//
// With g = phi(1) = id + N, equivariance forces phi(t^k) = g_k := t^k g t^-k,
// and additivity gives phi(sum c_k t^k) = prod_k g_k^{c_k}. The product is
// finite on any window because (g_k - id) lands in t^mu(k) B with mu(k) -> oo.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fpa/laurent.hpp"
#include "fpa/linalg.hpp"
#include "fpa/random.hpp"
#include "fpa/sparse.hpp"

namespace fpa::action {

using laurent::LatticeWindow;
using laurent::LaurentSeries;
using laurent::SeriesVector;
using linalg::PrimeField;
using linalg::Residue;

inline constexpr std::size_t kMaxDimension = 16;

struct ActionSpec {
  PrimeField field;
  std::size_t d;
  sparse::SparsePerturbation seed;
  std::string label;
  std::string description;
};

class Action {
 public:
  const ActionSpec& spec() const noexcept { return spec_; }
  const PrimeField& field() const noexcept { return spec_.field; }
  std::size_t d() const noexcept { return spec_.d; }
  const sparse::SeedAutomorphism& seed() const noexcept { return seed_; }
  const sparse::ContractionModulus& modulus() const noexcept { return modulus_; }
  /// max(0, -min out exponent of the seed); lower window margin.
  int drop_bound() const noexcept { return spec_.seed.drop(); }
  /// Largest in - out exponent gap of the seed; upper window margin.
  int descent() const noexcept { return spec_.seed.descent(); }
  bool is_trivial() const noexcept { return spec_.seed.empty(); }

  /// g_k = t^k g t^-k = phi(t^k).
  sparse::Automorphism generator(int k) const { return sparse::conjugate_by_t(seed_.g, k); }

 private:
  friend Action build_action(ActionSpec spec);
  Action(ActionSpec spec, sparse::SeedAutomorphism seed, sparse::ContractionModulus modulus)
      : spec_(std::move(spec)), seed_(std::move(seed)), modulus_(modulus) {}

  ActionSpec spec_;
  sparse::SeedAutomorphism seed_;
  sparse::ContractionModulus modulus_;
};

/// Certifies g^p = id, pairwise commutation of all t-conjugates, and the
/// contraction modulus. Throws MalformedSpec, NotOrderP or NonCommuting.
Action build_action(ActionSpec spec);

/// phi(x) as the ordered product of g_k^{c_k}, ascending in k.
class PhiOperator {
 public:
  PhiOperator(const Action& action, std::vector<std::pair<int, Residue>> factors)
      : action_(&action), factors_(std::move(factors)) {}

  const std::vector<std::pair<int, Residue>>& factors() const noexcept { return factors_; }
  /// The product expanded into a single id + N.
  sparse::Automorphism expanded() const;
  /// Product of the induced matrices of the factors on `w`.
  linalg::Matrix window_matrix(const LatticeWindow& w) const;

 private:
  const Action* action_;
  std::vector<std::pair<int, Residue>> factors_;
};

/// The factors of phi(x) that are visible modulo t^target.hi(). Throws
/// InsufficientPrecision when terms of x beyond x.prec() could still act there.
PhiOperator phi(const Action& a, const LaurentSeries& x, const LatticeWindow& target);

/// phi(x)(u), exact. The result is known mod t^P with P <= u.prec(): P drops
/// below u.prec() only where a tap reads coefficients that x or u do not determine.
SeriesVector apply_phi(const Action& a, const LaurentSeries& x, const SeriesVector& u);

struct EquivarianceSample {
  LaurentSeries x;
  SeriesVector u;
};

struct EquivarianceFailure {
  std::size_t index;
  std::string lhs;
  std::string rhs;
};

struct EquivarianceReport {
  std::size_t samples = 0;
  /// Precision at which each sample's two sides were compared.
  std::vector<int> compared_precisions;
  std::vector<EquivarianceFailure> failures;
  bool ok() const noexcept { return failures.empty(); }
};

/// phi(t x)(u) == t phi(x)(t^-1 u), evaluated independently on both sides.
EquivarianceReport equivariance_check(const Action& a, std::span<const EquivarianceSample> samples);

struct WindowGenerator {
  int k;
  linalg::Matrix matrix;
};

struct GeneratorSet {
  LatticeWindow window;
  std::vector<WindowGenerator> generators;
  /// Exponents k whose g_k straddles the top of the window and is left out.
  std::vector<int> excluded;

  std::vector<linalg::Matrix> matrices() const;
};

/// Induced matrices of g_k, k = -ell ... K-1 (K the first k with mu(k) >= hi),
/// skipping g_k that act trivially on the window. Throws WindowTooNarrow if
/// some g_k writes below lo.
GeneratorSet generator_matrices(const Action& a, int ell, const LatticeWindow& w);
/// Every well-defined, nontrivial g_k on the window (any k); ill-defined ones
/// at either end are listed in `excluded`.
GeneratorSet window_generators(const Action& a, const LatticeWindow& w);

/// A random certified action: 1..max_entries taps with exponents in
/// [-exp_radius, exp_radius], resampled until the seed passes certification.
Action random_action(Rng& rng, PrimeField field, std::size_t d, std::size_t max_entries, int exp_radius);

}  // namespace fpa::action
