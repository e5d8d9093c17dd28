#pragma once

// Finite-support F_p-linear operators on F_p((t))^d.
//
// A SparsePerturbation N is a finite sum of rank-one "taps": each reads one
// coefficient of one component and writes a multiple of it at one exponent
// of one component. Automorphisms handled here are g = id + N. Components are
// 0-based in this API; config literals use 1-based components.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fpa/laurent.hpp"
#include "fpa/linalg.hpp"

namespace fpa::sparse {

using laurent::LatticeWindow;
using laurent::SeriesVector;
using linalg::PrimeField;
using linalg::Residue;

struct Coord {
  std::size_t comp;
  int exp;
  friend auto operator<=>(const Coord&, const Coord&) = default;
};

/// u -> coeff * coeff_tap(u, in.comp, in.exp) * t^out.exp * e_{out.comp}
struct TapEntry {
  Coord in;
  Coord out;
  Residue coeff;
  friend bool operator==(const TapEntry&, const TapEntry&) = default;
};

class SparsePerturbation {
 public:
  /// Merges entries with equal (in, out), drops zero coefficients, and sorts by
  /// (out.comp, out.exp, in.comp, in.exp). Throws ShapeMismatch for a component >= d.
  SparsePerturbation(PrimeField field, std::size_t d, std::vector<TapEntry> entries = {});

  const PrimeField& field() const noexcept { return field_; }
  std::size_t d() const noexcept { return d_; }
  const std::vector<TapEntry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }

  /// max(0, -min out.exp); 0 when empty.
  int drop() const noexcept;
  /// max(0, max(in.exp - out.exp)): how far below its input a tap may write.
  int descent() const noexcept;
  /// max - min over all in/out exponents; 0 when empty.
  int span() const noexcept;
  std::optional<int> min_out_exp() const noexcept;
  std::optional<int> max_in_exp() const noexcept;
  std::optional<int> min_in_exp() const noexcept;

  friend bool operator==(const SparsePerturbation&, const SparsePerturbation&) = default;

 private:
  PrimeField field_;
  std::size_t d_;
  std::vector<TapEntry> entries_;
};

/// t^k o N o t^-k: every exponent moves by k.
SparsePerturbation conjugate_by_t(const SparsePerturbation& n, int k);
/// a o b.
SparsePerturbation compose(const SparsePerturbation& a, const SparsePerturbation& b);
SparsePerturbation add(const SparsePerturbation& a, const SparsePerturbation& b);
SparsePerturbation scale(Residue c, const SparsePerturbation& a);
/// n^e for e >= 1.
SparsePerturbation power(const SparsePerturbation& n, unsigned e);

struct NilpotencyTranscript {
  bool nilpotent = false;
  /// entry_counts[i] is the number of entries of N^(i+1), i = 0 .. p-1.
  std::vector<std::size_t> entry_counts;
  /// Smallest m with N^m = 0, when nilpotent within p steps.
  std::optional<unsigned> index;
};

/// N^p = 0 as an exact operator; support is finite so this is a global check.
NilpotencyTranscript power_check_nilpotent(const SparsePerturbation& n);

struct CommutationResult {
  bool ok = true;
  int span = 0;
  /// (j, k) with [N_j, N_k] != 0.
  std::optional<std::pair<int, int>> witness;
  std::vector<int> offsets_checked;
};

/// Checks [N_0, N_delta] = 0 for |delta| <= span(N). Beyond the span all chained
/// products vanish, so this certifies commutation of every pair of t-conjugates.
CommutationResult commutation_range_check(const SparsePerturbation& n);

/// mu(k) = k + min out.exp, so (g_k - id) maps everything into t^mu(k) B.
class ContractionModulus {
 public:
  static ContractionModulus infinite() { return ContractionModulus(std::nullopt); }
  explicit ContractionModulus(std::optional<int> offset) : offset_(offset) {}

  bool is_infinite() const noexcept { return !offset_.has_value(); }
  std::optional<int> offset() const noexcept { return offset_; }
  /// Empty means +infinity.
  std::optional<int> operator()(int k) const noexcept {
    if (!offset_) return std::nullopt;
    return k + *offset_;
  }
  /// Smallest k with mu(k) >= bound; empty for the infinite modulus.
  std::optional<int> first_at_least(int bound) const noexcept {
    if (!offset_) return std::nullopt;
    return bound - *offset_;
  }

 private:
  std::optional<int> offset_;
};

ContractionModulus derive_modulus(const SparsePerturbation& n);

/// g = id + N.
class Automorphism {
 public:
  explicit Automorphism(SparsePerturbation perturbation) : n_(std::move(perturbation)) {}
  static Automorphism identity(PrimeField field, std::size_t d) {
    return Automorphism(SparsePerturbation(field, d));
  }

  const SparsePerturbation& perturbation() const noexcept { return n_; }
  const PrimeField& field() const noexcept { return n_.field(); }
  std::size_t d() const noexcept { return n_.d(); }
  bool is_identity() const noexcept { return n_.empty(); }

  friend bool operator==(const Automorphism&, const Automorphism&) = default;

 private:
  SparsePerturbation n_;
};

Automorphism compose(const Automorphism& g, const Automorphism& h);
Automorphism power(const Automorphism& g, unsigned e);
Automorphism conjugate_by_t(const Automorphism& g, int k);
/// id + sum_{i=1}^{p-1} binom(p-1, i) N^i. Requires N^p = 0 (throws NotOrderP otherwise).
Automorphism inverse(const Automorphism& g);

/// g = id + N with its certification flags; generates an action through t-conjugation.
struct SeedAutomorphism {
  Automorphism g;
  NilpotencyTranscript nilpotency;
  CommutationResult commutation;

  bool nilpotency_checked() const noexcept { return nilpotency.nilpotent; }
  bool commutation_checked() const noexcept { return commutation.ok; }

  /// Runs both checks; throws NotOrderP or NonCommuting on failure.
  static SeedAutomorphism certify(const SparsePerturbation& n);
};

/// A series vector whose components carry separate precisions while a chain
/// of operators is applied; `to_series` reports the common (minimum) precision.
class TrackedVector {
 public:
  explicit TrackedVector(const SeriesVector& v);

  std::size_t d() const noexcept { return comps_.size(); }
  int prec(std::size_t comp) const { return comps_.at(comp).prec; }
  /// v <- g(v). Reads beyond a component's precision lower the precision of
  /// the component written to.
  void apply(const Automorphism& g);
  /// Component `comp` becomes unknown at exponents >= bound.
  void cap_precision(std::size_t comp, int bound);
  SeriesVector to_series(PrimeField field) const;

 private:
  struct Component {
    std::map<int, Residue> coeffs;
    int prec;
  };
  std::vector<Component> comps_;
};

/// g(u), honest about precision: the result is known mod t^P where P <= u.prec().
SeriesVector apply(const Automorphism& g, const SeriesVector& u);

enum class WindowFit {
  Identity,    // acts trivially on t^lo B / t^hi B
  Visible,     // well-defined and nontrivial
  Straddles,   // reads at >= hi and writes below hi: not defined mod t^hi B
  LeaksBelow,  // reads in the window and writes below lo
};

struct WindowFitReport {
  WindowFit fit;
  std::optional<TapEntry> offending;
};

WindowFitReport classify(const SparsePerturbation& n, const LatticeWindow& w);

/// Matrix of g on t^lo B / t^hi B in window coordinates (column convention).
/// Throws WindowTooNarrow naming the offending tap when the map is not well defined.
linalg::Matrix induced_matrix(const Automorphism& g, const LatticeWindow& w);
std::vector<linalg::Matrix> induced_matrices(std::span<const Automorphism> ops, const LatticeWindow& w);

/// "{in: [c, e], out: [c, e], coeff: c}" with 1-based components.
std::string format_entry(const TapEntry& e);

}  // namespace fpa::sparse
