#pragma once

// Truncated Laurent series over F_p.
//
// A LaurentSeries is known exactly modulo t^prec. Precision is an exponent
// bound, so truncation always discards the high-exponent end. Components of
// a SeriesVector share one precision.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fpa/linalg.hpp"

namespace fpa::laurent {

using linalg::PrimeField;
using linalg::Residue;

/// Exponents in series literals are bounded to keep dense storage sane.
inline constexpr int kMaxExponent = 1 << 20;

class LaurentSeries {
 public:
  static LaurentSeries zero(PrimeField field, int prec);
  /// Series with coefficients[i] at exponent lo + i, truncated mod t^prec and normalized.
  static LaurentSeries from_coefficients(PrimeField field, int lo, std::span<const Residue> coefficients,
                                         int prec);
  static LaurentSeries monomial(PrimeField field, Residue c, int exponent, int prec);

  const PrimeField& field() const noexcept { return field_; }
  int prec() const noexcept { return prec_; }
  bool is_zero() const noexcept { return !valuation_.has_value(); }
  /// Empty for the zero series (valuation +infinity).
  std::optional<int> valuation() const noexcept { return valuation_; }
  /// Coefficients for exponents valuation() .. prec()-1; empty for zero.
  std::span<const Residue> coefficients() const noexcept { return coeffs_; }

  /// Coefficient of t^exponent. Throws InsufficientPrecision when exponent >= prec().
  Residue coeff(int exponent) const;
  /// Same series known only mod t^new_prec; new_prec must not exceed prec().
  LaurentSeries truncated(int new_prec) const;

  friend bool operator==(const LaurentSeries&, const LaurentSeries&) = default;

 private:
  LaurentSeries(PrimeField field, int prec) : field_(field), prec_(prec) {}

  PrimeField field_;
  int prec_;
  std::optional<int> valuation_;
  std::vector<Residue> coeffs_;
};

/// prec of the result is min(a.prec, b.prec).
LaurentSeries add(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries negate(const LaurentSeries& a);
LaurentSeries subtract(const LaurentSeries& a, const LaurentSeries& b);
/// Multiplies by t^k: valuation and precision both move by k.
LaurentSeries t_shift(const LaurentSeries& a, int k);
LaurentSeries scalar_mul(Residue c, const LaurentSeries& a);

inline LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) { return add(a, b); }
inline LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return subtract(a, b); }

/// Grammar:
///   series := term ("+" term)* ("+" "O(t^" int ")")?
///   term   := coeff | coeff "*"? atom | atom
///   atom   := "t" ("^" int)?
/// Whitespace between tokens is ignored. Without an O-term the precision is
/// default_prec. Terms at exponents >= prec are dropped.
LaurentSeries parse_series(std::string_view text, PrimeField field, int default_prec);
/// Canonical form: ascending exponents, no zero terms, trailing "+ O(t^prec)".
std::string format_series(const LaurentSeries& s);

class SeriesVector {
 public:
  /// All components must share p and prec.
  explicit SeriesVector(std::vector<LaurentSeries> components);
  static SeriesVector zero(PrimeField field, std::size_t d, int prec);

  std::size_t d() const noexcept { return components_.size(); }
  int prec() const noexcept { return components_.front().prec(); }
  const PrimeField& field() const noexcept { return components_.front().field(); }
  const LaurentSeries& operator[](std::size_t i) const { return components_.at(i); }
  const std::vector<LaurentSeries>& components() const noexcept { return components_; }
  bool is_zero() const noexcept;
  /// Minimum of component valuations; empty for the zero vector.
  std::optional<int> valuation() const noexcept;
  SeriesVector truncated(int new_prec) const;

  friend bool operator==(const SeriesVector&, const SeriesVector&) = default;

 private:
  std::vector<LaurentSeries> components_;
};

SeriesVector add(const SeriesVector& a, const SeriesVector& b);
SeriesVector subtract(const SeriesVector& a, const SeriesVector& b);
SeriesVector t_shift(const SeriesVector& a, int k);
SeriesVector scalar_mul(Residue c, const SeriesVector& a);
/// "(s_1, ..., s_d)" with each component in canonical form.
std::string format_vector(const SeriesVector& v);

/// Coefficient of t^exponent in component `component` (0-based).
/// Throws InsufficientPrecision when exponent >= v.prec().
Residue coeff_tap(const SeriesVector& v, std::size_t component, int exponent);

/// The quotient t^lo B / t^hi B with B = F_p[[t]]^d. Coordinates run over
/// (component, exponent) with the component major and exponents ascending.
class LatticeWindow {
 public:
  LatticeWindow(int lo, int hi, std::size_t d);

  int lo() const noexcept { return lo_; }
  int hi() const noexcept { return hi_; }
  std::size_t d() const noexcept { return d_; }
  std::size_t width() const noexcept { return static_cast<std::size_t>(hi_ - lo_); }
  std::size_t dim() const noexcept { return d_ * width(); }

  bool contains_exponent(int e) const noexcept { return e >= lo_ && e < hi_; }
  std::size_t index(std::size_t component, int exponent) const noexcept {
    return component * width() + static_cast<std::size_t>(exponent - lo_);
  }
  std::size_t component_of(std::size_t index) const noexcept { return index / width(); }
  int exponent_of(std::size_t index) const noexcept { return lo_ + static_cast<int>(index % width()); }

  friend bool operator==(const LatticeWindow&, const LatticeWindow&) = default;

 private:
  int lo_;
  int hi_;
  std::size_t d_;
};

/// Throws InsufficientPrecision when v.prec() < w.hi(), OutOfWindow when v has
/// a nonzero coefficient below w.lo().
linalg::Vector window_coords(const SeriesVector& v, const LatticeWindow& w);
/// The representative with exponents in [lo, hi), known mod t^hi.
SeriesVector coords_to_vector(std::span<const Residue> coords, const LatticeWindow& w, PrimeField field);

/// Coordinate subspace of the classes supported at exponents >= min_exponent
/// (for min_exponent = 0 this is the image of B in the window).
linalg::Subspace exponent_floor_subspace(const LatticeWindow& w, PrimeField field, int min_exponent);
/// Matrix of multiplication by t^k on window coordinates. Classes moved outside
/// [lo, hi) are dropped; dropping at the top is reduction mod t^hi, dropping at
/// the bottom is the caller's responsibility to rule out.
linalg::Matrix shift_matrix(const LatticeWindow& w, PrimeField field, int k);
/// Restriction from `outer` to the sub-window `inner`: keeps classes supported at
/// exponents >= inner.lo and reduces them mod t^inner.hi.
linalg::Subspace restrict_to_window(const linalg::Subspace& s, const LatticeWindow& outer,
                                    const LatticeWindow& inner);

}  // namespace fpa::laurent
