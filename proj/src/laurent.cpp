#include "fpa/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <sstream>

#include "fpa/error.hpp"

namespace fpa::laurent {

namespace {

void require_same_field(const PrimeField& a, const PrimeField& b) {
  if (a != b) {
    throw Error(ErrorKind::ModulusMismatch,
                "modulus mismatch: " + std::to_string(a.p()) + " vs " + std::to_string(b.p()));
  }
}

}  // namespace

LaurentSeries LaurentSeries::zero(PrimeField field, int prec) { return LaurentSeries(field, prec); }

LaurentSeries LaurentSeries::from_coefficients(PrimeField field, int lo, std::span<const Residue> coefficients,
                                               int prec) {
  LaurentSeries s(field, prec);
  std::size_t first = 0;
  // Skip leading zeros and anything at or above prec.
  while (first < coefficients.size() && coefficients[first] % field.p() == 0) ++first;
  if (first == coefficients.size()) return s;
  const int val = lo + static_cast<int>(first);
  if (val >= prec) return s;
  s.valuation_ = val;
  s.coeffs_.assign(static_cast<std::size_t>(prec - val), 0);
  for (std::size_t i = first; i < coefficients.size(); ++i) {
    const int e = lo + static_cast<int>(i);
    if (e >= prec) break;
    s.coeffs_[static_cast<std::size_t>(e - val)] = coefficients[i] % field.p();
  }
  return s;
}

LaurentSeries LaurentSeries::monomial(PrimeField field, Residue c, int exponent, int prec) {
  const Residue coeffs[1] = {c};
  return from_coefficients(field, exponent, coeffs, prec);
}

Residue LaurentSeries::coeff(int exponent) const {
  if (exponent >= prec_) {
    throw Error(ErrorKind::InsufficientPrecision, "coefficient of t^" + std::to_string(exponent) +
                                                      " requested from a series known mod t^" +
                                                      std::to_string(prec_));
  }
  if (!valuation_ || exponent < *valuation_) return 0;
  return coeffs_[static_cast<std::size_t>(exponent - *valuation_)];
}

LaurentSeries LaurentSeries::truncated(int new_prec) const {
  if (new_prec > prec_) {
    throw Error(ErrorKind::InsufficientPrecision, "cannot raise precision from " + std::to_string(prec_) +
                                                      " to " + std::to_string(new_prec));
  }
  if (!valuation_) return zero(field_, new_prec);
  return from_coefficients(field_, *valuation_, coeffs_, new_prec);
}

LaurentSeries add(const LaurentSeries& a, const LaurentSeries& b) {
  require_same_field(a.field(), b.field());
  const int prec = std::min(a.prec(), b.prec());
  if (a.is_zero()) return b.truncated(prec);
  if (b.is_zero()) return a.truncated(prec);
  const int lo = std::min(*a.valuation(), *b.valuation());
  if (lo >= prec) return LaurentSeries::zero(a.field(), prec);
  std::vector<Residue> c(static_cast<std::size_t>(prec - lo), 0);
  const PrimeField& f = a.field();
  for (int e = lo; e < prec; ++e) c[static_cast<std::size_t>(e - lo)] = f.add(a.coeff(e), b.coeff(e));
  return LaurentSeries::from_coefficients(f, lo, c, prec);
}

LaurentSeries negate(const LaurentSeries& a) { return scalar_mul(a.field().p() - 1, a); }

LaurentSeries subtract(const LaurentSeries& a, const LaurentSeries& b) { return add(a, negate(b)); }

LaurentSeries t_shift(const LaurentSeries& a, int k) {
  if (a.is_zero()) return LaurentSeries::zero(a.field(), a.prec() + k);
  return LaurentSeries::from_coefficients(a.field(), *a.valuation() + k, a.coefficients(), a.prec() + k);
}

LaurentSeries scalar_mul(Residue c, const LaurentSeries& a) {
  if (a.is_zero()) return a;
  std::vector<Residue> out(a.coefficients().begin(), a.coefficients().end());
  for (auto& v : out) v = a.field().mul(v, c % a.field().p());
  return LaurentSeries::from_coefficients(a.field(), *a.valuation(), out, a.prec());
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class SeriesParser {
 public:
  SeriesParser(std::string_view text, PrimeField field) : text_(text), field_(field) {}

  LaurentSeries parse(int default_prec) {
    std::map<int, Residue> terms;
    std::optional<int> prec;
    parse_term(terms);
    while (true) {
      skip_ws();
      if (at_end()) break;
      expect('+');
      skip_ws();
      if (peek() == 'O') {
        prec = parse_big_o();
        skip_ws();
        if (!at_end()) fail("unexpected input after O-term");
        break;
      }
      parse_term(terms);
    }
    const int p = prec.value_or(default_prec);
    LaurentSeries s = LaurentSeries::zero(field_, p);
    for (const auto& [e, c] : terms) {
      if (e >= p || c == 0) continue;
      s = add(s, LaurentSeries::monomial(field_, c, e, p));
    }
    return s;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(pos_, message); }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool is_digit() const { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }

  Residue parse_coefficient() {
    Residue acc = 0;
    while (is_digit()) {
      acc = field_.reduce(static_cast<std::int64_t>(acc) * 10 + (peek() - '0'));
      ++pos_;
    }
    if (peek() == '.' || peek() == 'e' || peek() == 'E') fail("coefficient must be an integer");
    return acc;
  }

  int parse_int() {
    skip_ws();
    bool negative = false;
    if (peek() == '+' || peek() == '-') {
      negative = peek() == '-';
      ++pos_;
      skip_ws();
    }
    if (!is_digit()) fail("expected integer");
    const std::size_t start = pos_;
    std::int64_t acc = 0;
    while (is_digit()) {
      acc = acc * 10 + (peek() - '0');
      if (acc > kMaxExponent) {
        pos_ = start;
        fail("exponent overflow");
      }
      ++pos_;
    }
    return static_cast<int>(negative ? -acc : acc);
  }

  int parse_atom() {
    skip_ws();
    if (peek() != 't') fail("expected 't'");
    ++pos_;
    skip_ws();
    if (peek() != '^') return 1;
    ++pos_;
    return parse_int();
  }

  void parse_term(std::map<int, Residue>& terms) {
    skip_ws();
    Residue c = 1;
    int e = 0;
    if (is_digit()) {
      c = parse_coefficient();
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        e = parse_atom();
      } else if (peek() == 't') {
        e = parse_atom();
      }
    } else if (peek() == 't') {
      e = parse_atom();
    } else {
      fail("expected a term");
    }
    terms[e] = field_.add(terms[e], c);
  }

  int parse_big_o() {
    ++pos_;  // 'O'
    expect('(');
    expect('t');
    expect('^');
    const int n = parse_int();
    expect(')');
    return n;
  }

  std::string_view text_;
  PrimeField field_;
  std::size_t pos_ = 0;
};

}  // namespace

LaurentSeries parse_series(std::string_view text, PrimeField field, int default_prec) {
  return SeriesParser(text, field).parse(default_prec);
}

std::string format_series(const LaurentSeries& s) {
  std::ostringstream os;
  bool first = true;
  if (!s.is_zero()) {
    const int val = *s.valuation();
    const auto coeffs = s.coefficients();
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const Residue c = coeffs[i];
      if (c == 0) continue;
      const int e = val + static_cast<int>(i);
      if (!first) os << " + ";
      first = false;
      if (e == 0) {
        os << c;
        continue;
      }
      if (c != 1) os << c << '*';
      os << 't';
      if (e != 1) os << '^' << e;
    }
  }
  if (first) os << '0';
  os << " + O(t^" << s.prec() << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// Vectors

SeriesVector::SeriesVector(std::vector<LaurentSeries> components) : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorKind::DimensionMismatch, "SeriesVector needs at least one component");
  for (const auto& c : components_) {
    require_same_field(c.field(), components_.front().field());
    if (c.prec() != components_.front().prec()) {
      throw Error(ErrorKind::InsufficientPrecision, "SeriesVector components must share precision");
    }
  }
}

SeriesVector SeriesVector::zero(PrimeField field, std::size_t d, int prec) {
  return SeriesVector(std::vector<LaurentSeries>(d, LaurentSeries::zero(field, prec)));
}

bool SeriesVector::is_zero() const noexcept {
  return std::all_of(components_.begin(), components_.end(), [](const auto& c) { return c.is_zero(); });
}

std::optional<int> SeriesVector::valuation() const noexcept {
  std::optional<int> v;
  for (const auto& c : components_) {
    if (c.valuation() && (!v || *c.valuation() < *v)) v = c.valuation();
  }
  return v;
}

SeriesVector SeriesVector::truncated(int new_prec) const {
  std::vector<LaurentSeries> out;
  out.reserve(d());
  for (const auto& c : components_) out.push_back(c.truncated(new_prec));
  return SeriesVector(std::move(out));
}

namespace {

template <typename Op>
SeriesVector componentwise(const SeriesVector& a, const SeriesVector& b, Op op) {
  if (a.d() != b.d()) throw Error(ErrorKind::DimensionMismatch, "SeriesVector dimension mismatch");
  std::vector<LaurentSeries> out;
  out.reserve(a.d());
  for (std::size_t i = 0; i < a.d(); ++i) out.push_back(op(a[i], b[i]));
  return SeriesVector(std::move(out));
}

}  // namespace

SeriesVector add(const SeriesVector& a, const SeriesVector& b) {
  return componentwise(a, b, [](const auto& x, const auto& y) { return add(x, y); });
}

SeriesVector subtract(const SeriesVector& a, const SeriesVector& b) {
  return componentwise(a, b, [](const auto& x, const auto& y) { return subtract(x, y); });
}

SeriesVector t_shift(const SeriesVector& a, int k) {
  std::vector<LaurentSeries> out;
  for (const auto& c : a.components()) out.push_back(t_shift(c, k));
  return SeriesVector(std::move(out));
}

SeriesVector scalar_mul(Residue c, const SeriesVector& a) {
  std::vector<LaurentSeries> out;
  for (const auto& s : a.components()) out.push_back(scalar_mul(c, s));
  return SeriesVector(std::move(out));
}

std::string format_vector(const SeriesVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.d(); ++i) {
    if (i != 0) out += ", ";
    out += format_series(v[i]);
  }
  return out + ")";
}

Residue coeff_tap(const SeriesVector& v, std::size_t component, int exponent) {
  if (component >= v.d()) {
    throw Error(ErrorKind::DimensionMismatch, "component index " + std::to_string(component) + " out of range");
  }
  return v[component].coeff(exponent);
}

// ---------------------------------------------------------------------------
// Windows

LatticeWindow::LatticeWindow(int lo, int hi, std::size_t d) : lo_(lo), hi_(hi), d_(d) {
  if (lo >= hi) {
    throw Error(ErrorKind::MalformedSpec,
                "window needs lo < hi, got [" + std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
  if (d == 0) throw Error(ErrorKind::MalformedSpec, "window needs d >= 1");
}

linalg::Vector window_coords(const SeriesVector& v, const LatticeWindow& w) {
  if (v.d() != w.d()) throw Error(ErrorKind::DimensionMismatch, "vector and window disagree on d");
  if (v.prec() < w.hi()) {
    throw Error(ErrorKind::InsufficientPrecision, "vector known mod t^" + std::to_string(v.prec()) +
                                                      " but window needs mod t^" + std::to_string(w.hi()));
  }
  if (auto val = v.valuation(); val && *val < w.lo()) {
    throw Error(ErrorKind::OutOfWindow, "vector has a term at t^" + std::to_string(*val) +
                                            ", below the window floor t^" + std::to_string(w.lo()));
  }
  linalg::Vector coords(w.dim(), 0);
  for (std::size_t c = 0; c < w.d(); ++c) {
    for (int e = w.lo(); e < w.hi(); ++e) coords[w.index(c, e)] = v[c].coeff(e);
  }
  return coords;
}

SeriesVector coords_to_vector(std::span<const Residue> coords, const LatticeWindow& w, PrimeField field) {
  if (coords.size() != w.dim()) throw Error(ErrorKind::DimensionMismatch, "coordinate vector size mismatch");
  std::vector<LaurentSeries> comps;
  for (std::size_t c = 0; c < w.d(); ++c) {
    comps.push_back(LaurentSeries::from_coefficients(field, w.lo(), coords.subspan(c * w.width(), w.width()),
                                                     w.hi()));
  }
  return SeriesVector(std::move(comps));
}

linalg::Subspace exponent_floor_subspace(const LatticeWindow& w, PrimeField field, int min_exponent) {
  std::vector<linalg::Vector> basis;
  for (std::size_t c = 0; c < w.d(); ++c) {
    for (int e = std::max(min_exponent, w.lo()); e < w.hi(); ++e) {
      linalg::Vector v(w.dim(), 0);
      v[w.index(c, e)] = 1;
      basis.push_back(std::move(v));
    }
  }
  return linalg::Subspace::span(field, w.dim(), basis);
}

linalg::Matrix shift_matrix(const LatticeWindow& w, PrimeField field, int k) {
  linalg::Matrix m(field, w.dim(), w.dim());
  for (std::size_t c = 0; c < w.d(); ++c) {
    for (int e = w.lo(); e < w.hi(); ++e) {
      if (w.contains_exponent(e + k)) m.set(w.index(c, e + k), w.index(c, e), 1);
    }
  }
  return m;
}

linalg::Subspace restrict_to_window(const linalg::Subspace& s, const LatticeWindow& outer,
                                    const LatticeWindow& inner) {
  if (outer.d() != inner.d() || inner.lo() < outer.lo() || inner.hi() > outer.hi()) {
    throw Error(ErrorKind::DimensionMismatch, "restrict_to_window: inner window is not inside the outer one");
  }
  const PrimeField& f = s.field();
  const linalg::Subspace floor = exponent_floor_subspace(outer, f, inner.lo());
  const linalg::Subspace kept = linalg::intersect(s, floor);
  linalg::Matrix proj(f, inner.dim(), outer.dim());
  for (std::size_t c = 0; c < inner.d(); ++c) {
    for (int e = inner.lo(); e < inner.hi(); ++e) proj.set(inner.index(c, e), outer.index(c, e), 1);
  }
  return linalg::image(proj, kept);
}

}  // namespace fpa::laurent
