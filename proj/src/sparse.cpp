#include "fpa/sparse.hpp"

#include <algorithm>
#include <tuple>

#include "fpa/error.hpp"

namespace fpa::sparse {

namespace {

void require_same_shape(const SparsePerturbation& a, const SparsePerturbation& b) {
  if (a.field() != b.field() || a.d() != b.d()) {
    throw Error(ErrorKind::ShapeMismatch, "perturbations disagree on (p, d)");
  }
}

}  // namespace

SparsePerturbation::SparsePerturbation(PrimeField field, std::size_t d, std::vector<TapEntry> entries)
    : field_(field), d_(d) {
  std::map<std::tuple<std::size_t, int, std::size_t, int>, Residue> merged;
  for (const auto& e : entries) {
    if (e.in.comp >= d || e.out.comp >= d) {
      throw Error(ErrorKind::ShapeMismatch, "tap component out of range for d = " + std::to_string(d));
    }
    auto& slot = merged[{e.out.comp, e.out.exp, e.in.comp, e.in.exp}];
    slot = field.add(slot, e.coeff % field.p());
  }
  for (const auto& [key, c] : merged) {
    if (c == 0) continue;
    const auto& [oc, oe, ic, ie] = key;
    entries_.push_back({{ic, ie}, {oc, oe}, c});
  }
}

int SparsePerturbation::drop() const noexcept {
  const auto m = min_out_exp();
  return m ? std::max(0, -*m) : 0;
}

int SparsePerturbation::descent() const noexcept {
  int best = 0;
  for (const auto& e : entries_) best = std::max(best, e.in.exp - e.out.exp);
  return best;
}

int SparsePerturbation::span() const noexcept {
  if (entries_.empty()) return 0;
  int lo = entries_.front().in.exp;
  int hi = lo;
  for (const auto& e : entries_) {
    lo = std::min({lo, e.in.exp, e.out.exp});
    hi = std::max({hi, e.in.exp, e.out.exp});
  }
  return hi - lo;
}

std::optional<int> SparsePerturbation::min_out_exp() const noexcept {
  std::optional<int> m;
  for (const auto& e : entries_) {
    if (!m || e.out.exp < *m) m = e.out.exp;
  }
  return m;
}

std::optional<int> SparsePerturbation::max_in_exp() const noexcept {
  std::optional<int> m;
  for (const auto& e : entries_) {
    if (!m || e.in.exp > *m) m = e.in.exp;
  }
  return m;
}

std::optional<int> SparsePerturbation::min_in_exp() const noexcept {
  std::optional<int> m;
  for (const auto& e : entries_) {
    if (!m || e.in.exp < *m) m = e.in.exp;
  }
  return m;
}

SparsePerturbation conjugate_by_t(const SparsePerturbation& n, int k) {
  std::vector<TapEntry> out = n.entries();
  for (auto& e : out) {
    e.in.exp += k;
    e.out.exp += k;
  }
  return SparsePerturbation(n.field(), n.d(), std::move(out));
}

SparsePerturbation compose(const SparsePerturbation& a, const SparsePerturbation& b) {
  require_same_shape(a, b);
  std::multimap<Coord, const TapEntry*> a_by_input;
  for (const auto& e : a.entries()) a_by_input.emplace(e.in, &e);
  std::vector<TapEntry> out;
  for (const auto& eb : b.entries()) {
    auto [first, last] = a_by_input.equal_range(eb.out);
    for (auto it = first; it != last; ++it) {
      out.push_back({eb.in, it->second->out, a.field().mul(it->second->coeff, eb.coeff)});
    }
  }
  return SparsePerturbation(a.field(), a.d(), std::move(out));
}

SparsePerturbation add(const SparsePerturbation& a, const SparsePerturbation& b) {
  require_same_shape(a, b);
  std::vector<TapEntry> out = a.entries();
  out.insert(out.end(), b.entries().begin(), b.entries().end());
  return SparsePerturbation(a.field(), a.d(), std::move(out));
}

SparsePerturbation scale(Residue c, const SparsePerturbation& a) {
  std::vector<TapEntry> out = a.entries();
  for (auto& e : out) e.coeff = a.field().mul(e.coeff, c % a.field().p());
  return SparsePerturbation(a.field(), a.d(), std::move(out));
}

SparsePerturbation power(const SparsePerturbation& n, unsigned e) {
  if (e == 0) throw Error(ErrorKind::ShapeMismatch, "power of a perturbation needs e >= 1");
  SparsePerturbation acc = n;
  for (unsigned i = 1; i < e && !acc.empty(); ++i) acc = compose(n, acc);
  return acc;
}

NilpotencyTranscript power_check_nilpotent(const SparsePerturbation& n) {
  NilpotencyTranscript t;
  const unsigned p = n.field().p();
  SparsePerturbation acc = n;
  for (unsigned i = 1; i <= p; ++i) {
    if (i > 1) acc = compose(n, acc);
    t.entry_counts.push_back(acc.size());
    if (acc.empty()) {
      t.index = i;
      break;
    }
  }
  if (n.empty()) t.index = 1;
  t.nilpotent = t.index.has_value();
  return t;
}

CommutationResult commutation_range_check(const SparsePerturbation& n) {
  CommutationResult r;
  r.span = n.span();
  if (n.empty()) return r;
  for (int delta = -r.span; delta <= r.span; ++delta) {
    r.offsets_checked.push_back(delta);
    const SparsePerturbation shifted = conjugate_by_t(n, delta);
    if (compose(n, shifted) != compose(shifted, n)) {
      r.ok = false;
      r.witness = std::make_pair(0, delta);
      return r;
    }
  }
  return r;
}

ContractionModulus derive_modulus(const SparsePerturbation& n) { return ContractionModulus(n.min_out_exp()); }

Automorphism compose(const Automorphism& g, const Automorphism& h) {
  const auto& a = g.perturbation();
  const auto& b = h.perturbation();
  return Automorphism(add(add(a, b), compose(a, b)));
}

Automorphism power(const Automorphism& g, unsigned e) {
  Automorphism acc = Automorphism::identity(g.field(), g.d());
  for (unsigned i = 0; i < e; ++i) acc = compose(g, acc);
  return acc;
}

Automorphism conjugate_by_t(const Automorphism& g, int k) {
  return Automorphism(conjugate_by_t(g.perturbation(), k));
}

Automorphism inverse(const Automorphism& g) {
  const auto& n = g.perturbation();
  if (!power_check_nilpotent(n).nilpotent) {
    throw Error(ErrorKind::NotOrderP, "inverse by the binomial formula needs N^p = 0");
  }
  const unsigned p = n.field().p();
  SparsePerturbation acc(n.field(), n.d());
  SparsePerturbation pw = n;
  // binom(p - 1, i) = (-1)^i mod p.
  for (unsigned i = 1; i < p && !pw.empty(); ++i) {
    acc = add(acc, (i % 2 == 1) ? scale(p - 1, pw) : pw);
    pw = compose(n, pw);
  }
  return Automorphism(acc);
}

SeedAutomorphism SeedAutomorphism::certify(const SparsePerturbation& n) {
  SeedAutomorphism s{Automorphism(n), power_check_nilpotent(n), {}};
  if (!s.nilpotency.nilpotent) {
    throw Error(ErrorKind::NotOrderP, "seed perturbation N has N^" + std::to_string(n.field().p()) +
                                          " != 0 (" + std::to_string(s.nilpotency.entry_counts.back()) +
                                          " entries), so g^p != id");
  }
  s.commutation = commutation_range_check(n);
  if (!s.commutation.ok) {
    const auto [j, k] = *s.commutation.witness;
    throw Error(ErrorKind::NonCommuting,
                "t-conjugates g_" + std::to_string(j) + " and g_" + std::to_string(k) + " do not commute");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Precision-tracked evaluation

TrackedVector::TrackedVector(const SeriesVector& v) {
  for (const auto& c : v.components()) {
    Component comp{{}, c.prec()};
    if (auto val = c.valuation()) {
      const auto coeffs = c.coefficients();
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] != 0) comp.coeffs.emplace(*val + static_cast<int>(i), coeffs[i]);
      }
    }
    comps_.push_back(std::move(comp));
  }
}

void TrackedVector::cap_precision(std::size_t comp, int bound) {
  auto& c = comps_.at(comp);
  if (bound >= c.prec) return;
  c.prec = bound;
  c.coeffs.erase(c.coeffs.lower_bound(bound), c.coeffs.end());
}

void TrackedVector::apply(const Automorphism& g) {
  const auto& n = g.perturbation();
  if (n.d() != comps_.size()) throw Error(ErrorKind::DimensionMismatch, "operator and vector disagree on d");
  const PrimeField& f = n.field();
  std::vector<std::pair<Coord, Residue>> writes;
  std::vector<int> caps;
  for (const auto& c : comps_) caps.push_back(c.prec);
  for (const auto& e : n.entries()) {
    const Component& src = comps_[e.in.comp];
    if (e.in.exp >= src.prec) {
      caps[e.out.comp] = std::min(caps[e.out.comp], e.out.exp);
      continue;
    }
    auto it = src.coeffs.find(e.in.exp);
    if (it == src.coeffs.end()) continue;
    writes.emplace_back(e.out, f.mul(e.coeff, it->second));
  }
  for (const auto& [at, value] : writes) {
    auto& slot = comps_[at.comp].coeffs[at.exp];
    slot = f.add(slot, value);
    if (slot == 0) comps_[at.comp].coeffs.erase(at.exp);
  }
  for (std::size_t i = 0; i < comps_.size(); ++i) cap_precision(i, caps[i]);
}

SeriesVector TrackedVector::to_series(PrimeField field) const {
  int prec = comps_.front().prec;
  for (const auto& c : comps_) prec = std::min(prec, c.prec);
  std::vector<laurent::LaurentSeries> out;
  for (const auto& c : comps_) {
    auto s = laurent::LaurentSeries::zero(field, prec);
    if (!c.coeffs.empty() && c.coeffs.begin()->first < prec) {
      const int lo = c.coeffs.begin()->first;
      std::vector<Residue> dense(static_cast<std::size_t>(prec - lo), 0);
      for (const auto& [e, v] : c.coeffs) {
        if (e >= prec) break;
        dense[static_cast<std::size_t>(e - lo)] = v;
      }
      s = laurent::LaurentSeries::from_coefficients(field, lo, dense, prec);
    }
    out.push_back(std::move(s));
  }
  return SeriesVector(std::move(out));
}

SeriesVector apply(const Automorphism& g, const SeriesVector& u) {
  if (g.field() != u.field()) throw Error(ErrorKind::ModulusMismatch, "operator and vector disagree on p");
  TrackedVector v(u);
  v.apply(g);
  return v.to_series(u.field());
}

// ---------------------------------------------------------------------------
// Windows

WindowFitReport classify(const SparsePerturbation& n, const LatticeWindow& w) {
  WindowFitReport report{WindowFit::Identity, std::nullopt};
  auto rank = [](WindowFit f) { return static_cast<int>(f); };
  for (const auto& e : n.entries()) {
    WindowFit fit = WindowFit::Identity;
    if (e.in.exp < w.lo()) {
      fit = WindowFit::Identity;
    } else if (e.in.exp < w.hi()) {
      if (e.out.exp < w.lo()) {
        fit = WindowFit::LeaksBelow;
      } else if (e.out.exp < w.hi()) {
        fit = WindowFit::Visible;
      }
    } else if (e.out.exp < w.hi()) {
      fit = WindowFit::Straddles;
    }
    if (rank(fit) > rank(report.fit)) {
      report.fit = fit;
      if (fit == WindowFit::Straddles || fit == WindowFit::LeaksBelow) report.offending = e;
    }
  }
  return report;
}

linalg::Matrix induced_matrix(const Automorphism& g, const LatticeWindow& w) {
  const auto& n = g.perturbation();
  if (n.d() != w.d()) throw Error(ErrorKind::DimensionMismatch, "operator and window disagree on d");
  const WindowFitReport fit = classify(n, w);
  if (fit.fit == WindowFit::Straddles || fit.fit == WindowFit::LeaksBelow) {
    const char* why = fit.fit == WindowFit::Straddles ? "reads at or above hi and writes below hi"
                                                      : "writes below the window floor";
    throw Error(ErrorKind::WindowTooNarrow, "window [" + std::to_string(w.lo()) + ", " +
                                                std::to_string(w.hi()) + ") too narrow: tap " +
                                                format_entry(*fit.offending) + " " + why);
  }
  const PrimeField& f = n.field();
  linalg::Matrix m = linalg::Matrix::identity(f, w.dim());
  for (const auto& e : n.entries()) {
    if (!w.contains_exponent(e.in.exp) || !w.contains_exponent(e.out.exp)) continue;
    const std::size_t r = w.index(e.out.comp, e.out.exp);
    const std::size_t c = w.index(e.in.comp, e.in.exp);
    m.set(r, c, f.add(m(r, c), e.coeff));
  }
  return m;
}

std::vector<linalg::Matrix> induced_matrices(std::span<const Automorphism> ops, const LatticeWindow& w) {
  std::vector<linalg::Matrix> out;
  out.reserve(ops.size());
  for (const auto& g : ops) out.push_back(induced_matrix(g, w));
  return out;
}

std::string format_entry(const TapEntry& e) {
  return "{in: [" + std::to_string(e.in.comp + 1) + ", " + std::to_string(e.in.exp) + "], out: [" +
         std::to_string(e.out.comp + 1) + ", " + std::to_string(e.out.exp) + "], coeff: " +
         std::to_string(e.coeff) + "}";
}

}  // namespace fpa::sparse
