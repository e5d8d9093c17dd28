#include "fpa/action.hpp"

#include <algorithm>

#include "fpa/error.hpp"

namespace fpa::action {

Action build_action(ActionSpec spec) {
  if (spec.d < 1 || spec.d > kMaxDimension) {
    throw Error(ErrorKind::MalformedSpec, "d must lie in [1, 16], got " + std::to_string(spec.d));
  }
  if (spec.seed.d() != spec.d || spec.seed.field() != spec.field) {
    throw Error(ErrorKind::MalformedSpec, "seed shape does not match (p, d)");
  }
  auto seed = sparse::SeedAutomorphism::certify(spec.seed);
  const auto modulus = sparse::derive_modulus(spec.seed);
  return Action(std::move(spec), std::move(seed), modulus);
}

sparse::Automorphism PhiOperator::expanded() const {
  sparse::Automorphism acc = sparse::Automorphism::identity(action_->field(), action_->d());
  for (const auto& [k, c] : factors_) acc = sparse::compose(acc, sparse::power(action_->generator(k), c));
  return acc;
}

linalg::Matrix PhiOperator::window_matrix(const LatticeWindow& w) const {
  linalg::Matrix acc = linalg::Matrix::identity(action_->field(), w.dim());
  for (const auto& [k, c] : factors_) acc = acc * linalg::power(sparse::induced_matrix(action_->generator(k), w), c);
  return acc;
}

PhiOperator phi(const Action& a, const LaurentSeries& x, const LatticeWindow& target) {
  std::vector<std::pair<int, Residue>> factors;
  if (a.is_trivial() || x.is_zero()) {
    if (!a.is_trivial() && x.prec() < *a.modulus().first_at_least(target.hi())) {
      throw Error(ErrorKind::InsufficientPrecision, "x known mod t^" + std::to_string(x.prec()) +
                                                        " does not determine phi(x) mod t^" +
                                                        std::to_string(target.hi()));
    }
    return PhiOperator(a, std::move(factors));
  }
  const int needed = *a.modulus().first_at_least(target.hi());
  if (x.prec() < needed) {
    throw Error(ErrorKind::InsufficientPrecision, "x known mod t^" + std::to_string(x.prec()) +
                                                      " but phi(x) mod t^" + std::to_string(target.hi()) +
                                                      " needs x mod t^" + std::to_string(needed));
  }
  const int stop = std::min(x.prec(), needed);
  for (int k = *x.valuation(); k < stop; ++k) {
    const Residue c = x.coeff(k);
    if (c != 0) factors.emplace_back(k, c);
  }
  return PhiOperator(a, std::move(factors));
}

SeriesVector apply_phi(const Action& a, const LaurentSeries& x, const SeriesVector& u) {
  if (x.field() != a.field() || u.field() != a.field()) {
    throw Error(ErrorKind::ModulusMismatch, "apply_phi: modulus mismatch");
  }
  if (u.d() != a.d()) throw Error(ErrorKind::DimensionMismatch, "apply_phi: vector has the wrong dimension");
  if (a.is_trivial()) return u;
  sparse::TrackedVector v(u);
  if (!x.is_zero()) {
    const auto coeffs = x.coefficients();
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (coeffs[i] == 0) continue;
      const auto g = a.generator(*x.valuation() + static_cast<int>(i));
      for (Residue rep = 0; rep < coeffs[i]; ++rep) v.apply(g);
    }
  }
  // Terms of x at t^k, k >= x.prec, are unknown; g_k - id writes at out + k.
  for (const auto& e : a.spec().seed.entries()) v.cap_precision(e.out.comp, x.prec() + e.out.exp);
  return v.to_series(a.field());
}

EquivarianceReport equivariance_check(const Action& a, std::span<const EquivarianceSample> samples) {
  EquivarianceReport report;
  report.samples = samples.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& [x, u] = samples[i];
    const SeriesVector lhs = apply_phi(a, laurent::t_shift(x, 1), u);
    const SeriesVector rhs = laurent::t_shift(apply_phi(a, x, laurent::t_shift(u, -1)), 1);
    const int prec = std::min(lhs.prec(), rhs.prec());
    report.compared_precisions.push_back(prec);
    const auto l = lhs.truncated(prec);
    const auto r = rhs.truncated(prec);
    if (l != r) report.failures.push_back({i, laurent::format_vector(l), laurent::format_vector(r)});
  }
  return report;
}

std::vector<linalg::Matrix> GeneratorSet::matrices() const {
  std::vector<linalg::Matrix> out;
  out.reserve(generators.size());
  for (const auto& g : generators) out.push_back(g.matrix);
  return out;
}

GeneratorSet generator_matrices(const Action& a, int ell, const LatticeWindow& w) {
  if (w.d() != a.d()) throw Error(ErrorKind::DimensionMismatch, "window and action disagree on d");
  GeneratorSet set{w, {}, {}};
  if (a.is_trivial()) return set;
  const int stop = std::max(-ell, *a.modulus().first_at_least(w.hi()));
  for (int k = -ell; k < stop; ++k) {
    const auto g = a.generator(k);
    const auto fit = sparse::classify(g.perturbation(), w);
    switch (fit.fit) {
      case sparse::WindowFit::Identity:
        break;
      case sparse::WindowFit::Straddles:
        set.excluded.push_back(k);
        break;
      case sparse::WindowFit::LeaksBelow:
        throw Error(ErrorKind::WindowTooNarrow,
                    "window [" + std::to_string(w.lo()) + ", " + std::to_string(w.hi()) + ") too narrow: g_" +
                        std::to_string(k) + " tap " + sparse::format_entry(*fit.offending) +
                        " writes below the window floor");
      case sparse::WindowFit::Visible:
        set.generators.push_back({k, sparse::induced_matrix(g, w)});
        break;
    }
  }
  return set;
}

GeneratorSet window_generators(const Action& a, const LatticeWindow& w) {
  if (w.d() != a.d()) throw Error(ErrorKind::DimensionMismatch, "window and action disagree on d");
  GeneratorSet set{w, {}, {}};
  if (a.is_trivial()) return set;
  const int start = w.lo() - *a.spec().seed.max_in_exp();
  const int stop = *a.modulus().first_at_least(w.hi());
  for (int k = start; k < stop; ++k) {
    const auto g = a.generator(k);
    const auto fit = sparse::classify(g.perturbation(), w);
    if (fit.fit == sparse::WindowFit::Visible) {
      set.generators.push_back({k, sparse::induced_matrix(g, w)});
    } else if (fit.fit != sparse::WindowFit::Identity) {
      set.excluded.push_back(k);
    }
  }
  return set;
}

namespace {

sparse::TapEntry random_entry(Rng& rng, PrimeField field, std::size_t in_comp, std::size_t out_comp, int radius) {
  return {{in_comp, rng.range(-radius, radius)},
          {out_comp, rng.range(-radius, radius)},
          static_cast<Residue>(rng.range(1, static_cast<int>(field.p()) - 1))};
}

}  // namespace

Action random_action(Rng& rng, PrimeField field, std::size_t d, std::size_t max_entries, int exp_radius) {
  const auto count = [&] { return static_cast<std::size_t>(rng.range(1, static_cast<int>(max_entries))); };
  // Unconstrained draws rarely certify, so they get a bounded number of tries.
  for (int attempt = 0; attempt < 32; ++attempt) {
    std::vector<sparse::TapEntry> entries;
    for (std::size_t i = 0, n = count(); i < n; ++i) entries.push_back(random_entry(rng, field, rng.below(d), rng.below(d), exp_radius));
    sparse::SparsePerturbation seed(field, d, std::move(entries));
    if (seed.empty()) continue;
    try {
      return build_action({field, d, std::move(seed), "random", ""});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotOrderP && e.kind() != ErrorKind::NonCommuting) throw;
    }
  }
  // Taps from source components into disjoint sink components: every product
  // of two conjugates vanishes. A single component admits no such split.
  std::vector<sparse::TapEntry> entries;
  if (d == 1) return build_action({field, d, sparse::SparsePerturbation(field, d), "random", ""});
  std::vector<std::size_t> comps(d);
  for (std::size_t i = 0; i < d; ++i) comps[i] = i;
  for (std::size_t i = d; i-- > 1;) std::swap(comps[i], comps[rng.below(i + 1)]);
  const auto sources = static_cast<std::size_t>(rng.range(1, static_cast<int>(d) - 1));
  for (std::size_t i = 0, n = count(); i < n; ++i) {
    const std::size_t in = comps[rng.below(sources)];
    const std::size_t out = comps[sources + rng.below(d - sources)];
    entries.push_back(random_entry(rng, field, in, out, exp_radius));
  }
  return build_action({field, d, sparse::SparsePerturbation(field, d, std::move(entries)), "random", ""});
}

}  // namespace fpa::action
