#include "fpa/fixpoint.hpp"

#include <algorithm>
#include <future>
#include <numeric>

#include "fpa/error.hpp"

namespace fpa::fixpoint {

namespace {

std::string window_text(const LatticeWindow& w) {
  return "[" + std::to_string(w.lo()) + ", " + std::to_string(w.hi()) + ")";
}

int top_margin(const action::Action& a) { return std::max(a.drop_bound(), a.descent()); }

WindowPlan make_plan(const action::Action& a, int lo, int hi, int drop, int top, bool widened) {
  const int rlo = lo + drop;
  const int rhi = hi - top;
  if (lo >= hi || rlo >= rhi) {
    throw Error(ErrorKind::WindowTooNarrow, "window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                                ") leaves no room once margins of " + std::to_string(drop) +
                                                " below and " + std::to_string(top) + " above are removed");
  }
  return WindowPlan{LatticeWindow(lo, hi, a.d()), LatticeWindow(rlo, rhi, a.d()), widened};
}

std::optional<int> coord_valuation(const linalg::Vector& v, const LatticeWindow& w) {
  std::optional<int> best;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    const int e = w.exponent_of(i);
    if (!best || e < *best) best = e;
  }
  return best;
}

}  // namespace

int stabilization_ell(const action::Action& a) noexcept {
  const auto m = a.spec().seed.max_in_exp();
  return m ? std::max(0, *m) : 0;
}

WindowPlan plan_window(const action::Action& a, const WindowRequest& req) {
  const int drop = a.drop_bound();
  const int top = top_margin(a);
  if (req.explicit_window) {
    return make_plan(a, req.explicit_window->first, req.explicit_window->second, drop, top, false);
  }
  const int depth = std::max({req.l_max, req.n_max, stabilization_ell(a)});
  return make_plan(a, -(depth + drop), req.precision + top, drop, top, false);
}

WindowPlan widen(const action::Action& a, const WindowRequest& req) {
  const int drop = a.drop_bound();
  const int top = top_margin(a);
  const int depth = std::max({req.l_max, req.n_max, stabilization_ell(a)});
  auto plan = make_plan(a, -2 * (depth + drop), req.precision + 2 * top, 2 * drop, 2 * top, true);
  return plan;
}

Subspace max_invariant_subspace(const std::vector<Matrix>& gens, const LatticeWindow& w, const Subspace& b_image) {
  for (const auto& g : gens) {
    if (g.rows() != w.dim() || g.cols() != w.dim()) {
      throw Error(ErrorKind::DimensionMismatch, "generator does not act on the window");
    }
    if (linalg::rank(g) != w.dim()) throw Error(ErrorKind::SingularGenerator, "generator is singular on the window");
  }
  Subspace n = b_image;
  for (;;) {
    Subspace next = n;
    for (const auto& g : gens) {
      next = intersect(next, intersect(linalg::image(g, n), linalg::preimage(g, n)));
    }
    if (next == n) return n;
    n = std::move(next);
  }
}

InvariantChain m_ell_chain(const action::Action& a, int l_max, const LatticeWindow& w, bool parallel) {
  if (l_max < 0) throw Error(ErrorKind::MalformedSpec, "l_max must be nonnegative");
  const int requested = l_max;
  l_max = std::max(l_max, stabilization_ell(a));
  const auto f = a.field();
  const Subspace b_image = laurent::exponent_floor_subspace(w, f, 0);
  const Subspace t_b = laurent::exponent_floor_subspace(w, f, 1);

  // Generator sets are built up front so window errors surface on this thread.
  std::vector<action::GeneratorSet> sets;
  for (int ell = 0; ell <= l_max; ++ell) sets.push_back(action::generator_matrices(a, ell, w));

  std::vector<Subspace> results;
  if (parallel && l_max > 0) {
    std::vector<std::future<Subspace>> jobs;
    for (const auto& s : sets) {
      jobs.push_back(std::async(std::launch::async, [&s, &w, &b_image] {
        return max_invariant_subspace(s.matrices(), w, b_image);
      }));
    }
    for (auto& j : jobs) results.push_back(j.get());
  } else {
    for (const auto& s : sets) results.push_back(max_invariant_subspace(s.matrices(), w, b_image));
  }

  InvariantChain chain{w, b_image, {}, results.back(), requested, 0, true};
  for (int ell = 0; ell <= l_max; ++ell) {
    ChainRow row{ell, results[static_cast<std::size_t>(ell)], sets[static_cast<std::size_t>(ell)].generators.size()};
    row.nested = ell == 0 || contains(chain.rows.back().m_ell, row.m_ell);
    row.inside_b = contains(b_image, row.m_ell);
    row.meets_s = !contains(t_b, row.m_ell);
    if (!row.nested || !row.inside_b || !row.meets_s) {
      throw Error(ErrorKind::InvariantViolation,
                  "chain invariant fails at ell = " + std::to_string(ell) + " on window " + window_text(w) +
                      (row.nested ? "" : ": not nested") + (row.inside_b ? "" : ": leaves B") +
                      (row.meets_s ? "" : ": misses S"));
    }
    chain.rows.push_back(std::move(row));
  }
  for (int ell = l_max; ell >= 0; --ell) {
    if (chain.rows[static_cast<std::size_t>(ell)].m_ell == chain.m_hat) chain.l_stable = ell;
  }
  const Subspace t_m = linalg::image(laurent::shift_matrix(w, f, 1), chain.m_hat);
  chain.t_stable = contains(chain.m_hat, t_m);
  if (!chain.t_stable) {
    throw Error(ErrorKind::InvariantViolation, "t M is not inside M on window " + window_text(w));
  }
  return chain;
}

FixedSpaces fixed_vectors(const action::Action& a, const LatticeWindow& w, const Subspace& m_hat) {
  const auto gens = action::window_generators(a, w);
  Subspace fixed = Subspace::full(a.field(), w.dim());
  std::vector<int> ks;
  for (const auto& g : gens.generators) {
    fixed = intersect(fixed, linalg::kernel(linalg::minus_identity(g.matrix)));
    ks.push_back(g.k);
  }
  return FixedSpaces{fixed, intersect(fixed, m_hat), std::move(ks)};
}

bool FixedPointCertificate::valid() const noexcept {
  if (!in_m_hat || witness.truncated(precision).is_zero()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const GeneratorCheck& c) { return c.fixed; });
}

namespace {

FixedPointCertificate certify(const action::Action& a, const LatticeWindow& w, const linalg::Vector& coords,
                              int valuation, bool outside_t, int precision, int l_max) {
  const auto f = a.field();
  FixedPointCertificate cert{laurent::coords_to_vector(coords, w, f), coords, precision, valuation, {}, true,
                             outside_t};
  if (a.is_trivial()) return cert;
  const auto& seed = a.spec().seed;
  const int min_out = *seed.min_out_exp();
  const int max_in = *seed.max_in_exp();
  const int start = std::min(-l_max, valuation - max_in);
  const int stop = precision - min_out;
  const SeriesVector expect = cert.witness.truncated(precision);
  for (int k = start; k < stop; ++k) {
    const int xprec = std::max(k + 1, cert.witness.prec() - min_out);
    const auto x = laurent::LaurentSeries::monomial(f, 1, k, xprec);
    const SeriesVector image = action::apply_phi(a, x, cert.witness);
    const bool ok = image.prec() >= precision && image.truncated(precision) == expect;
    cert.checks.push_back({k, ok});
  }
  return cert;
}

}  // namespace

FixedPointCertificate extract_witness(const action::Action& a, const InvariantChain& chain, int precision) {
  const LatticeWindow& w = chain.window;
  if (precision > w.hi()) {
    throw Error(ErrorKind::WindowTooNarrow,
                "precision " + std::to_string(precision) + " exceeds the window " + window_text(w));
  }
  const auto spaces = fixed_vectors(a, w, chain.m_hat);
  const Subspace& fm = spaces.fixed_in_m_hat;
  if (fm.dim() == 0) {
    throw Error(ErrorKind::EmptyFixedSpace, "no nonzero fixed vector of M on window " + window_text(w));
  }
  const Subspace t_m = linalg::image(laurent::shift_matrix(w, a.field(), 1), chain.m_hat);

  struct Candidate {
    std::size_t row;
    bool outside_t;
    int valuation;
  };
  std::vector<Candidate> candidates;
  for (std::size_t r = 0; r < fm.dim(); ++r) {
    const auto row = fm.basis().row(r);
    const int val = *coord_valuation(fm.basis().row_vector(r), w);
    candidates.push_back({r, !t_m.contains_vector(row), val});
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    if (x.outside_t != y.outside_t) return x.outside_t;
    return x.valuation < y.valuation;
  });

  std::optional<FixedPointCertificate> first;
  for (const auto& c : candidates) {
    auto cert = certify(a, w, fm.basis().row_vector(c.row), c.valuation, c.outside_t, precision,
                        static_cast<int>(chain.rows.size()) - 1);
    if (cert.valid()) return cert;
    if (!first) first = std::move(cert);
  }
  return *first;
}

LemmaChain lemma_chain_from_action(const action::Action& a, const InvariantChain& chain, int n_max) {
  const LatticeWindow& w = chain.window;
  if (n_max < 1) throw Error(ErrorKind::MalformedSpec, "n_max must be at least 1");
  if (w.lo() > -n_max) {
    throw Error(ErrorKind::WindowTooNarrow,
                "window " + window_text(w) + " cannot host t^-" + std::to_string(n_max) + " M");
  }
  const auto f = a.field();
  const auto gens = action::window_generators(a, w);
  const replab::FiniteRep full(f, w.dim(), gens.matrices());

  std::vector<Subspace> lifted;
  for (int n = 1; n <= n_max; ++n) {
    lifted.push_back(sum(linalg::image(laurent::shift_matrix(w, f, -n), chain.m_hat), chain.m_hat));
  }
  const Subspace& top = lifted.back();
  const replab::FiniteRep induced = replab::subquotient_rep(full, top, chain.m_hat);
  std::vector<Matrix> distinct;
  for (const auto& g : induced.generators()) {
    if (g.is_identity() || std::find(distinct.begin(), distinct.end(), g) != distinct.end()) continue;
    distinct.push_back(g);
  }
  replab::FiniteRep ambient(f, induced.dim(), std::move(distinct));
  const linalg::QuotientSpace q(top, chain.m_hat);

  std::vector<Subspace> out;
  for (const auto& l : lifted) {
    std::vector<linalg::Vector> vs;
    for (std::size_t r = 0; r < l.dim(); ++r) vs.push_back(q.project(l.basis().row(r)));
    out.push_back(Subspace::span(f, q.dim(), vs));
  }
  return LemmaChain{std::move(ambient), std::move(out)};
}

}  // namespace fpa::fixpoint
