// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpa/action.hpp"
#include "fpa/cli.hpp"
#include "fpa/error.hpp"
#include "fpa/families.hpp"
#include "fpa/fixpoint.hpp"
#include "fpa/laurent.hpp"
#include "fpa/oracle.hpp"
#include "fpa/random.hpp"
#include "fpa/replab.hpp"

namespace {

using namespace fpa;
using laurent::LatticeWindow;
using laurent::LaurentSeries;
using laurent::SeriesVector;
using linalg::PrimeField;
using linalg::Subspace;
using nlohmann::json;

struct Result {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

action::Action family(const std::string& name) { return action::build_action(families::spec(name)); }

std::string window_text(const LatticeWindow& w) {
  return "[" + std::to_string(w.lo()) + "," + std::to_string(w.hi()) + ")";
}

Result lemma_bound() {
  Result r;
  Rng rng(1);
  std::size_t cases = 0;
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const PrimeField f(p);
    for (std::size_t rank = 1; rank <= 3; ++rank) {
      for (int i = 0; i < 200; ++i) {
        const auto dim = static_cast<std::size_t>(rng.range(1, 30));
        const auto rep = replab::random_rep(rng, f, dim, rank);
        const auto b = replab::fixed_bound_check(rep);
        ++cases;
        if (!b.ok) r.fail("p=" + std::to_string(p) + " r=" + std::to_string(rank) + ": " + std::to_string(b.lhs) +
                          " < " + b.rhs());
      }
    }
  }
  if (r.ok) r.detail = std::to_string(cases) + " reps";
  return r;
}

Result filtration_law() {
  Result r;
  Rng rng(2);
  const std::uint32_t primes[] = {2, 3, 5};
  for (int i = 0; i < 300; ++i) {
    const PrimeField f(primes[i % 3]);
    const auto dim = static_cast<std::size_t>(rng.range(1, 30));
    const auto g = replab::random_rep(rng, f, dim, 1).generators()[0];
    const auto rep = replab::kernel_filtration(g, f.p());
    // Recompute the kernel dimensions from ranks of powers of g - id.
    const auto n = linalg::minus_identity(g);
    auto power = linalg::Matrix::identity(f, dim);
    std::vector<std::size_t> dims;
    for (std::uint32_t k = 0; k <= f.p(); ++k) {
      dims.push_back(dim - linalg::rank(power));
      power = power * n;
    }
    if (dims != rep.dims) r.fail("kernel dimensions disagree with ranks");
    for (std::size_t k = 1; k + 1 < dims.size(); ++k) {
      if (dims[k + 1] - dims[k] > dims[k] - dims[k - 1]) r.fail("differences increase");
    }
    if (dims.back() != dim) r.fail("d(p) != dim");
    if (dims[1] * f.p() < dim) r.fail("d(1) < dim/p");
  }
  if (r.ok) r.detail = "300 generators";
  return r;
}

/// Samples (x, u) at precision 8 for one action.
std::vector<action::EquivarianceSample> samples_for(const action::Action& a, Rng& rng, int n) {
  std::vector<action::EquivarianceSample> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({random_series(rng, a.field(), rng.range(-3, 3), 8),
                   random_vector(rng, a.field(), a.d(), rng.range(-3, 3), 8)});
  }
  return out;
}

Result equivariance() {
  Result r;
  Rng rng(3);
  for (const auto& name : families::names()) {
    const auto a = family(name);
    const auto samples = samples_for(a, rng, 100);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& [x, u] = samples[i];
      const auto lhs = action::apply_phi(a, laurent::t_shift(x, 1), u);
      const auto rhs = laurent::t_shift(action::apply_phi(a, x, laurent::t_shift(u, -1)), 1);
      if (!(lhs == rhs)) r.fail(name + " sample " + std::to_string(i) + ": " + laurent::format_vector(lhs) +
                                " vs " + laurent::format_vector(rhs));
    }
    const auto rep = action::equivariance_check(a, samples);
    if (!rep.ok()) r.fail(name + ": equivariance_check reports failures");
  }
  if (r.ok) r.detail = "4 families x 100 samples, both sides identical including precision";
  return r;
}

/// The window classes of component 2 (index 1): the truncation of {0} x F_p((t)).
Subspace second_component(const LatticeWindow& w, PrimeField f) {
  std::vector<linalg::Vector> vs;
  for (int e = w.lo(); e < w.hi(); ++e) {
    linalg::Vector v(w.dim(), 0);
    v[w.index(1, e)] = 1;
    vs.push_back(v);
  }
  return Subspace::span(f, w.dim(), vs);
}

int run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

Result fixed_point_instances(const std::filesystem::path& dir) {
  Result r;
  for (const auto& name : families::names()) {
    const std::string cfg = (dir / (name + ".yaml")).string();
    const std::string rep = (dir / (name + "-fixed.json")).string();
    if (run_cli({"gen-example", name, "--out", cfg}) != 0) r.fail("gen-example " + name);
    const int code = run_cli({"find-fixed", "--config", cfg, "--precision", "4", "--l-max", "3", "--json", rep});
    if (code != 0) {
      r.fail(name + ": find-fixed exit " + std::to_string(code));
      continue;
    }
    std::ifstream f(rep);
    const json j = json::parse(f);
    if (!j["certificate"]["valid"].get<bool>()) r.fail(name + ": certificate not valid");
    const auto a = family(name);
    const auto plan = fixpoint::plan_window(a, {4, 3, 0, {}});
    const auto chain = fixpoint::m_ell_chain(a, 3, plan.working);
    const auto cert = fixpoint::extract_witness(a, chain, 4);
    if (cert.printed().is_zero() || !cert.valid()) r.fail(name + ": witness zero or uncertified");
    if (j["certificate"]["witness"] != laurent::format_vector(cert.printed())) r.fail(name + ": CLI and library differ");
    if (name == "tap" || name == "dropping-tap") {
      if (j["certificate"]["witness"] != "(0 + O(t^4), 1 + O(t^4))") r.fail(name + ": witness " + j["certificate"]["witness"].get<std::string>());
      const auto fixed = fixpoint::fixed_vectors(a, plan.working, chain.m_hat).fixed;
      const auto seen = laurent::restrict_to_window(fixed, plan.working, plan.report);
      if (!(seen == second_component(plan.report, a.field()))) {
        r.fail(name + ": fixed space on " + window_text(plan.report) + " is not {0} x F_p((t))");
      }
    }
    if (name == "dropping-tap" && j["chain"]["m_hat_is_b"].get<bool>()) r.fail("dropping-tap: M = B reported");
  }
  if (r.ok) r.detail = "4 families certified; fixed spaces of tap and dropping-tap exact on the report window";
  return r;
}

void check_chain(const action::Action& a, const std::string& label, Result& r) {
  const auto plan = fixpoint::plan_window(a, {4, 3, 0, {}});
  std::optional<fixpoint::InvariantChain> found;
  try {
    found = fixpoint::m_ell_chain(a, 3, plan.working);
  } catch (const Error& e) {
    r.fail(label + ": " + e.what());
    return;
  }
  const auto& chain = *found;
  const auto f = a.field();
  const auto& w = chain.window;
  const auto t_b = laurent::exponent_floor_subspace(w, f, 1);
  for (std::size_t i = 0; i < chain.rows.size(); ++i) {
    const auto& m = chain.rows[i].m_ell;
    if (i > 0 && !linalg::contains(chain.rows[i - 1].m_ell, m)) r.fail(label + ": not nested");
    if (!linalg::contains(chain.b_image, m)) r.fail(label + ": leaves B");
    if (linalg::contains(t_b, m)) r.fail(label + ": misses S");
  }
  Subspace meet = chain.b_image;
  for (const auto& row : chain.rows) meet = linalg::intersect(meet, row.m_ell);
  if (!(meet == chain.m_hat)) r.fail(label + ": m_hat is not the intersection");
  const auto tm = linalg::image(laurent::shift_matrix(w, f, 1), chain.m_hat);
  if (!linalg::contains(chain.m_hat, tm)) r.fail(label + ": t M not inside M");
}

Result chain_invariants() {
  Result r;
  for (const auto& name : families::names()) check_chain(family(name), name, r);
  Rng rng(5);
  for (int i = 0; i < 25; ++i) {
    const PrimeField f(i % 3 == 2 ? 3 : 2);
    const auto a = action::random_action(rng, f, static_cast<std::size_t>(rng.range(1, 3)), 4, 2);
    check_chain(a, "random " + std::to_string(i), r);
  }
  if (r.ok) r.detail = "4 families + 25 random actions";
  return r;
}

Result oracle_equivalence() {
  Result r;
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const PrimeField f(i % 2 == 0 ? 2 : 3);
    const auto dim = static_cast<std::size_t>(rng.range(1, f.p() == 2 ? 14 : 8));
    const auto rep = replab::random_rep(rng, f, dim, static_cast<std::size_t>(rng.range(1, 3)));
    if (!(replab::fixed_space(rep) == oracle::brute_fixed(rep.generators(), dim, f))) {
      r.fail("fixed_space differs from enumeration at rep " + std::to_string(i));
    }
  }
  int actions = 0;
  for (int i = 0; i < 50; ++i) {
    const PrimeField f(i % 2 == 0 ? 2 : 3);
    const std::size_t cap = f.p() == 2 ? 6 : 4;
    const auto d = static_cast<std::size_t>(rng.range(1, 3));
    const auto a = action::random_action(rng, f, d, 4, 1);
    const int ell = rng.range(0, 1);
    const int lo = -(ell + a.drop_bound());
    const int width = std::max(1, static_cast<int>(cap / d));
    const LatticeWindow w(lo, lo + width, d);
    try {
      const auto gens = action::generator_matrices(a, ell, w).matrices();
      const auto b = laurent::exponent_floor_subspace(w, f, 0);
      if (!(fixpoint::max_invariant_subspace(gens, w, b) == oracle::brute_max_invariant(gens, w.dim(), f, b))) {
        r.fail("max_invariant_subspace differs from enumeration at action " + std::to_string(i));
      }
      ++actions;
    } catch (const Error& e) {
      r.fail("action " + std::to_string(i) + " on " + window_text(w) + ": " + e.what());
    }
  }
  if (r.ok) r.detail = "100 reps, " + std::to_string(actions) + " actions";
  return r;
}

Result scaling_intertwiner() {
  Result r;
  Rng rng(7);
  for (const auto& name : families::names()) {
    const auto a = family(name);
    for (const auto& [x, u] : samples_for(a, rng, 100)) {
      const auto base = action::apply_phi(a, x, u);
      for (int n = 1; n <= 5; ++n) {
        const auto lhs = action::apply_phi(a, laurent::t_shift(x, n), laurent::t_shift(u, n));
        if (!(lhs == laurent::t_shift(base, n))) r.fail(name + ": n = " + std::to_string(n));
      }
    }
  }
  if (r.ok) r.detail = "4 families x 100 samples x n = 1..5";
  return r;
}

Result parser_round_trip() {
  Result r;
  Rng rng(8);
  const std::uint32_t primes[] = {2, 3, 5, 7};
  for (int i = 0; i < 500; ++i) {
    const PrimeField f(primes[i % 4]);
    const int lo = rng.range(-6, 4);
    const auto s = random_series(rng, f, lo, lo + rng.range(0, 9));
    if (!(laurent::parse_series(laurent::format_series(s), f, 0) == s)) r.fail("round trip of " + laurent::format_series(s));
  }
  struct Variant {
    const char* text;
    std::uint32_t p;
    const char* expected;
  };
  const Variant variants[] = {
      {"1+t", 3, "1 + t + O(t^5)"},
      {"  1 +   t  ", 3, "1 + t + O(t^5)"},
      {"t + 1", 3, "1 + t + O(t^5)"},
      {"2t", 3, "2*t + O(t^5)"},
      {"2 * t", 3, "2*t + O(t^5)"},
      {"t^1", 3, "t + O(t^5)"},
      {"t^0", 3, "1 + O(t^5)"},
      {"1*t^0", 3, "1 + O(t^5)"},
      {"4*t^2", 3, "t^2 + O(t^5)"},
      {"3 + t", 3, "t + O(t^5)"},
      {"t + t", 3, "2*t + O(t^5)"},
      {"t^2 + 2*t^2", 3, "0 + O(t^5)"},
      {"0", 2, "0 + O(t^5)"},
      {"0*t", 2, "0 + O(t^5)"},
      {"00", 2, "0 + O(t^5)"},
      {"t^7", 2, "0 + O(t^5)"},
      {"t^-2 + O(t^0)", 2, "t^-2 + O(t^0)"},
      {"1 + O(t^-1)", 2, "0 + O(t^-1)"},
      {"5*t^-3 + 1 + O(t^2)", 3, "2*t^-3 + 1 + O(t^2)"},
      {"t^+2", 5, "t^2 + O(t^5)"},
      {"t^ -1", 5, "t^-1 + O(t^5)"},
      {"2 * t ^ 3", 5, "2*t^3 + O(t^5)"},
      {"t^3 + t^1 + t^2", 2, "t + t^2 + t^3 + O(t^5)"},
      {"1 + O(t^ 4 )", 2, "1 + O(t^4)"},
      {"10*t", 3, "t + O(t^5)"},
      {"t^-1+t^-1+t^-1", 3, "0 + O(t^5)"},
      {"2*t^-0", 3, "2 + O(t^5)"},
      {"6*t^-1 + 13 + O(t^3)", 7, "6*t^-1 + 6 + O(t^3)"},
      {"t + 2*t^-1 + O(t^2)", 3, "2*t^-1 + t + O(t^2)"},
      {"1 + t^2 + O(t^5)", 2, "1 + t^2 + O(t^5)"},
  };
  static_assert(std::size(variants) == 30);
  for (const auto& v : variants) {
    try {
      const auto got = laurent::format_series(laurent::parse_series(v.text, PrimeField(v.p), 5));
      if (got != v.expected) r.fail(std::string("\"") + v.text + "\" gave \"" + got + "\"");
    } catch (const Error& e) {
      r.fail(std::string("\"") + v.text + "\": " + e.what());
    }
  }
  if (r.ok) r.detail = "500 round trips, 30 variants";
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  return {std::istreambuf_iterator<char>(f), {}};
}

Result determinism(const std::filesystem::path& dir) {
  Result r;
  int pairs = 0;
  for (const auto& name : families::names()) {
    const std::string cfg = (dir / (name + ".yaml")).string();
    run_cli({"gen-example", name, "--out", cfg});
    for (const std::string verb : {"validate", "find-fixed", "invariant-chain", "lemma-check", "gen-example"}) {
      std::vector<std::string> base{verb};
      if (verb == "gen-example") {
        base.push_back(name);
      } else {
        base.insert(base.end(), {"--config", cfg, "--seed", "42"});
      }
      std::string first;
      for (int run = 0; run < 2; ++run) {
        const auto path = dir / (name + "-" + verb + "-" + std::to_string(run) + ".json");
        auto args = base;
        args.insert(args.end(), {"--json", path.string()});
        run_cli(args);
        const auto text = slurp(path);
        if (text.empty()) r.fail(verb + " " + name + ": no report");
        if (run == 0) first = text;
        else if (text != first) r.fail(verb + " " + name + ": reports differ");
      }
      ++pairs;
    }
  }
  if (r.ok) r.detail = std::to_string(pairs) + " pipelines run twice, byte-identical";
  return r;
}

}  // namespace

int main() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "fpa-acceptance";
  fs::create_directories(dir);

  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"lemma bound", lemma_bound},
      {"filtration law", filtration_law},
      {"equivariance identity", equivariance},
      {"fixed point instances", [&] { return fixed_point_instances(dir); }},
      {"chain invariants", chain_invariants},
      {"oracle equivalence", oracle_equivalence},
      {"scaling intertwiner", scaling_intertwiner},
      {"parser round trip", parser_round_trip},
      {"determinism", [&] { return determinism(dir); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Result res;
    try {
      res = criteria[i].second();
    } catch (const std::exception& e) {
      res.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << (res.ok ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": " << res.detail << " ("
         << secs << " s)";
    std::cout << line.str() << std::endl;
    failed += res.ok ? 0 : 1;
  }
  fs::remove_all(dir);
  return failed == 0 ? 0 : 1;
}
