#include "fpa/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "fpa/action.hpp"
#include "fpa/config.hpp"
#include "fpa/families.hpp"
#include "fpa/fixpoint.hpp"
#include "fpa/oracle.hpp"
#include "fpa/random.hpp"
#include "fpa/replab.hpp"

namespace fpa::cli {

using nlohmann::json;

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::Io:
    case ErrorKind::MalformedSpec:
    case ErrorKind::UnknownExample:
    case ErrorKind::InvalidModulus:
      return kInputFailure;
    case ErrorKind::WindowTooNarrow:
    case ErrorKind::EmptyFixedSpace:
      return kWindowFailure;
    default:
      return kValidationFailure;
  }
}

namespace {

constexpr std::size_t kEquivarianceSamples = 64;

struct Options {
  std::string verb;
  std::string config_path;
  std::string json_path;
  std::string out_path;
  std::string example;
  std::string window;
  int precision = 0;
  int l_max = 0;
  int n_max = 0;
  std::uint64_t seed = 1;
  bool oracle = false;
  bool has_precision = false;
  bool has_l_max = false;
  bool has_n_max = false;
  bool has_window = false;
};

/// A failure that is a finding rather than an exception: report it, set the code.
struct Outcome {
  int code = kSuccess;
  std::string reason;
};

json window_json(const laurent::LatticeWindow& w) { return json::array({w.lo(), w.hi()}); }

std::string window_text(const laurent::LatticeWindow& w) {
  return "[" + std::to_string(w.lo()) + ", " + std::to_string(w.hi()) + ")";
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

json action_json(const action::ActionSpec& s) {
  json entries = json::array();
  for (const auto& e : s.seed.entries()) {
    entries.push_back({{"in", {e.in.comp + 1, e.in.exp}}, {"out", {e.out.comp + 1, e.out.exp}}, {"coeff", e.coeff}});
  }
  return {{"p", s.field.p()}, {"d", s.d}, {"label", s.label}, {"seed", entries}};
}

config::RunConfig resolve_config(const Options& o) {
  config::RunConfig c = config::load_config(o.config_path);
  if (o.has_precision) c.precision = o.precision;
  if (o.has_l_max) c.l_max = o.l_max;
  if (o.has_n_max) c.n_max = o.n_max;
  if (o.has_window) c.window = config::parse_window(o.window);
  if (c.precision < 1) throw Error(ErrorKind::MalformedSpec, "precision must be at least 1");
  if (c.l_max < 0) throw Error(ErrorKind::MalformedSpec, "l_max must be nonnegative");
  if (c.n_max < 1) throw Error(ErrorKind::MalformedSpec, "n_max must be at least 1");
  return c;
}

void check_window_dim(const fixpoint::WindowPlan& plan) {
  if (plan.working.dim() > config::kMaxWindowDim) {
    throw Error(ErrorKind::MalformedSpec, "window " + window_text(plan.working) + " has dimension " +
                                              std::to_string(plan.working.dim()) + " > " +
                                              std::to_string(config::kMaxWindowDim));
  }
}

json plan_json(const fixpoint::WindowPlan& plan) {
  return {{"working", window_json(plan.working)}, {"report", window_json(plan.report)}, {"widened", plan.widened}};
}

/// Runs `body` on the planned window; in auto mode a too-narrow window is
/// retried once with doubled margins.
template <typename Body>
fixpoint::WindowPlan with_window(const action::Action& a, const fixpoint::WindowRequest& req, Body&& body) {
  auto plan = fixpoint::plan_window(a, req);
  check_window_dim(plan);
  try {
    body(plan);
    return plan;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::WindowTooNarrow || req.explicit_window) throw;
  }
  plan = fixpoint::widen(a, req);
  check_window_dim(plan);
  body(plan);
  return plan;
}

json chain_json(const fixpoint::InvariantChain& chain) {
  json rows = json::array();
  for (const auto& r : chain.rows) {
    rows.push_back({{"ell", r.ell},
                    {"dim", r.m_ell.dim()},
                    {"generators", r.generators},
                    {"nested", r.nested},
                    {"inside_b", r.inside_b},
                    {"meets_s", r.meets_s}});
  }
  return {{"b_dim", chain.b_image.dim()},
          {"rows", rows},
          {"m_hat_dim", chain.m_hat.dim()},
          {"m_hat_is_b", chain.m_hat == chain.b_image},
          {"l_stable", chain.l_stable},
          {"l_requested", chain.l_requested},
          {"t_stable", chain.t_stable}};
}

/// Oracle cross-check of M (and optionally the fixed space) on the chain window.
json oracle_json(const action::Action& a, const fixpoint::InvariantChain& chain,
                 const std::optional<linalg::Subspace>& fixed, Outcome& outcome) {
  json o;
  const auto& w = chain.window;
  try {
    const auto gens = action::generator_matrices(a, chain.rows.back().ell, w).matrices();
    const auto brute = oracle::brute_max_invariant(gens, w.dim(), a.field(), chain.b_image);
    o["max_invariant"] = brute == chain.m_hat ? "match" : "mismatch";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExceeded) throw;
    o["max_invariant"] = "skipped";
  }
  if (fixed) {
    try {
      const auto gens = action::window_generators(a, w).matrices();
      o["fixed"] = oracle::brute_fixed(gens, w.dim(), a.field()) == *fixed ? "match" : "mismatch";
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BudgetExceeded) throw;
      o["fixed"] = "skipped";
    }
  }
  for (const auto& [key, value] : o.items()) {
    if (value == "mismatch") {
      outcome = {kValidationFailure, std::string(error_tag(ErrorKind::InvariantViolation))};
    }
  }
  return o;
}

Outcome cmd_validate(const Options& o, json& report, std::ostream& out) {
  const auto cfg = resolve_config(o);
  const auto& spec = cfg.spec;
  report["action"] = action_json(spec);
  const auto nil = sparse::power_check_nilpotent(spec.seed);
  const auto com = sparse::commutation_range_check(spec.seed);
  json certs;
  certs["order_p"] = {{"ok", nil.nilpotent}, {"entry_counts", nil.entry_counts}};
  if (nil.index) certs["order_p"]["nilpotency_index"] = *nil.index;
  certs["commutation"] = {{"ok", com.ok}, {"span", com.span}, {"offsets_checked", com.offsets_checked}};
  if (com.witness) certs["commutation"]["witness"] = {com.witness->first, com.witness->second};
  report["certificates"] = certs;

  out << "action " << (spec.label.empty() ? "(unlabelled)" : spec.label) << ": p = " << spec.field.p()
      << ", d = " << spec.d << ", " << spec.seed.size() << " seed entries\n";
  out << "order p: " << (nil.nilpotent ? "ok" : "FAILED") << " (entries of N^1..N^" << spec.field.p() << ":";
  for (const auto c : nil.entry_counts) out << " " << c;
  out << ")\n";
  if (!nil.nilpotent) {
    report["witness_power"] = spec.field.p();
    out << "reason: not-order-p, N^" << spec.field.p() << " != 0\n";
    return {kValidationFailure, std::string(error_tag(ErrorKind::NotOrderP))};
  }
  out << "commutation: " << (com.ok ? "ok" : "FAILED") << " (span " << com.span << ")\n";
  if (!com.ok) {
    out << "reason: non-commuting, [N_" << com.witness->first << ", N_" << com.witness->second << "] != 0\n";
    return {kValidationFailure, std::string(error_tag(ErrorKind::NonCommuting))};
  }

  const auto a = action::build_action(spec);
  const auto plan = fixpoint::plan_window(a, {cfg.precision, cfg.l_max, 0, cfg.window});
  json modulus{{"infinite", a.modulus().is_infinite()}};
  json table = json::array();
  if (a.is_trivial()) {
    report["note"] = "trivial action";
    out << "modulus: infinite (trivial action)\n";
  } else {
    modulus["offset"] = *a.modulus().offset();
    out << "modulus: mu(k) = k";
    if (*a.modulus().offset() != 0) out << (*a.modulus().offset() > 0 ? " + " : " - ") << std::abs(*a.modulus().offset());
    out << "\n";
    for (int k = plan.working.lo(); k < plan.working.hi(); ++k) table.push_back({{"k", k}, {"mu", *a.modulus()(k)}});
  }
  modulus["table"] = table;
  report["certificates"]["modulus"] = modulus;

  Rng rng(o.seed);
  std::vector<action::EquivarianceSample> samples;
  const int prec = cfg.precision + a.drop_bound() + 2;
  for (std::size_t i = 0; i < kEquivarianceSamples; ++i) {
    auto x = random_series(rng, spec.field, rng.range(-2, 2), prec);
    auto u = random_vector(rng, spec.field, spec.d, rng.range(-2, 0), prec);
    samples.push_back({std::move(x), std::move(u)});
  }
  const auto eq = action::equivariance_check(a, samples);
  json failures = json::array();
  for (const auto& f : eq.failures) failures.push_back({{"index", f.index}, {"lhs", f.lhs}, {"rhs", f.rhs}});
  report["equivariance"] = {{"samples", eq.samples}, {"failures", failures}, {"ok", eq.ok()}, {"seed", o.seed}};
  out << "equivariance: " << eq.samples << " samples, " << eq.failures.size() << " failures\n";
  if (!eq.ok()) return {kValidationFailure, "equivariance-failure"};
  return {};
}

Outcome cmd_find_fixed(const Options& o, json& report, std::ostream& out) {
  const auto cfg = resolve_config(o);
  report["action"] = action_json(cfg.spec);
  const auto a = action::build_action(cfg.spec);
  const fixpoint::WindowRequest req{cfg.precision, cfg.l_max, 0, cfg.window};
  std::optional<fixpoint::InvariantChain> chain;
  const auto plan = with_window(a, req, [&](const fixpoint::WindowPlan& p) {
    chain = fixpoint::m_ell_chain(a, cfg.l_max, p.working);
    if (cfg.precision > p.working.hi()) {
      throw Error(ErrorKind::WindowTooNarrow, "precision exceeds the window " + window_text(p.working));
    }
  });
  report["window"] = plan_json(plan);
  report["chain"] = chain_json(*chain);
  const auto spaces = fixpoint::fixed_vectors(a, plan.working, chain->m_hat);
  report["fixed"] = {{"dim", spaces.fixed.dim()},
                     {"dim_in_m_hat", spaces.fixed_in_m_hat.dim()},
                     {"report_dim", laurent::restrict_to_window(spaces.fixed, plan.working, plan.report).dim()},
                     {"generator_exponents", spaces.exponents}};
  out << "window " << window_text(plan.working) << (plan.widened ? " (widened)" : "") << ", report window "
      << window_text(plan.report) << "\n";
  out << "M: dim " << chain->m_hat.dim() << " of B image dim " << chain->b_image.dim()
      << (chain->m_hat == chain->b_image ? " (M = B)" : " (M strictly smaller than B)") << "\n";
  out << "fixed space: dim " << spaces.fixed.dim() << ", inside M: " << spaces.fixed_in_m_hat.dim() << "\n";

  Outcome outcome;
  if (o.oracle) report["oracle"] = oracle_json(a, *chain, spaces.fixed, outcome);

  const laurent::LatticeWindow& w = plan.working;
  const json suggested = json::array({w.lo() - static_cast<int>(w.width()), w.hi() + static_cast<int>(w.width())});
  if (spaces.fixed_in_m_hat.dim() == 0) {
    report["suggested_window"] = suggested;
    out << "no fixed vector of M on this window; try --window=" << suggested[0] << ":" << suggested[1] << "\n";
    return {kWindowFailure, std::string(error_tag(ErrorKind::EmptyFixedSpace))};
  }
  const auto cert = fixpoint::extract_witness(a, *chain, cfg.precision);
  json checks = json::array();
  for (const auto& c : cert.checks) checks.push_back({{"k", c.k}, {"fixed", c.fixed}});
  const std::string witness = laurent::format_vector(cert.printed());
  report["certificate"] = {{"witness", witness},
                           {"precision", cert.precision},
                           {"valuation", cert.valuation},
                           {"in_m_hat", cert.in_m_hat},
                           {"outside_t_m_hat", cert.outside_t_m_hat},
                           {"checks", checks},
                           {"valid", cert.valid()}};
  out << "witness: " << witness << "\n";
  out << "certificate: " << (cert.valid() ? "valid" : "INVALID") << ", " << cert.checks.size()
      << " generators checked, in M: " << yes_no(cert.in_m_hat) << ", outside tM: " << yes_no(cert.outside_t_m_hat)
      << "\n";
  if (!cert.valid() && outcome.code == kSuccess) {
    report["suggested_window"] = suggested;
    return {kWindowFailure, std::string(error_tag(ErrorKind::EmptyFixedSpace))};
  }
  return outcome;
}

Outcome cmd_invariant_chain(const Options& o, json& report, std::ostream& out) {
  const auto cfg = resolve_config(o);
  report["action"] = action_json(cfg.spec);
  const auto a = action::build_action(cfg.spec);
  const fixpoint::WindowRequest req{cfg.precision, cfg.l_max, 0, cfg.window};
  std::optional<fixpoint::InvariantChain> chain;
  const auto plan = with_window(a, req, [&](const fixpoint::WindowPlan& p) {
    chain = fixpoint::m_ell_chain(a, cfg.l_max, p.working);
  });
  report["window"] = plan_json(plan);
  report["chain"] = chain_json(*chain);
  out << "window " << window_text(plan.working) << (plan.widened ? " (widened)" : "") << ", B image dim "
      << chain->b_image.dim() << "\n";
  out << "ell  dim  generators  nested  inside-B  meets-S\n";
  for (const auto& r : chain->rows) {
    out << r.ell << "  " << r.m_ell.dim() << "  " << r.generators << "  " << yes_no(r.nested) << "  "
        << yes_no(r.inside_b) << "  " << yes_no(r.meets_s) << "\n";
  }
  out << "M: dim " << chain->m_hat.dim() << ", stable from ell = " << chain->l_stable
      << ", tM inside M: " << yes_no(chain->t_stable) << "\n";
  Outcome outcome;
  if (o.oracle) report["oracle"] = oracle_json(a, *chain, std::nullopt, outcome);
  return outcome;
}

Outcome cmd_lemma_check(const Options& o, json& report, std::ostream& out) {
  const auto cfg = resolve_config(o);
  report["action"] = action_json(cfg.spec);
  const auto a = action::build_action(cfg.spec);
  const fixpoint::WindowRequest req{cfg.precision, cfg.l_max, cfg.n_max, cfg.window};
  std::optional<fixpoint::InvariantChain> chain;
  std::optional<fixpoint::LemmaChain> lemma;
  const auto plan = with_window(a, req, [&](const fixpoint::WindowPlan& p) {
    chain = fixpoint::m_ell_chain(a, cfg.l_max, p.working);
    lemma = fixpoint::lemma_chain_from_action(a, *chain, cfg.n_max);
  });
  const auto probe = replab::dichotomy_probe(lemma->ambient, lemma->chain);
  report["window"] = plan_json(plan);
  json rows = json::array();
  out << "window " << window_text(plan.working) << (plan.widened ? " (widened)" : "") << ", "
      << lemma->ambient.rank() << " generators\n";
  out << "n  dim V_n  dim V_n^G  dim (V_n/V_n^G)^G  bound\n";
  for (std::size_t i = 0; i < probe.rows.size(); ++i) {
    const auto& r = probe.rows[i];
    rows.push_back({{"n", i + 1},
                    {"dim", r.dim},
                    {"fixed_dim", r.fixed_dim},
                    {"quotient_fixed_dim", r.quotient_fixed_dim},
                    {"bound", {{"lhs", r.bound.lhs}, {"rhs", r.bound.rhs()}, {"ok", r.bound.ok}}}});
    out << i + 1 << "  " << r.dim << "  " << r.fixed_dim << "  " << r.quotient_fixed_dim << "  " << r.bound.lhs
        << " >= " << r.bound.rhs() << " " << (r.bound.ok ? "ok" : "FAILED") << "\n";
  }
  report["lemma"] = {{"generators", lemma->ambient.rank()}, {"rows", rows}, {"strict", probe.strict},
                     {"ok", probe.ok()}};
  if (!probe.ok()) return {kValidationFailure, std::string(error_tag(ErrorKind::InvariantViolation))};
  return {};
}

Outcome cmd_gen_example(const Options& o, json& report, std::ostream& out) {
  config::RunConfig c{families::spec(o.example), 4, 3, 4, {}};
  const std::string text = config::render_config(c);
  report["example"] = o.example;
  report["action"] = action_json(c.spec);
  if (o.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(o.out_path);
    if (!(f << text)) throw Error(ErrorKind::Io, "cannot write '" + o.out_path + "'");
    out << "wrote " << o.out_path << "\n";
  }
  return {};
}

void add_common(CLI::App* sub, Options& o, bool lemma) {
  sub->add_option("--config", o.config_path, "Run configuration (YAML)")->required();
  sub->add_option("--precision", o.precision, "Target precision n")->each([&o](const std::string&) {
    o.has_precision = true;
  });
  sub->add_option("--l-max", o.l_max, "Largest ell in the chain")->each([&o](const std::string&) {
    o.has_l_max = true;
  });
  if (lemma) {
    sub->add_option("--n-max", o.n_max, "Largest n in the lemma chain")->each([&o](const std::string&) {
      o.has_n_max = true;
    });
  }
  sub->add_option("--window", o.window, "Working window LO:HI (write --window=LO:HI for negative LO)")
      ->each([&o](const std::string&) { o.has_window = true; });
  sub->add_option("--json", o.json_path, "Write the JSON report here");
  sub->add_option("--seed", o.seed, "Seed for sampled checks");
  sub->add_flag("--oracle", o.oracle, "Cross-check against brute force where budgets allow");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Fixed points of equivariant F_p((t)) actions on finite windows", "fpa"};
  app.require_subcommand(1, 1);
  auto* validate = app.add_subcommand("validate", "Certify an action and sample equivariance");
  auto* find = app.add_subcommand("find-fixed", "Compute M and a certified fixed vector");
  auto* chain = app.add_subcommand("invariant-chain", "Report the chain of maximal invariant subspaces M_ell");
  auto* lemma = app.add_subcommand("lemma-check", "Probe fixed-point bounds along t^-n M / M");
  auto* gen = app.add_subcommand("gen-example", "Write a bundled example configuration");
  add_common(validate, o, false);
  add_common(find, o, false);
  add_common(chain, o, false);
  add_common(lemma, o, true);
  gen->add_option("name", o.example, "trivial | tap | dropping-tap | chain-3")->required();
  gen->add_option("--out", o.out_path, "Output path (default: stdout)");
  gen->add_option("--json", o.json_path, "Write the JSON report here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kInputFailure;
  }
  for (auto* sub : app.get_subcommands()) o.verb = sub->get_name();

  json report{{"schema", 1}, {"command", o.verb}};
  int code = kSuccess;
  try {
    Outcome outcome;
    if (o.verb == "validate") outcome = cmd_validate(o, report, out);
    if (o.verb == "find-fixed") outcome = cmd_find_fixed(o, report, out);
    if (o.verb == "invariant-chain") outcome = cmd_invariant_chain(o, report, out);
    if (o.verb == "lemma-check") outcome = cmd_lemma_check(o, report, out);
    if (o.verb == "gen-example") outcome = cmd_gen_example(o, report, out);
    code = outcome.code;
    report["status"] = code == kSuccess ? "ok" : "failed";
    if (!outcome.reason.empty()) report["reason"] = outcome.reason;
  } catch (const Error& e) {
    code = exit_code_for(e.kind());
    report["status"] = "error";
    report["reason"] = std::string(error_tag(e.kind()));
    report["message"] = e.what();
    err << "error (" << error_tag(e.kind()) << "): " << e.what() << "\n";
  }
  report["exit_code"] = code;

  if (!o.json_path.empty()) {
    std::ofstream f(o.json_path);
    if (!(f << report.dump(2) << "\n")) {
      err << "error (io-error): cannot write '" << o.json_path << "'\n";
      return kInputFailure;
    }
  }
  return code;
}

}  // namespace fpa::cli
