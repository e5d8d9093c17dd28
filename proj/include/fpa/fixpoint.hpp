#pragma once

// Maximal invariant subspaces of B on lattice windows, fixed vectors, and the
// quotient chain t^-n M / M handed to the lemma probe.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fpa/action.hpp"
#include "fpa/laurent.hpp"
#include "fpa/linalg.hpp"
#include "fpa/replab.hpp"

namespace fpa::fixpoint {

using laurent::LatticeWindow;
using laurent::SeriesVector;
using linalg::Matrix;
using linalg::Subspace;

/// `working` hosts every computation; `report` is the part of it on which the
/// results are unaffected by generators cut off at the window edges.
struct WindowPlan {
  LatticeWindow working;
  LatticeWindow report;
  bool widened = false;
};

struct WindowRequest {
  int precision = 4;
  int l_max = 3;
  int n_max = 0;
  std::optional<std::pair<int, int>> explicit_window;
};

/// Beyond this ell every new g_k reads only negative exponents, so it is the
/// identity on B and M_ell no longer changes: max(0, largest input exponent).
int stabilization_ell(const action::Action& a) noexcept;

/// Auto mode: working = [-(depth + drop), precision + top) with
/// depth = max(l_max, n_max, stabilization_ell), top = max(drop, descent),
/// report = [-depth, precision).
/// Explicit mode shrinks the given window by the same margins to get `report`.
/// Throws WindowTooNarrow if the report window would be empty.
WindowPlan plan_window(const action::Action& a, const WindowRequest& req);
/// The auto plan with both margins doubled.
WindowPlan widen(const action::Action& a, const WindowRequest& req);

/// Greatest N inside b_image with g(N) = N for every generator, by iterating
/// N <- N ∩ ⋂_g (g(N) ∩ g^-1(N)) from b_image. Throws SingularGenerator.
Subspace max_invariant_subspace(const std::vector<Matrix>& gens, const LatticeWindow& w, const Subspace& b_image);

struct ChainRow {
  int ell = 0;
  Subspace m_ell;
  std::size_t generators = 0;
  bool nested = true;
  bool inside_b = true;
  bool meets_s = true;
};

struct InvariantChain {
  LatticeWindow window;
  Subspace b_image;
  std::vector<ChainRow> rows;
  Subspace m_hat;
  /// The ell asked for; rows continue up to stabilization_ell when it is larger.
  int l_requested = 0;
  int l_stable = 0;
  bool t_stable = true;
};

/// M_ell for ell = 0 .. max(l_max, stabilization_ell) on one window, so that
/// m_hat is the full intersection. Then checks nesting, containment
/// in B, the S-intersection and t M ⊆ M. Throws InvariantViolation on failure.
InvariantChain m_ell_chain(const action::Action& a, int l_max, const LatticeWindow& w, bool parallel = true);

struct FixedSpaces {
  Subspace fixed;
  Subspace fixed_in_m_hat;
  std::vector<int> exponents;
};

/// Common kernel of T_k - id over every generator well defined on the window.
FixedSpaces fixed_vectors(const action::Action& a, const LatticeWindow& w, const Subspace& m_hat);

struct GeneratorCheck {
  int k = 0;
  bool fixed = false;
};

struct FixedPointCertificate {
  SeriesVector witness;
  /// Window coordinates of the chosen vector.
  linalg::Vector coords;
  int precision = 0;
  int valuation = 0;
  std::vector<GeneratorCheck> checks;
  bool in_m_hat = false;
  bool outside_t_m_hat = false;

  bool valid() const noexcept;
  /// The witness known mod t^precision.
  SeriesVector printed() const { return witness.truncated(precision); }
};

/// Picks the first fixed vector of M (preferring ones outside tM, then lower
/// valuation, then canonical basis order) whose lift passes a direct check
/// (phi(t^k) w ≡ w mod t^precision) and returns its certificate; if no
/// candidate passes, the certificate of the first one. Throws EmptyFixedSpace
/// when the window shows no nonzero fixed vector in M.
FixedPointCertificate extract_witness(const action::Action& a, const InvariantChain& chain, int precision);

struct LemmaChain {
  replab::FiniteRep ambient;
  /// V_n for n = 1 .. n_max in the coordinates of V_{n_max}.
  std::vector<Subspace> chain;
};

/// V_n = (t^-n M + M) / M with the induced action of the window generators
/// (identity and repeated induced generators dropped).
/// Throws WindowTooNarrow when t^-n M does not fit and NonInvariant on failure.
LemmaChain lemma_chain_from_action(const action::Action& a, const InvariantChain& chain, int n_max);

}  // namespace fpa::fixpoint
