#include <gtest/gtest.h>

#include "fpa/error.hpp"
#include "fpa/random.hpp"
#include "fpa/sparse.hpp"
#include "support.hpp"

namespace fpa::sparse {
namespace {

const PrimeField F2(2);
const PrimeField F3(3);

// Components 0-based here: "1@0" in literals is {0, 0}.
TapEntry tap(std::size_t ic, int ie, std::size_t oc, int oe, Residue c = 1) { return {{ic, ie}, {oc, oe}, c}; }

SparsePerturbation sp(PrimeField f, std::size_t d, std::vector<TapEntry> e) { return SparsePerturbation(f, d, std::move(e)); }

const SparsePerturbation E = sp(F2, 2, {tap(0, 0, 1, 0)});
const SparsePerturbation Edrop = sp(F2, 2, {tap(0, 0, 1, -1)});

TEST(Perturbation, Normalizes) {
  const auto n = sp(F3, 2, {tap(0, 0, 1, 0, 1), tap(0, 0, 1, 0, 2), tap(1, 2, 0, 1, 1)});
  ASSERT_EQ(n.size(), 1u);
  EXPECT_EQ(n.entries()[0], tap(1, 2, 0, 1, 1));
  EXPECT_THROW(sp(F2, 2, {tap(0, 0, 2, 0)}), Error);
  EXPECT_EQ(Edrop.drop(), 1);
  EXPECT_EQ(Edrop.descent(), 1);
  EXPECT_EQ(E.span(), 0);
}

TEST(ConjugateByT, Examples) {
  EXPECT_EQ(conjugate_by_t(E, 1), sp(F2, 2, {tap(0, 1, 1, 1)}));
  EXPECT_EQ(conjugate_by_t(E, 0), E);
  EXPECT_TRUE(conjugate_by_t(SparsePerturbation(F2, 2), 5).empty());
}

TEST(Compose, Examples) {
  EXPECT_TRUE(compose(E, E).empty());
  EXPECT_TRUE(compose(E, SparsePerturbation(F2, 2)).empty());
  const auto a = sp(F3, 2, {tap(0, 0, 1, 3, 2)});
  const auto b = sp(F3, 2, {tap(1, 3, 0, 5, 2)});
  EXPECT_EQ(compose(b, a), sp(F3, 2, {tap(0, 0, 0, 5, 1)}));
  // Check against application to the basis vector (1, 0).
  const laurent::SeriesVector e1({laurent::LaurentSeries::monomial(F3, 1, 0, 9),
                                  laurent::LaurentSeries::zero(F3, 9)});
  const auto through = apply(Automorphism(b), apply(Automorphism(a), e1));
  EXPECT_EQ(laurent::coeff_tap(through, 0, 5), 1u);
}

TEST(Nilpotency, Examples) {
  EXPECT_TRUE(power_check_nilpotent(E).nilpotent);
  EXPECT_EQ(power_check_nilpotent(E).index, 2u);
  const auto idem = sp(F2, 2, {tap(0, 0, 0, 0)});
  EXPECT_FALSE(power_check_nilpotent(idem).nilpotent);
  EXPECT_TRUE(power_check_nilpotent(SparsePerturbation(F2, 2)).nilpotent);
  EXPECT_THROW(SeedAutomorphism::certify(idem), Error);
}

TEST(Commutation, Examples) {
  EXPECT_TRUE(commutation_range_check(E).ok);
  EXPECT_TRUE(commutation_range_check(SparsePerturbation(F2, 2)).ok);
  // A pair that only fails at offset 1: N_0 N_1 reads 1@1 after writing it.
  const auto shifted = sp(F2, 1, {tap(0, 0, 0, 1)});
  const auto r = commutation_range_check(shifted);
  EXPECT_FALSE(r.ok);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(std::abs(r.witness->second - r.witness->first), 1);
  try {
    SeedAutomorphism::certify(shifted);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonCommuting);
  }
}

TEST(Commutation, SwapPairIsCaughtByNilpotency) {
  const auto swap = sp(F2, 2, {tap(0, 0, 1, 0), tap(1, 0, 0, 0)});
  // All exponents agree, so only offset 0 is examined and N commutes with itself.
  EXPECT_TRUE(commutation_range_check(swap).ok);
  EXPECT_FALSE(power_check_nilpotent(swap).nilpotent);
  try {
    SeedAutomorphism::certify(swap);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotOrderP);
  }
}

TEST(Modulus, Examples) {
  EXPECT_EQ(derive_modulus(E)(5), 5);
  EXPECT_EQ(derive_modulus(Edrop)(5), 4);
  EXPECT_EQ(derive_modulus(Edrop).first_at_least(3), 4);
  EXPECT_TRUE(derive_modulus(SparsePerturbation(F2, 2)).is_infinite());
}

TEST(InducedMatrix, Examples) {
  const LatticeWindow w(0, 1, 2);
  EXPECT_TRUE(induced_matrix(Automorphism::identity(F2, 2), w).is_identity());
  EXPECT_EQ(induced_matrix(Automorphism(E), w), linalg::Matrix::from_rows(F2, 2, {{1, 0}, {1, 1}}));
  try {
    induced_matrix(Automorphism(Edrop), w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WindowTooNarrow);
  }
  const auto m = induced_matrix(Automorphism(Edrop), LatticeWindow(-1, 1, 2));
  EXPECT_EQ(m.rows(), 4u);
  EXPECT_FALSE(m.is_identity());
}

TEST(Classify, Kinds) {
  const LatticeWindow w(0, 2, 2);
  EXPECT_EQ(classify(E, w).fit, WindowFit::Visible);
  EXPECT_EQ(classify(conjugate_by_t(E, 2), w).fit, WindowFit::Identity);
  EXPECT_EQ(classify(Edrop, w).fit, WindowFit::LeaksBelow);
  EXPECT_EQ(classify(conjugate_by_t(sp(F2, 2, {tap(0, 1, 1, 0)}), 1), w).fit, WindowFit::Straddles);
}

TEST(Inverse, OrderP) {
  const auto n = sp(F3, 3, {tap(0, 0, 1, 0), tap(1, 0, 2, 0)});
  const Automorphism g(n);
  EXPECT_TRUE(compose(g, inverse(g)).is_identity());
  EXPECT_TRUE(power(g, 3).is_identity());
  EXPECT_FALSE(power(g, 2).is_identity());
}

TEST(FormatEntry, OneBased) { EXPECT_EQ(format_entry(tap(0, 0, 1, -1)), "{in: [1, 0], out: [2, -1], coeff: 1}"); }

TEST(Apply, HonestPrecision) {
  // Reading 1@3 from a vector known mod t^2 leaves the written component unknown from t^0 on.
  const auto n = sp(F2, 2, {tap(0, 3, 1, 0)});
  const laurent::SeriesVector u({laurent::LaurentSeries::monomial(F2, 1, 0, 2),
                                 laurent::LaurentSeries::monomial(F2, 1, 0, 2)});
  EXPECT_LE(apply(Automorphism(n), u).prec(), 0);
}

// Random perturbations: composition against direct application on random vectors.
TEST(SparseProperty, ComposeMatchesApplication) {
  for (std::uint32_t p : {2u, 3u}) {
    const PrimeField f(p);
    Rng rng(100 + p);
    for (int i = 0; i < 100; ++i) {
      const std::size_t d = static_cast<std::size_t>(rng.range(1, 3));
      auto random_n = [&] {
        std::vector<TapEntry> es;
        const int m = rng.range(0, 3);
        for (int j = 0; j < m; ++j) {
          es.push_back(tap(rng.below(d), rng.range(-2, 2), rng.below(d), rng.range(-2, 2),
                           static_cast<Residue>(rng.range(1, static_cast<int>(p) - 1))));
        }
        return SparsePerturbation(f, d, es);
      };
      const auto a = random_n(), b = random_n();
      const auto u = random_vector(rng, f, d, -3, 8);
      // (id + a)(id + b) = id + a + b + ab.
      const auto lhs = apply(Automorphism(a), apply(Automorphism(b), u));
      const auto rhs = apply(Automorphism(add(add(a, b), compose(a, b))), u);
      const int q = std::min(lhs.prec(), rhs.prec());
      EXPECT_EQ(lhs.truncated(q), rhs.truncated(q));
      const int k = rng.range(-3, 3);
      const auto c1 = apply(Automorphism(conjugate_by_t(a, k)), u);
      const auto c2 = laurent::t_shift(apply(Automorphism(a), laurent::t_shift(u, -k)), k);
      const int q2 = std::min(c1.prec(), c2.prec());
      EXPECT_EQ(c1.truncated(q2), c2.truncated(q2));
    }
  }
}

}  // namespace
}  // namespace fpa::sparse
