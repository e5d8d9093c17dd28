#include <gtest/gtest.h>

#include "fpa/error.hpp"
#include "fpa/oracle.hpp"
#include "fpa/replab.hpp"
#include "support.hpp"

namespace fpa::replab {
namespace {

using linalg::Subspace;
using linalg::Vector;

const PrimeField F2(2);
const PrimeField F3(3);

Matrix id(PrimeField f, std::size_t n) { return Matrix::identity(f, n); }

TEST(FiniteRep, Validation) {
  EXPECT_THROW(FiniteRep(F2, 2, {id(F2, 3)}), Error);
  EXPECT_THROW(FiniteRep(F3, 2, {jordan_block(F3, 2) * jordan_block(F3, 2) + id(F3, 2)}), Error);
  const Matrix a = Matrix::from_rows(F2, 3, {{1, 1, 0}, {0, 1, 0}, {0, 0, 1}});
  const Matrix b = Matrix::from_rows(F2, 3, {{1, 0, 0}, {0, 1, 1}, {0, 0, 1}});
  try {
    FiniteRep(F2, 3, {a, b});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonCommuting);
  }
}

TEST(FixedSpace, Examples) {
  EXPECT_EQ(fixed_space(FiniteRep(F2, 2, {jordan_block(F2, 2)})), Subspace::span(F2, 2, {{1, 0}}));
  EXPECT_EQ(fixed_space(FiniteRep(F3, 3, {id(F3, 3), id(F3, 3)})), Subspace::full(F3, 3));
  const Matrix j22 = block_diagonal({jordan_block(F2, 2), jordan_block(F2, 2)});
  const auto v = fixed_space(FiniteRep(F2, 4, {j22, id(F2, 4)}));
  EXPECT_EQ(v.dim(), 2u);
  EXPECT_EQ(v, oracle::brute_fixed({j22, id(F2, 4)}, 4, F2));
}

TEST(KernelFiltration, Examples) {
  const auto a = kernel_filtration(jordan_block(F3, 3), 3);
  EXPECT_EQ(a.dims, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_TRUE(a.concave);
  EXPECT_TRUE(a.bound_ok);
  EXPECT_EQ(kernel_filtration(id(F2, 5), 2).dims, (std::vector<std::size_t>{0, 5, 5}));
  const auto c = kernel_filtration(block_diagonal({jordan_block(F2, 2), jordan_block(F2, 2)}), 2);
  EXPECT_EQ(c.dims, (std::vector<std::size_t>{0, 2, 4}));
  EXPECT_EQ(c.differences, (std::vector<std::size_t>{2, 2}));
  EXPECT_THROW(kernel_filtration(jordan_block(F2, 3), 2), Error);
}

TEST(BoundCheck, Examples) {
  const auto a = fixed_bound_check(FiniteRep(F2, 2, {jordan_block(F2, 2)}));
  EXPECT_TRUE(a.ok);
  EXPECT_EQ(a.lhs, 1u);
  EXPECT_EQ(a.rhs(), "2/2");
  const auto b = fixed_bound_check(FiniteRep(F3, 4, {id(F3, 4), id(F3, 4), id(F3, 4)}));
  EXPECT_TRUE(b.ok);
  EXPECT_EQ(b.lhs, 4u);
  EXPECT_EQ(b.rhs(), "4/27");
  const Matrix g1 = block_diagonal({jordan_block(F2, 2), jordan_block(F2, 2)});
  const Matrix g2 = Matrix::from_rows(F2, 4, {{1, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  const FiniteRep rep(F2, 4, {g1, g2});
  const auto c = fixed_bound_check(rep);
  EXPECT_TRUE(c.ok);
  EXPECT_EQ(c.lhs, oracle::brute_fixed({g1, g2}, 4, F2).dim());
  EXPECT_GE(c.lhs, 1u);
  EXPECT_EQ(c.rhs(), "4/4");
}

TEST(QuotientRep, Examples) {
  const FiniteRep j2(F2, 2, {jordan_block(F2, 2)});
  const auto q = quotient_rep(j2, fixed_space(j2));
  EXPECT_EQ(q.dim(), 1u);
  EXPECT_TRUE(q.generators()[0].is_identity());
  const auto same = quotient_rep(j2, Subspace::zero(F2, 2));
  EXPECT_EQ(same.generators(), j2.generators());
  const FiniteRep j3(F3, 3, {jordan_block(F3, 3)});
  const auto q3 = quotient_rep(j3, fixed_space(j3));
  EXPECT_EQ(q3.dim(), 2u);
  EXPECT_EQ(q3.generators()[0], jordan_block(F3, 2));
  EXPECT_THROW(quotient_rep(j2, Subspace::span(F2, 2, {{0, 1}})), Error);
  EXPECT_EQ(restrict_rep(j3, fixed_space(j3)).dim(), 1u);
}

TEST(DichotomyProbe, TrivialChain) {
  const std::size_t n_max = 4;
  const FiniteRep amb(F2, 2 * n_max, {id(F2, 2 * n_max)});
  std::vector<Subspace> chain;
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::vector<Vector> basis;
    for (std::size_t i = 0; i < 2 * n; ++i) {
      Vector e(2 * n_max, 0);
      e[i] = 1;
      basis.push_back(e);
    }
    chain.push_back(Subspace::span(F2, 2 * n_max, basis));
  }
  const auto r = dichotomy_probe(amb, chain);
  ASSERT_EQ(r.rows.size(), n_max);
  for (std::size_t n = 0; n < n_max; ++n) {
    EXPECT_EQ(r.rows[n].dim, 2 * (n + 1));
    EXPECT_EQ(r.rows[n].fixed_dim, 2 * (n + 1));
    EXPECT_EQ(r.rows[n].quotient_fixed_dim, 0u);
  }
  EXPECT_TRUE(r.strict);
  EXPECT_TRUE(r.ok());
  std::vector<Subspace> bad{chain[1], chain[0]};
  EXPECT_THROW(dichotomy_probe(amb, bad), Error);
}

// Random commuting unipotent tuples.

class RepProperty : public ::testing::TestWithParam<std::uint32_t> {};

TEST_P(RepProperty, BoundFiltrationAndOracle) {
  const PrimeField f(GetParam());
  Rng rng(400 + GetParam());
  const std::size_t oracle_dim = f.p() == 2 ? 10 : (f.p() == 3 ? 6 : 4);
  for (int i = 0; i < 40; ++i) {
    const auto dim = static_cast<std::size_t>(rng.range(1, 12));
    const auto r = static_cast<std::size_t>(rng.range(1, 3));
    const FiniteRep rep = random_rep(rng, f, dim, r);
    EXPECT_EQ(rep.rank(), r);
    for (const auto& g : rep.generators()) {
      EXPECT_TRUE(linalg::power(g, f.p()).is_identity());
      for (const auto& h : rep.generators()) EXPECT_EQ(g * h, h * g);
      const auto fl = kernel_filtration(g, f.p());
      EXPECT_TRUE(fl.concave);
      EXPECT_TRUE(fl.bound_ok);
      EXPECT_EQ(fl.dims.back(), dim);
    }
    const auto fixed = fixed_space(rep);
    EXPECT_TRUE(fixed_bound_check(rep).ok);
    EXPECT_TRUE(is_invariant(rep, fixed));
    if (dim <= oracle_dim) EXPECT_EQ(fixed, oracle::brute_fixed(rep.generators(), dim, f));
    const auto q = quotient_rep(rep, fixed);
    EXPECT_EQ(q.dim() + fixed.dim(), dim);
    if (dim > 0 && fixed.dim() < dim) EXPECT_GE(fixed_space(q).dim(), 1u);
  }
}

INSTANTIATE_TEST_SUITE_P(Primes, RepProperty, ::testing::Values(2u, 3u, 5u));

}  // namespace
}  // namespace fpa::replab
