#include <gtest/gtest.h>

#include <random>

#include "chiral/conjecture.hpp"

using namespace chiral;

namespace chiral {
void PrintTo(const ProjElement<Field>& g, std::ostream* os) { *os << to_string(g); }
}  // namespace chiral

namespace {

// x^n by plain square-and-multiply, independent of the field's pow.
Field::Elem power(const Field& f, Field::Elem x, u128 n) {
  auto r = f.one();
  while (n) {
    if (n & 1) r = f.mul(r, x);
    x = f.mul(x, x);
    n >>= 1;
  }
  return r;
}

bool euler_square(const Field& f, const Field::Elem& x) {
  return f.is_zero(x) || f.is_one(power(f, x, (f.q() - 1) / 2));
}

std::vector<ConjectureWitness> witnesses(const ConjectureLab& lab, std::size_t n, u64 seed) {
  std::mt19937_64 rng(seed);
  std::vector<ConjectureWitness> out;
  while (out.size() < n) {
    auto j1 = detail::random_primitive(lab.f1(), rng), j2 = detail::random_primitive(lab.f2(), rng);
    if (is_square(lab.big(), omega_of(lab, j1, j2))) out.push_back(make_witness(lab, j1, j2));
  }
  return out;
}

}  // namespace

TEST(Omega, Identities) {
  Field f(make_field_spec(3, 15));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    auto w = detail::random_nonzero(f, rng);
    auto w2 = f.mul(w, w);
    EXPECT_EQ(omega_formula(f, w, w), f.mul(w2, f.sub(w2, f.scalar(8))));
    EXPECT_EQ(omega_formula(f, w, f.zero()), f.neg(f.mul(f.scalar(4), w2)));
    auto v = detail::random_nonzero(f, rng);
    EXPECT_EQ(omega_formula(f, w, v), omega_formula(f, v, w));
  }
}

TEST(Omega, OfPrimitivePairMatchesDirectFormula) {
  ConjectureLab lab(3, 3, 5);
  const auto& F = lab.big();
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    auto j1 = detail::random_primitive(lab.f1(), rng), j2 = detail::random_primitive(lab.f2(), rng);
    auto x1 = lab.embed1(j1), x2 = lab.embed2(j2);
    auto w1 = F.add(x1, F.inv(x1)), w2 = F.add(x2, F.inv(x2));
    // w1 lies in GF(3^3): fixed by the cube of Frobenius.
    EXPECT_EQ(F.frobenius(w1, 3), w1);
    EXPECT_EQ(F.frobenius(w2, 5), w2);
    auto a = F.mul(w1, w1), b = F.mul(w2, w2);
    auto direct = F.sub(F.sub(F.mul(a, b), F.mul(F.scalar(4), a)), F.mul(F.scalar(4), b));
    EXPECT_EQ(omega_of(lab, j1, j2), direct);
  }
}

TEST(Omega, SquareTestMatchesEulerCriterion) {
  ConjectureLab lab(3, 3, 5);
  std::mt19937_64 rng(3);
  int squares = 0;
  for (int i = 0; i < 200; ++i) {
    auto j1 = detail::random_primitive(lab.f1(), rng), j2 = detail::random_primitive(lab.f2(), rng);
    auto om = omega_of(lab, j1, j2);
    bool s = is_square(lab.big(), om);
    EXPECT_EQ(s, euler_square(lab.big(), om));
    if (s) {
      auto r = sqrt(lab.big(), om);
      EXPECT_EQ(lab.big().mul(r, r), om);
      ++squares;
    }
  }
  EXPECT_GT(squares, 50);
  EXPECT_LT(squares, 150);
}

TEST(Candidate, RelationsHoldForRandomWitnesses) {
  ConjectureLab lab(3, 3, 5);
  for (const auto& w : witnesses(lab, 100, 5)) {
    auto t = build_candidate(lab, w);
    EXPECT_TRUE(check_relations(t));
    EXPECT_EQ(proj_order(compose(t.s1, t.s2)), 2u);
    EXPECT_EQ(proj_order(compose(t.s2, t.s3)), 2u);
    EXPECT_EQ(proj_order(compose(compose(t.s1, t.s2), t.s3)), 2u);
  }
}

// The two square roots of Omega give mirror images of one polytope.
TEST(Candidate, SignVariantsAreEnantiomorphs) {
  ConjectureLab lab(7, 3, 5);
  for (const auto& w : witnesses(lab, 10, 9)) {
    auto a = build_candidate(lab, w, 1), b = build_candidate(lab, w, -1);
    EXPECT_EQ(a.s1, b.s1);
    EXPECT_EQ(a.s2, b.s2);
    EXPECT_TRUE(are_equivalent(a, enantiomorph(b)));
    EXPECT_FALSE(are_equivalent(a, b));
  }
}

TEST(Candidate, Preconditions) {
  try {
    ConjectureLab lab(3, 2, 3);
    search_witness(lab, 10, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PreconditionFailed);
  }
  ConjectureLab same(3, 3, 3);
  auto s = search_witness(same, 64, 1);
  ASSERT_TRUE(s.witness);
  try {
    build_candidate(same, *s.witness);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PreconditionFailed);
  }
  EXPECT_THROW(ConjectureLab(9, 3, 5), Error);
}

TEST(Search, DeterministicAcrossSeedsAndJobs) {
  ConjectureLab lab(3, 3, 5);
  auto a = search_witness(lab, 600, 42, 1);
  auto b = search_witness(lab, 600, 42, 3);
  EXPECT_EQ(a.samples, 600u);
  EXPECT_EQ(a.squares, b.squares);
  EXPECT_EQ(a.unconditioned_squares, b.unconditioned_squares);
  ASSERT_TRUE(a.witness && b.witness);
  EXPECT_EQ(*a.witness_index, *b.witness_index);
  EXPECT_EQ(a.witness->j1, b.witness->j1);
  EXPECT_EQ(a.witness->j2, b.witness->j2);
  auto c = search_witness(lab, 600, 43, 1);
  EXPECT_NE(a.squares * 1000 + a.unconditioned_squares, c.squares * 1000 + c.unconditioned_squares);
}

TEST(Search, SquareFractionNearOneHalf) {
  ConjectureLab lab(3, 3, 5);
  auto s = search_witness(lab, 2000, 1);
  EXPECT_GE(s.fraction(), 0.45);
  EXPECT_LE(s.fraction(), 0.55);
  EXPECT_FALSE(s.exhausted());
}

TEST(Verify, DirectlyRegularPossible) {
  EXPECT_TRUE(directly_regular_possible(11, 1));
  EXPECT_TRUE(directly_regular_possible(19, 1));
  EXPECT_TRUE(directly_regular_possible(3, 2));
  EXPECT_FALSE(directly_regular_possible(7, 1));
  EXPECT_FALSE(directly_regular_possible(3, 15));
}

// With e1 = 1 the facet group lives over GF(p) and sits inside the vertex
// figure group, so the exact check must report the intersection as violated.
TEST(Verify, ExactRouteOnSmallField) {
  ConjectureLab lab(7, 1, 3);
  std::optional<ConjectureWitness> w;
  for (u64 a = 1; a < 7 && !w; ++a)
    for (u64 b = 1; b < 343 && !w; ++b) {
      auto j1 = lab.f1().from_code(a), j2 = lab.f2().from_code(b);
      if (!is_primitive(lab.f1(), j1) || !is_primitive(lab.f2(), j2)) continue;
      if (lab.big().is_zero(lab.big().add(lab.embed1(j1), lab.big().inv(lab.embed1(j1))))) continue;
      if (is_square(lab.big(), omega_of(lab, j1, j2))) w = make_witness(lab, j1, j2);
    }
  ASSERT_TRUE(w);
  auto t = build_candidate(lab, *w);
  auto r = verify_candidate(lab, t, 100, 1);
  EXPECT_TRUE(r.relations);
  EXPECT_EQ(r.c3, C3Verdict::Violated);
  EXPECT_GT(r.c3_violations, 0u);
  EXPECT_FALSE(r.ok());
}

TEST(Verify, SampledRouteOnThreeToTheFifteen) {
  ConjectureLab lab(3, 3, 5);
  auto s = search_witness(lab, 64, 1);
  ASSERT_TRUE(s.witness);
  auto t = build_candidate(lab, *s.witness);
  auto r = verify_candidate(lab, t, 300, 1);
  EXPECT_TRUE(r.relations);
  EXPECT_TRUE(r.cyclic_intersections);
  EXPECT_TRUE(r.generation);
  EXPECT_TRUE(r.chiral);
  EXPECT_TRUE(r.not_directly_regular);
  EXPECT_EQ(r.trace_field_degree, 15u);
  EXPECT_EQ(r.c3, C3Verdict::UnverifiedSampled);
  EXPECT_EQ(r.c3_samples, 300u);
  EXPECT_EQ(r.c3_violations, 0u);
  EXPECT_TRUE(r.ok());
}
