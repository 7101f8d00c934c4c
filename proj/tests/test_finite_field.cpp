#include <gtest/gtest.h>

#include <set>

#include "chiral/finite_field.hpp"
#include "chiral/subfield.hpp"

using namespace chiral;

namespace {

// Brute-force multiplicative order by repeated multiplication.
template <class F>
u64 naive_order(const F& f, typename F::Elem g) {
  auto x = g;
  u64 m = 1;
  while (!f.is_one(x)) {
    x = f.mul(x, g);
    ++m;
  }
  return m;
}

const std::vector<std::pair<u64, unsigned>> kSmallFields = {{2, 1}, {3, 1}, {5, 1},  {7, 1},  {11, 1}, {13, 1},
                                                            {2, 2}, {2, 3}, {3, 2},  {2, 4},  {5, 2},  {3, 3},
                                                            {2, 5}, {7, 2}, {2, 6},  {3, 4},  {13, 2}};

}  // namespace

TEST(FieldSpec, DefaultModulus) {
  // Every monic quadratic preceding the chosen modulus in (c0, c1) order must
  // have a root mod 13.
  auto s = make_field_spec(13, 2);
  EXPECT_TRUE(gfp_poly::is_irreducible(s.modulus, 13));
  for (u64 c0 = 0; c0 <= s.modulus[0]; ++c0)
    for (u64 c1 = 0; c1 < 13; ++c1) {
      if (c0 == s.modulus[0] && c1 >= s.modulus[1]) break;
      std::vector<u64> m{c0, c1, 1};
      bool has_root = false;
      for (u64 x = 0; x < 13; ++x)
        if ((c0 + c1 * x + x * x) % 13 == 0) has_root = true;
      EXPECT_TRUE(has_root) << c0 << "," << c1;
    }
  EXPECT_EQ(make_field_spec(2, 1).modulus, (std::vector<u64>{0, 1}));
}

TEST(FieldSpec, ParseAndFormat) {
  auto s = parse_field_spec("13^2/2,12,1");
  EXPECT_EQ(s.p, 13u);
  EXPECT_EQ(s.d, 2u);
  EXPECT_EQ(format_field_spec(s), "13^2/2,12,1");
  EXPECT_EQ(parse_field_spec("3^15").q(), ipow(3, 15));
  EXPECT_EQ(parse_field_spec("31").d, 1u);
}

TEST(FieldSpec, Errors) {
  auto kind = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Parse;
  };
  EXPECT_EQ(kind([] { make_field_spec(15, 1); }), ErrorKind::NotPrime);
  EXPECT_EQ(kind([] { make_field_spec(13, 2, std::vector<u64>{1, 0, 1}); }), ErrorKind::ReducibleModulus);
  EXPECT_EQ(kind([] { make_field_spec(13, 2, std::vector<u64>{1, 0, 2}); }), ErrorKind::BadModulus);
}

TEST(FiniteField, BackendsAgree) {
  for (auto [p, d] : kSmallFields) {
    auto spec = make_field_spec(p, d);
    Field F(spec);
    SmallField S(spec);
    const u64 q = static_cast<u64>(spec.q());
    for (u64 a = 0; a < q; a += 1 + q / 40)
      for (u64 b = 0; b < q; b += 1 + q / 37) {
        auto fa = F.from_code(a), fb = F.from_code(b);
        EXPECT_EQ(F.code(F.add(fa, fb)), S.code(S.add(S.from_code(a), S.from_code(b))));
        EXPECT_EQ(F.code(F.mul(fa, fb)), S.code(S.mul(S.from_code(a), S.from_code(b))));
        EXPECT_EQ(F.code(F.sub(fa, fb)), S.code(S.sub(S.from_code(a), S.from_code(b))));
        if (b != 0) {
          EXPECT_EQ(F.code(F.div(fa, fb)), S.code(S.div(S.from_code(a), S.from_code(b))));
        }
      }
    for (u64 a = 1; a < q; a += 1 + q / 50) {
      ASSERT_EQ(is_square(F, F.from_code(a)), is_square(S, S.from_code(a)));
      if (is_square(F, F.from_code(a))) {
        EXPECT_EQ(F.code(sqrt(F, F.from_code(a))), S.code(sqrt(S, S.from_code(a)))) << p << "^" << d << " a=" << a;
      }
      EXPECT_EQ(F.code(F.frobenius(F.from_code(a), 1)), S.code(S.frobenius(S.from_code(a), 1)));
    }
    EXPECT_EQ(F.code(primitive_element(F)), S.code(S.primitive()));
  }
}

TEST(FiniteField, OrderMatchesIteration) {
  for (auto [p, d] : kSmallFields) {
    SmallField S(make_field_spec(p, d));
    for (u64 a = 1; a < S.size(); ++a) {
      auto g = S.from_code(a);
      u64 m = naive_order(S, g);
      ASSERT_EQ(element_order(S, g), m);
      EXPECT_EQ(is_primitive(S, g), m == S.size() - 1);
    }
  }
}

TEST(FiniteField, NegateOrder) {
  EXPECT_EQ(negate_order(3), 6u);
  EXPECT_EQ(negate_order(4), 4u);
  EXPECT_EQ(negate_order(6), 3u);
  // Full sweep over odd q <= 49.
  for (u64 q = 3; q <= 49; q += 2) {
    auto pd = prime_power_decompose(q);
    if (!pd) continue;
    SmallField S(make_field_spec(pd->first, pd->second));
    for (u64 a = 1; a < q; ++a) {
      auto g = S.from_code(a);
      EXPECT_EQ(element_order(S, S.neg(g)), negate_order(static_cast<u64>(element_order(S, g)))) << q;
    }
  }
}

TEST(FiniteField, Squares) {
  SmallField F11(make_field_spec(11, 1));
  std::set<u64> sq;
  for (u64 a = 0; a < 11; ++a) sq.insert(a * a % 11);
  for (u64 a = 0; a < 11; ++a) EXPECT_EQ(is_square(F11, F11.from_code(a)), sq.count(a) == 1);
  EXPECT_EQ(sqrt(F11, F11.scalar(5)), F11.scalar(4));
  SmallField F7(make_field_spec(7, 1));
  EXPECT_EQ(sqrt(F7, F7.scalar(4)), F7.scalar(2));
  EXPECT_FALSE(is_square(F7, F7.scalar(-1)));
  EXPECT_THROW(sqrt(F7, F7.scalar(3)), Error);
  EXPECT_TRUE(is_primitive(F7, F7.scalar(3)));
  EXPECT_FALSE(is_primitive(F7, F7.scalar(2)));
  EXPECT_FALSE(is_primitive(F7, F7.one()));

  for (auto [p, d] : kSmallFields) {
    SmallField S(make_field_spec(p, d));
    u64 count = 0;
    for (u64 a = 0; a < S.size(); ++a) {
      auto g = S.from_code(a);
      EXPECT_TRUE(is_square(S, S.mul(g, g)));
      if (is_square(S, g)) {
        ++count;
        auto h = sqrt(S, g);
        EXPECT_EQ(S.mul(h, h), g);
      }
    }
    if (p != 2) {
      EXPECT_EQ(count, (S.size() + 1) / 2);
    }
  }
}

TEST(FiniteField, LargeFieldArithmetic) {
  Field F(make_field_spec(11, 21));
  auto g = primitive_element(F);
  EXPECT_TRUE(is_primitive(F, g));
  EXPECT_TRUE(F.is_one(F.pow(g, F.q() - 1)));
  auto x = F.from_code(123456789);
  EXPECT_EQ(F.mul(x, F.inv(x)), F.one());
  auto s = F.mul(x, x);
  auto r = sqrt(F, s);
  EXPECT_EQ(F.mul(r, r), s);
  Field G(make_field_spec(3, 15));
  EXPECT_EQ(G.q(), ipow(3, 15));
  auto y = G.from_code(987654);
  auto sy = G.mul(y, y);
  EXPECT_EQ(G.mul(sqrt(G, sy), sqrt(G, sy)), sy);
}

TEST(Subfield, EmbeddingIsHomomorphism) {
  const std::vector<std::tuple<u64, unsigned, unsigned>> cases = {{2, 2, 4}, {2, 1, 8}, {3, 2, 4}, {2, 3, 6}, {2, 2, 6}, {13, 1, 2}};
  for (auto [p, e, d] : cases) {
    SmallField src(make_field_spec(p, e));
    SmallField dst(make_field_spec(p, d));
    SubfieldEmbedding<SmallField, SmallField> emb(src, dst);
    for (u64 a = 0; a < src.size(); ++a)
      for (u64 b = 0; b < src.size(); ++b) {
        auto x = src.from_code(a), y = src.from_code(b);
        ASSERT_EQ(emb(src.add(x, y)), dst.add(emb(x), emb(y)));
        ASSERT_EQ(emb(src.mul(x, y)), dst.mul(emb(x), emb(y)));
      }
    for (u64 a = 1; a < src.size(); ++a)
      EXPECT_EQ(element_order(dst, emb(src.from_code(a))), element_order(src, src.from_code(a)));
  }
}

TEST(Subfield, Examples) {
  SmallField f13(make_field_spec(13, 1)), f169(make_field_spec(13, 2));
  EXPECT_EQ(subfield_embed(f13, f13.scalar(5), f169), f169.scalar(5));
  SmallField f4(make_field_spec(2, 2)), f16(make_field_spec(2, 4)), f8(make_field_spec(2, 3));
  EXPECT_EQ(element_order(f16, subfield_embed(f4, f4.generator(), f16)), 3u);
  try {
    subfield_embed(f8, f8.generator(), f16);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoEmbedding);
  }
  // Mixed backends into a large field.
  Field big(make_field_spec(3, 15));
  SmallField f27(make_field_spec(3, 3));
  SubfieldEmbedding<SmallField, Field> emb(f27, big);
  for (u64 a = 1; a < 27; ++a) EXPECT_EQ(element_order(big, emb(f27.from_code(a))), element_order(f27, f27.from_code(a)));
}
