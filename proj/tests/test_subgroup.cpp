#include <gtest/gtest.h>

#include <random>
#include <set>

#include "chiral/subgroup.hpp"

using namespace chiral;

namespace {

using PE = ProjElement<SmallField>;
using Tag = SubgroupClass::Tag;

SmallField make(u64 q) {
  auto pd = prime_power_decompose(q);
  return SmallField(make_field_spec(pd->first, pd->second));
}

PE random_element(const SmallField& f, std::mt19937_64& rng) {
  for (;;) {
    auto r = [&] { return f.from_code(rng() % f.size()); };
    auto a = r(), b = r(), c = r(), d = r();
    if (!f.is_zero(f.sub(f.mul(a, d), f.mul(b, c)))) return PE(f, a, b, c, d);
  }
}

// Independent recognizer: works only from the element list, using naive
// orders and the full commutation table.
struct NaiveVerdict {
  Tag tag;
  u64 k = 1;
};

NaiveVerdict naive_classify(const SmallField& f, const std::vector<PE>& elems) {
  const u64 n = elems.size();
  const u64 p = f.p();
  std::vector<u64> ord;
  for (const auto& g : elems) ord.push_back(static_cast<u64>(proj_order_naive(g, 2 * f.size() + 2)));
  u64 maxo = *std::max_element(ord.begin(), ord.end());
  u64 inv = std::count(ord.begin(), ord.end(), 2u);
  bool abelian = true;
  for (std::size_t i = 0; i < n && abelian; ++i)
    for (std::size_t j = i + 1; j < n && abelian; ++j)
      abelian = compose(elems[i], elems[j]) == compose(elems[j], elems[i]);
  u64 pp = 1;
  for (u64 m = n; m % p == 0; m /= p) pp *= p;
  u64 pel = 0;
  for (u64 o : ord) {
    u64 x = o;
    while (x % p == 0) x /= p;
    if (x == 1 && o > 1) ++pel;
  }
  if (n == 1) return {Tag::Trivial};
  if (maxo == n) return {Tag::Cyclic, n};
  if (abelian && pel + 1 == n) return {Tag::Affine, 1};
  if (n == psl_order(f.q()) || n == pgl_order(f.q())) return {Tag::SubfieldPSL};
  if (n == 4 && inv == 3) return {Tag::Dihedral, 2};
  if (n == 12 && inv == 3 && !(pp == 4 && pel == 3)) return {Tag::A4};
  if (n == 24 && inv == 9) return {Tag::S4};
  if (n == 60 && inv == 15) return {Tag::A5};
  if (pp > 1 && pel + 1 == pp) {
    if (p != 2 && pp == p && n == 2 * p) return {Tag::Dihedral, p};
    return {Tag::Affine, n / pp};
  }
  // Dihedral: a cyclic subgroup of index 2 and every element outside it is
  // an involution.
  if (n % 2 == 0 && maxo == n / 2) {
    std::size_t gi = std::find(ord.begin(), ord.end(), maxo) - ord.begin();
    std::set<std::uint64_t> cyc;
    auto x = elems[gi];
    for (u64 i = 0; i < maxo; ++i, x = compose(x, elems[gi])) cyc.insert(x.key());
    bool outside_involutions = true;
    for (std::size_t i = 0; i < n; ++i)
      if (!cyc.count(elems[i].key()) && ord[i] != 2) outside_involutions = false;
    if (outside_involutions) return {Tag::Dihedral, n / 2};
  }
  return {Tag::SubfieldPSL};
}

}  // namespace

TEST(Subgroup, Examples) {
  SmallField f = make(7);
  auto id = PE::identity(f);
  auto h = generate(f, {id});
  EXPECT_EQ(h.order, 1u);
  EXPECT_EQ(h.cls.tag, Tag::Trivial);
  auto j = f.primitive();
  PE w(f, f.zero(), f.one(), f.scalar(-1), f.zero());
  auto dih = generate(f, {diag(f, j, f.one()), w});
  EXPECT_EQ(dih.cls.tag, Tag::Dihedral);
  EXPECT_EQ(dih.order, 12u);
  EXPECT_EQ(to_string(dih.cls), "D_12");
}

TEST(Subgroup, TripleTwoParabolics) {
  for (u64 q : {8ull, 13ull, 16ull, 25ull, 27ull}) {
    SmallField f = make(q);
    auto j = f.primitive();
    PE s1(f, f.neg(f.inv(j)), f.one(), f.zero(), f.one());
    PE s2 = diag(f, j, f.one());
    PE s3(f, f.one(), f.zero(), f.add(f.one(), j), f.neg(j));
    auto h1 = generate(f, {s1, s2});
    auto h2 = generate(f, {s2, s3});
    EXPECT_EQ(h1.cls.tag, Tag::Affine);
    EXPECT_EQ(h1.order, q * (q - 1));
    EXPECT_EQ(to_string(h1.cls), "E_" + std::to_string(q) + ":C_" + std::to_string(q - 1));
    auto i = intersect(f, h1, h2);
    EXPECT_EQ(i.cls.tag, Tag::Cyclic);
    EXPECT_EQ(i.cls.k, q - 1);
    auto self = intersect(f, h1, h1);
    EXPECT_EQ(self.order, h1.order);
    EXPECT_EQ(self.cls, h1.cls);
  }
}

TEST(Subgroup, CyclicSweep) {
  for (u64 q : {4ull, 5ull, 7ull, 8ull, 9ull, 11ull, 13ull, 16ull, 25ull, 27ull}) {
    SmallField f = make(q);
    std::mt19937_64 rng(q);
    for (int it = 0; it < 300; ++it) {
      auto g = random_element(f, rng);
      auto h = generate(f, {g});
      if (g.is_identity()) continue;
      ASSERT_EQ(h.cls.tag, Tag::Cyclic) << to_string(g);
      ASSERT_EQ(h.cls.k, static_cast<u64>(proj_order(g)));
    }
  }
}

TEST(Subgroup, AgreesWithNaiveClassifier) {
  for (u64 q : {4ull, 5ull, 7ull, 8ull, 9ull, 11ull, 13ull}) {
    SmallField f = make(q);
    std::mt19937_64 rng(100 + q);
    std::set<std::string> seen;
    for (int it = 0; it < 150; ++it) {
      auto g = random_element(f, rng);
      auto h = random_element(f, rng);
      // Push towards proper subgroups: conjugate a power.
      auto x = power(g, static_cast<long long>(rng() % 4 + 1));
      auto y = (it % 3 == 0) ? conjugate(x, h) : h;
      auto H = generate(f, {x, y});
      ASSERT_TRUE(H.materialized());
      ASSERT_EQ(H.elements->size(), H.order);
      auto nv = naive_classify(f, *H.elements);
      auto tag = H.cls.tag;
      if (tag == Tag::FullPSL || tag == Tag::FullPGL || tag == Tag::SubfieldPGL) tag = Tag::SubfieldPSL;
      ASSERT_EQ(tag, nv.tag) << "q=" << q << " " << to_string(H.cls) << " order " << to_string_u128(H.order);
      if (nv.tag == Tag::Cyclic || nv.tag == Tag::Dihedral) {
        EXPECT_EQ(H.cls.k, nv.k);
      }
      seen.insert(to_string(H.cls));
    }
    EXPECT_GT(seen.size(), 2u);
  }
}

TEST(Subgroup, OrderIndependentAndMatchesClosure) {
  SmallField f = make(25);
  std::mt19937_64 rng(5);
  for (int it = 0; it < 40; ++it) {
    auto a = random_element(f, rng), b = random_element(f, rng);
    auto c = power(random_element(f, rng), 3);
    auto h1 = generate(f, {a, c});
    auto h2 = generate(f, {c, a});
    std::set<std::uint64_t> s1, s2;
    for (auto& g : *h1.elements) s1.insert(g.key());
    for (auto& g : *h2.elements) s2.insert(g.key());
    EXPECT_EQ(s1, s2);
    auto cl = closure(f, {a, b}, 10'000'000);
    EXPECT_EQ(group_order(f, {a, b}), cl->size());
  }
}

TEST(Subgroup, FullGroupsAndLargeOrders) {
  SmallField f = make(169);
  auto j = f.primitive();
  PE w(f, f.zero(), f.one(), f.scalar(-1), f.zero());
  PE u(f, f.one(), f.one(), f.zero(), f.one());
  auto h = generate(f, {diag(f, j, f.one()), w, u}, 1000);
  EXPECT_FALSE(h.materialized());
  EXPECT_EQ(h.order, pgl_order(169));
  EXPECT_EQ(h.cls.tag, Tag::FullPGL);
  auto psl = generate(f, {diag(f, f.mul(j, j), f.one()), w, u}, 1000);
  EXPECT_EQ(psl.cls.tag, Tag::FullPSL);
  EXPECT_EQ(to_string(psl.cls), "PSL(2,169)");
  // PSL(2,13) inside PSL(2,169): generated by prime-field matrices.
  auto sub = generate(f, {PE(f, f.one(), f.one(), f.zero(), f.one()), w});
  EXPECT_EQ(sub.cls.tag, Tag::SubfieldPSL);
  EXPECT_EQ(to_string(sub.cls), "PSL(2,13)");
  auto subg = generate(f, {PE(f, f.one(), f.one(), f.zero(), f.one()), w, diag(f, f.scalar(2), f.one())});
  EXPECT_EQ(to_string(subg.cls), "PGL(2,13)");
}

TEST(Subgroup, IcosahedralInPsl11) {
  SmallField f = make(11);
  std::mt19937_64 rng(11);
  int found = 0;
  for (int it = 0; it < 4000 && found < 5; ++it) {
    auto a = random_element(f, rng), b = random_element(f, rng);
    if (proj_order(a) != 5 || proj_order(b) != 3 || !is_involution(compose(a, b))) continue;
    auto h = generate(f, {a, b});
    if (h.order != 60) continue;
    ++found;
    EXPECT_EQ(h.cls.tag, Tag::A5);
    auto nv = naive_classify(f, *h.elements);
    EXPECT_EQ(nv.tag, Tag::A5);
  }
  EXPECT_GT(found, 0);
}

TEST(Subgroup, SubfieldIntersections) {
  // Conjugates of PSL(2,p) in PSL(2,p^2) meet in PSL(2,p) or something smaller.
  for (u64 q : {9ull, 25ull}) {
    SmallField f = make(q);
    std::mt19937_64 rng(q);
    PE w(f, f.zero(), f.one(), f.scalar(-1), f.zero());
    PE u(f, f.one(), f.one(), f.zero(), f.one());
    auto base = generate(f, {u, w});
    const u128 sub_order = psl_order(f.p());
    ASSERT_EQ(base.order, sub_order);
    for (int it = 0; it < 25; ++it) {
      auto x = random_element(f, rng);
      auto other = generate(f, {conjugate(u, x), conjugate(w, x)});
      auto i = intersect(f, base, other);
      EXPECT_LE(i.order, sub_order);
      EXPECT_TRUE(i.order == sub_order || i.cls.tag != Tag::SubfieldPSL);
      EXPECT_NE(i.cls.tag, Tag::SubfieldPGL);
    }
  }
}

TEST(Subgroup, NoPglOfSubfieldOddIndex) {
  // PGL(2,3) = S4 can occur inside PSL(2,27) only as S4, never as a subfield PGL.
  SmallField f = make(27);
  std::mt19937_64 rng(27);
  for (int it = 0; it < 3000; ++it) {
    auto a = random_element(f, rng), b = random_element(f, rng);
    if (!in_psl(a) || !in_psl(b) || proj_order(a) != 4 || proj_order(b) != 3) continue;
    auto h = generate(f, {a, b});
    EXPECT_NE(h.cls.tag, Tag::SubfieldPGL);
    if (h.order == 24) {
      EXPECT_EQ(h.cls.tag, Tag::S4);
    }
  }
}

TEST(Subgroup, TraceFieldDegree) {
  SmallField f = make(8);
  EXPECT_EQ(trace_field_degree(f, {PE::identity(f)}), 1u);
  auto j = f.primitive();
  PE s1(f, f.neg(f.inv(j)), f.one(), f.zero(), f.one());
  PE s2 = diag(f, j, f.one());
  PE s3(f, f.one(), f.zero(), f.add(f.one(), j), f.neg(j));
  EXPECT_EQ(trace_field_degree(f, {s1, s2, s3}), 3u);
  SmallField g = make(169);
  PE w(g, g.zero(), g.one(), g.scalar(-1), g.zero());
  EXPECT_EQ(trace_field_degree(g, {w, PE(g, g.one(), g.one(), g.zero(), g.one())}), 1u);
}
