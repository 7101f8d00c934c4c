#include <gtest/gtest.h>

#include <map>

#include "chiral/constructions.hpp"
#include "chiral/enumerator.hpp"
#include "chiral/tables.hpp"

using namespace chiral;

namespace {

using Tag = SubgroupClass::Tag;

SmallField make(u64 q) {
  auto pd = prime_power_decompose(q);
  return SmallField(make_field_spec(pd->first, pd->second));
}

u64 table_count(u64 q) {
  for (const auto& r : table2())
    if (r.q == q) return *r.count;
  throw std::runtime_error("no row");
}

}  // namespace

TEST(Enumerate, SmallTableRows) {
  for (u64 q : std::initializer_list<u64>{4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23}) {
    auto f = make(q);
    EXPECT_EQ(enumerate_rank4(f, GroupKind::PSL).chiral.size(), table_count(q)) << q;
  }
}

// Without pruning every generating triple is visited. PGammaL acts on valid
// triples with trivial stabilizers, so each class has d |PGL(2,q)| members.
TEST(Enumerate, NaiveCountIsClassCountTimesGroupOrder) {
  for (u64 q : std::initializer_list<u64>{5, 7, 8, 9, 11}) {
    auto f = make(q);
    for (auto kind : {GroupKind::PSL, GroupKind::PGL}) {
      EnumOptions naive;
      naive.naive = true;
      auto raw = enumerate_rank4(f, kind, naive);
      auto e = enumerate_rank4(f, kind);
      u128 cls = static_cast<u128>(f.d()) * pgl_order(q);
      EXPECT_EQ(static_cast<u128>(raw.raw_chiral), cls * e.chiral.size()) << q << ' ' << to_string(kind);
      EXPECT_EQ(static_cast<u128>(raw.raw_regular), cls * e.regular.size()) << q << ' ' << to_string(kind);
    }
  }
}

TEST(Enumerate, DeterministicAcrossJobs) {
  for (u64 q : std::initializer_list<u64>{13, 16, 19}) {
    auto f = make(q);
    EnumOptions one, many;
    many.jobs = 3;
    auto a = enumerate_rank4(f, GroupKind::PSL, one);
    auto b = enumerate_rank4(f, GroupKind::PSL, many);
    ASSERT_EQ(a.chiral.size(), b.chiral.size());
    for (std::size_t i = 0; i < a.chiral.size(); ++i) EXPECT_EQ(a.chiral[i].triple, b.chiral[i].triple);
  }
}

TEST(Enumerate, RecordsReverifyAndAreDistinct) {
  for (u64 q : std::initializer_list<u64>{8, 13, 17, 19, 25, 27}) {
    auto f = make(q);
    for (auto kind : {GroupKind::PSL, GroupKind::PGL}) {
      auto e = enumerate_rank4(f, kind);
      for (std::size_t i = 0; i < e.chiral.size(); ++i) {
        const auto& t = e.chiral[i].triple;
        auto v = verify(t, full_tag(kind));
        EXPECT_TRUE(v.ok()) << q;
        EXPECT_TRUE(v.chiral);
        EXPECT_EQ(is_chiral(t), !are_equivalent(t, enantiomorph(t)));
        // The enantiomorph and the dual are chiral polytopes of the same group.
        EXPECT_TRUE(verify(enantiomorph(t), full_tag(kind)).ok());
        EXPECT_TRUE(verify(dual(t), full_tag(kind)).ok());
        // Rank-2 sections of a chiral 4-polytope are regular polygons.
        EXPECT_TRUE(sections_directly_regular(t));
        for (std::size_t j = i + 1; j < e.chiral.size(); ++j) EXPECT_FALSE(are_equivalent(t, e.chiral[j].triple));
      }
      for (const auto& t : e.regular) EXPECT_FALSE(is_chiral(t));
    }
  }
}

// The record set is closed under taking enantiomorphs and duals.
TEST(Enumerate, ClosedUnderEnantiomorphAndDual) {
  for (u64 q : std::initializer_list<u64>{13, 17, 19, 25}) {
    auto f = make(q);
    auto e = enumerate_rank4(f, GroupKind::PSL);
    auto has = [&](const RotationTriple<SmallField>& t) {
      for (const auto& r : e.chiral)
        if (are_equivalent(r.triple, t)) return true;
      return false;
    };
    for (const auto& r : e.chiral) {
      EXPECT_TRUE(has(enantiomorph(r.triple))) << q;
      EXPECT_TRUE(has(dual(r.triple))) << q;
    }
  }
}

TEST(Enumerate, CountingConventions) {
  auto f = make(13);
  auto e = enumerate_rank4(f, GroupKind::PSL);
  EXPECT_EQ(count_polytopes(e.chiral, {}), 6u);
  EXPECT_EQ(count_polytopes(e.chiral, {true, false}), 3u);
  EXPECT_EQ(polytope_representatives(e.chiral, {true, false}).size(), 3u);
}

TEST(Enumerate, PglAffineRecordsMatchFamily) {
  for (u64 q : std::initializer_list<u64>{5, 7, 8, 9, 11, 13, 16, 17, 19}) {
    auto f = make(q);
    auto e = enumerate_rank4(f, GroupKind::PGL);
    std::map<std::string, u64> got, want;
    for (const auto& r : e.chiral)
      if (r.parabolic1.tag == Tag::Affine && r.parabolic2.tag == Tag::Affine) got[to_string(r.schlafli)]++;
    for (const auto& m : pgl_family(f)) want[to_string(m.type)] += m.predicted;
    EXPECT_EQ(got, want) << q;
  }
}

TEST(Enumerate, ScaleLimit) {
  auto f = make(191);
  try {
    enumerate_rank4(f, GroupKind::PSL);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedScale);
  }
}

TEST(Rank5, NoneForSmallFields) {
  for (u64 q : std::initializer_list<u64>{5, 7, 8, 9}) {
    auto f = make(q);
    for (auto kind : {GroupKind::PSL, GroupKind::PGL}) EXPECT_TRUE(enumerate_rank5(f, kind).chiral.empty()) << q;
  }
}

TEST(Rank5, QuadRelations) {
  // A rank-4 triple padded with the identity is not a valid rank-5 quadruple.
  auto f = make(8);
  auto t = affine_triple(f, 1);
  RotationQuad<SmallField> quad{t.s1, t.s2, t.s3, ProjElement<SmallField>::identity(f)};
  EXPECT_FALSE(check_relations(quad));
}
