#pragma once

// Exhaustive search for chiral 4-polytopes (and 5-polytopes at tiny q) whose
// rotation group is PSL(2,q) or PGL(2,q).
//
// sigma2 runs over PGammaL-classes of elements of order > 2. Writing
// sigma1 = t sigma2^-1 and sigma3 = sigma2^-1 s with involutions t, s makes
// the relation (sigma1 sigma2 sigma3)^2 = 1 reduce to tr(sigma1 s) = 0, a
// linear condition on s. For a pair (a, b) with ab an involution, <a, b> is
// fixed up to conjugacy by tr^2/det of b once a is fixed (Fricke), unless a, b
// share a fixed point; properness of the parabolics is therefore cached per
// value.

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "chiral/error.hpp"
#include "chiral/polytope.hpp"

namespace chiral {

enum class GroupKind { PSL, PGL };

inline const char* to_string(GroupKind g) { return g == GroupKind::PSL ? "PSL" : "PGL"; }

inline u128 group_size(u128 q, GroupKind g) { return g == GroupKind::PSL ? psl_order(q) : pgl_order(q); }

inline SubgroupClass::Tag full_tag(GroupKind g) {
  return g == GroupKind::PSL ? SubgroupClass::Tag::FullPSL : SubgroupClass::Tag::FullPGL;
}

template <class F>
bool in_group(const ProjElement<F>& g, GroupKind kind) {
  return kind == GroupKind::PGL || in_psl(g);
}

/// Every involution of the group, in canonical order.
template <class F>
std::vector<ProjElement<F>> involutions(const F& f, GroupKind kind) {
  std::vector<ProjElement<F>> out;
  const u128 q = f.q();
  // Trace zero: [[a, b], [c, -a]]; in characteristic 2 this is [[a, b], [c, a]].
  auto consider = [&](typename F::Elem a, typename F::Elem b, typename F::Elem c) {
    auto d = f.neg(a);
    if (f.is_zero(f.sub(f.mul(a, d), f.mul(b, c)))) return;
    ProjElement<F> g(f, a, b, c, d);
    if (g.is_identity() || !in_group(g, kind)) return;
    out.push_back(g);
  };
  for (u128 b = 0; b < q; ++b)
    for (u128 c = 0; c < q; ++c) consider(f.one(), f.from_code(b), f.from_code(c));
  for (u128 c = 1; c < q; ++c) consider(f.zero(), f.one(), f.from_code(c));
  std::sort(out.begin(), out.end());
  return out;
}

/// One element per PGammaL-class of elements of order > 2 in the group.
/// Classes are labelled by tr^2/det up to Frobenius, plus the unipotent class.
template <class F>
std::vector<ProjElement<F>> sigma2_class_reps(const F& f, GroupKind kind) {
  std::vector<ProjElement<F>> out;
  const u128 q = f.q();
  auto four = f.scalar(4);
  typename F::Elem nonsquare = f.one();
  if (f.p() != 2) nonsquare = primitive_element(f);
  for (u128 code = 1; code < q; ++code) {
    auto beta = f.from_code(code);
    bool minimal = true;
    for (unsigned r = 1; r < f.d() && minimal; ++r) minimal = f.code(f.frobenius(beta, r)) >= code;
    if (!minimal) continue;
    std::optional<ProjElement<F>> rep;
    if (beta == four) {
      if (f.p() != 2) rep = ProjElement<F>(f, f.one(), f.one(), f.zero(), f.one());
    } else if (is_square(f, beta)) {
      rep = ProjElement<F>(f, f.zero(), f.neg(f.one()), f.one(), sqrt(f, beta));
    } else {
      auto tau = sqrt(f, f.mul(beta, nonsquare));
      rep = ProjElement<F>(f, f.zero(), f.neg(nonsquare), f.one(), tau);
    }
    if (!rep || !in_group(*rep, kind) || proj_order(*rep) <= 2) continue;
    out.push_back(*rep);
  }
  return out;
}

struct EnumOptions {
  unsigned jobs = 1;
  bool naive = false;  // every sigma2 and every t, no conjugacy pruning
  std::size_t cap = kDefaultClosureCap;
};

template <class F>
struct Enumeration {
  std::vector<PolytopeRecord<F>> chiral;   // one per PGammaL-class of triples
  std::vector<RotationTriple<F>> regular;  // valid but directly regular
  u64 raw_chiral = 0;                      // triples before deduplication (naive mode)
  u64 raw_regular = 0;
};

namespace detail {

/// Memoized "is <a, b> a proper subgroup" for pairs whose product is an
/// involution, with a fixed per table.
template <class F>
class ParabolicCache {
 public:
  ParabolicCache(const F& f, GroupKind kind) : f_(f), full_(group_size(f.q(), kind)) {}

  bool proper(const ProjElement<F>& fixed, const ProjElement<F>& other) {
    auto bf = trace_invariant(fixed), bo = trace_invariant(other);
    if (f_.add(bf, bo) == f_.scalar(4)) return true;  // common fixed point
    u64 key = static_cast<u64>(f_.code(bo));
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool p = group_order(f_, {fixed, other}) < full_;
    memo_.emplace(key, p);
    return p;
  }

 private:
  const F& f_;
  u128 full_;
  std::unordered_map<u64, bool> memo_;
};

/// Involutions s = [[a,b],[c,-a]] with tr(m s) = 0.
template <class F>
std::vector<ProjElement<F>> involutions_orthogonal_to(const F& f, const ProjElement<F>& m, GroupKind kind) {
  const auto& e = m.entries();
  // Coefficients of (a, b, c) in tr(m s) = m11 a + m21 b + m12 c - m22 a.
  std::array<typename F::Elem, 3> w{f.sub(e[0], e[3]), e[2], e[1]};
  std::vector<std::array<typename F::Elem, 3>> basis;
  int pivot = -1;
  for (int i = 0; i < 3; ++i)
    if (!f.is_zero(w[i])) {
      pivot = i;
      break;
    }
  if (pivot < 0) {
    basis = {{f.one(), f.zero(), f.zero()}, {f.zero(), f.one(), f.zero()}, {f.zero(), f.zero(), f.one()}};
  } else {
    auto inv = f.inv(w[pivot]);
    for (int i = 0; i < 3; ++i) {
      if (i == pivot) continue;
      std::array<typename F::Elem, 3> v{f.zero(), f.zero(), f.zero()};
      v[i] = f.one();
      v[pivot] = f.neg(f.mul(w[i], inv));
      basis.push_back(v);
    }
  }
  std::vector<ProjElement<F>> out;
  auto emit = [&](const std::array<typename F::Elem, 3>& v) {
    auto a = v[0], b = v[1], c = v[2], d = f.neg(v[0]);
    if (f.is_zero(f.sub(f.mul(a, d), f.mul(b, c)))) return;
    ProjElement<F> s(f, a, b, c, d);
    if (s.is_identity() || !in_group(s, kind)) return;
    out.push_back(s);
  };
  auto comb = [&](const std::array<typename F::Elem, 3>& u, const typename F::Elem& x,
                  const std::array<typename F::Elem, 3>& v) {
    std::array<typename F::Elem, 3> r;
    for (int i = 0; i < 3; ++i) r[i] = f.add(u[i], f.mul(x, v[i]));
    return r;
  };
  if (basis.size() == 2) {
    emit(basis[1]);
    for (u128 x = 0; x < f.q(); ++x) emit(comb(basis[0], f.from_code(x), basis[1]));
  } else {
    // m is scalar: every involution qualifies.
    for (const auto& s : involutions(f, kind)) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <class F>
struct TripleOutcome {
  bool valid = false;
  bool chiral = false;
};

/// One side of the intersection test: a two-generated subgroup, its order,
/// and its elements once somebody needs them.
template <class F>
struct Parabolic {
  ProjElement<F> a, b;
  u128 order = 0;
  std::optional<std::vector<ProjElement<F>>> elems;

  Parabolic(const F& f, const ProjElement<F>& a_, const ProjElement<F>& b_) : a(a_), b(b_), order(group_order(f, {a_, b_})) {}

  const std::vector<ProjElement<F>>& elements(const F& f, std::size_t cap) {
    if (!elems) {
      elems = closure(f, {a, b}, cap);
      if (!elems) throw Error(ErrorKind::ParabolicTooLarge, "parabolic subgroup exceeds the closure cap");
    }
    return *elems;
  }
  bool contains(const F& f, const ProjElement<F>& x) const { return group_order(f, {a, b, x}) == order; }
};

/// Whether the two parabolics meet in <s> alone. Only the smaller one is
/// listed. The larger one is listed too when it is not much bigger; past that,
/// membership is |<H,x>| = |H|, or the PSL test when H has index 2 in PGL.
template <class F>
bool meet_in_cyclic(const F& f, Parabolic<F>& p1, Parabolic<F>& p2, const ProjElement<F>& s, std::size_t cap) {
  auto& small = p1.order <= p2.order ? p1 : p2;
  auto& large = p1.order <= p2.order ? p2 : p1;
  const auto& elems = small.elements(f, cap);
  ElementSet<F> cyc(f);
  auto x = s;
  for (u128 i = 0, m = proj_order(s); i < m; ++i, x = compose(x, s)) cyc.insert(x);
  std::function<bool(const ProjElement<F>&)> in_large;
  std::optional<ElementSet<F>> large_set;
  if (f.p() != 2 && large.order == psl_order(f.q())) {
    in_large = [](const ProjElement<F>& g) { return in_group(g, GroupKind::PSL); };
  } else if (large.order <= 32 * small.order && large.order <= cap) {
    large_set.emplace(f);
    for (const auto& g : large.elements(f, cap)) large_set->insert(g);
    in_large = [&](const ProjElement<F>& g) { return large_set->contains(g); };
  } else {
    in_large = [&](const ProjElement<F>& g) { return large.contains(f, g); };
  }
  for (const auto& g : elems)
    if (!cyc.contains(g) && in_large(g)) return false;
  return true;
}

/// Generation, the intersection condition and chirality for a triple already
/// satisfying the relations and the cyclic intersections.
template <class F>
TripleOutcome<F> full_check(const F& f, const RotationTriple<F>& t, GroupKind kind, Parabolic<F>& facet,
                            std::size_t cap) {
  TripleOutcome<F> out;
  if (group_order(f, {t.s1, t.s2, t.s3}) != group_size(f.q(), kind)) return out;
  Parabolic<F> vertex(f, t.s2, t.s3);
  if (!meet_in_cyclic(f, facet, vertex, t.s2, cap)) return out;
  out.valid = true;
  out.chiral = !are_equivalent(t, enantiomorph(t));
  return out;
}

template <class F>
PolytopeRecord<F> enumerated_record(const F& f, const RotationTriple<F>& t, GroupKind kind) {
  PolytopeRecord<F> r;
  r.triple = t;
  r.schlafli = schlafli_of(t);
  r.group = SubgroupClass{full_tag(kind), group_size(f.q(), kind), 0, 0, f.d(), f.p()};
  r.parabolic1 = generate(f, {t.s1, t.s2}).cls;
  r.parabolic2 = generate(f, {t.s2, t.s3}).cls;
  r.provenance = "enumerated";
  return r;
}

/// Adds t to bucket unless a PGammaL-equivalent triple is already there.
template <class F>
bool insert_class(std::vector<RotationTriple<F>>& bucket, const RotationTriple<F>& t) {
  for (const auto& u : bucket)
    if (are_equivalent(t, u)) return false;
  bucket.push_back(t);
  return true;
}

template <class F>
struct Sigma2Result {
  std::vector<RotationTriple<F>> chiral, regular;
  u64 raw_chiral = 0, raw_regular = 0;
};

template <class F>
Sigma2Result<F> search_sigma2(const F& f, GroupKind kind, const ProjElement<F>& s2,
                              const std::vector<ProjElement<F>>& invs, const EnumOptions& opt) {
  Sigma2Result<F> res;
  const auto s2inv = inverse(s2);
  ParabolicCache<F> facet(f, kind), vertex(f, kind);

  std::vector<ProjElement<F>> cand;
  for (const auto& t : invs) {
    auto s1 = compose(t, s2inv);
    if (s1.is_identity() || cyclic_intersection_order(s1, s2) != 1) continue;
    if (!facet.proper(s2, s1)) continue;
    cand.push_back(t);
  }

  std::vector<ProjElement<F>> reps;
  if (opt.naive) {
    reps = cand;
  } else {
    auto st = stabilizer(s2);
    ElementSet<F> seen(f);
    for (const auto& t : cand) {
      if (seen.contains(t)) continue;
      reps.push_back(t);
      for (const auto& m : st) seen.insert(m(t));
    }
  }

  for (const auto& t : reps) {
    const auto s1 = compose(t, s2inv);
    std::optional<Parabolic<F>> h1;
    std::map<Fingerprint, std::vector<RotationTriple<F>>> found;
    for (const auto& s : involutions_orthogonal_to(f, s1, kind)) {
      auto s3 = compose(s2inv, s);
      if (s3.is_identity() || !is_involution(compose(s1, s))) continue;
      if (cyclic_intersection_order(s2, s3) != 1) continue;
      if (!vertex.proper(s2, s3)) continue;
      if (!h1) h1.emplace(f, s1, s2);
      RotationTriple<F> tr{s1, s2, s3};
      auto out = full_check(f, tr, kind, *h1, opt.cap);
      if (!out.valid) continue;
      if (out.chiral) {
        ++res.raw_chiral;
        if (opt.naive) continue;
        auto& bucket = found[fingerprint(tr)];
        if (insert_class(bucket, tr)) res.chiral.push_back(tr);
      } else {
        ++res.raw_regular;
        if (opt.naive) continue;
        auto& bucket = found[fingerprint(tr)];
        if (insert_class(bucket, tr)) res.regular.push_back(tr);
      }
    }
  }
  return res;
}

/// Runs work(i) for i in [0, n) on `jobs` threads.
template <class Work>
void parallel_for(std::size_t n, unsigned jobs, Work&& work) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next++;
        if (i >= n) return;
        try {
          work(i);
        } catch (...) {
          std::lock_guard lock(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace detail

/// Every element of PGL(2,q), canonical forms in code order.
template <class F>
std::vector<ProjElement<F>> all_group_elements(const F& f) {
  std::vector<ProjElement<F>> out;
  const u128 q = f.q();
  for (u128 b = 0; b < q; ++b)
    for (u128 c = 0; c < q; ++c)
      for (u128 d = 0; d < q; ++d) {
        auto B = f.from_code(b), C = f.from_code(c), D = f.from_code(d);
        if (!f.is_zero(f.sub(D, f.mul(B, C)))) out.emplace_back(f, f.one(), B, C, D);
      }
  for (u128 c = 1; c < q; ++c)
    for (u128 d = 0; d < q; ++d) out.emplace_back(f, f.zero(), f.one(), f.from_code(c), f.from_code(d));
  return out;
}

/// Largest q accepted by the rank-4 search.
inline constexpr u64 kMaxEnumerationQ = 181;

/// All chiral 4-polytopes with rotation group the whole of PSL(2,q) or
/// PGL(2,q), one record per PGammaL-class of distinguished generators.
template <class F>
Enumeration<F> enumerate_rank4(const F& f, GroupKind kind, const EnumOptions& opt = {}) {
  if (f.q() > kMaxEnumerationQ) throw Error(ErrorKind::UnsupportedScale, "rank-4 search supports q <= 181");
  const auto invs = involutions(f, kind);
  std::vector<ProjElement<F>> s2s;
  if (opt.naive) {
    for (const auto& g : all_group_elements(f))
      if (in_group(g, kind) && !g.is_identity() && proj_order(g) > 2) s2s.push_back(g);
  } else {
    s2s = sigma2_class_reps(f, kind);
  }
  std::vector<detail::Sigma2Result<F>> parts(s2s.size());
  detail::parallel_for(s2s.size(), opt.jobs,
                       [&](std::size_t i) { parts[i] = detail::search_sigma2(f, kind, s2s[i], invs, opt); });
  Enumeration<F> out;
  for (auto& part : parts) {
    out.raw_chiral += part.raw_chiral;
    out.raw_regular += part.raw_regular;
    for (const auto& t : part.chiral) out.chiral.push_back(detail::enumerated_record(f, t, kind));
    for (const auto& t : part.regular) out.regular.push_back(t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Counting conventions
// ---------------------------------------------------------------------------

/// How PGammaL-classes of triples are grouped into polytopes.
struct CountConvention {
  bool merge_enantiomorphs = false;  // true: a chiral polytope and its mirror image count once
  bool merge_duals = false;
};

namespace detail {

template <class F>
std::optional<std::size_t> find_class(const std::multimap<Fingerprint, std::size_t>& index,
                                      const std::vector<PolytopeRecord<F>>& recs, const RotationTriple<F>& t) {
  auto [lo, hi] = index.equal_range(fingerprint(t));
  for (auto it = lo; it != hi; ++it)
    if (are_equivalent(recs[it->second].triple, t)) return it->second;
  return std::nullopt;
}

}  // namespace detail

/// Label per record: records with equal labels are the same polytope under
/// the convention. Labels are the least record index of each group.
template <class F>
std::vector<std::size_t> polytope_labels(const std::vector<PolytopeRecord<F>>& recs, const CountConvention& conv) {
  std::vector<std::size_t> parent(recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a), b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  std::multimap<Fingerprint, std::size_t> index;
  for (std::size_t i = 0; i < recs.size(); ++i) index.emplace(fingerprint(recs[i].triple), i);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (conv.merge_enantiomorphs)
      if (auto j = detail::find_class(index, recs, enantiomorph(recs[i].triple))) unite(i, *j);
    if (conv.merge_duals)
      if (auto j = detail::find_class(index, recs, dual(recs[i].triple))) unite(i, *j);
  }
  std::vector<std::size_t> labels(recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) labels[i] = find(i);
  return labels;
}

template <class F>
std::size_t count_polytopes(const std::vector<PolytopeRecord<F>>& recs, const CountConvention& conv) {
  auto labels = polytope_labels(recs, conv);
  std::unordered_set<std::size_t> distinct(labels.begin(), labels.end());
  return distinct.size();
}

/// One representative record per polytope, least index first.
template <class F>
std::vector<PolytopeRecord<F>> polytope_representatives(const std::vector<PolytopeRecord<F>>& recs,
                                                        const CountConvention& conv) {
  auto labels = polytope_labels(recs, conv);
  std::vector<PolytopeRecord<F>> out;
  for (std::size_t i = 0; i < recs.size(); ++i)
    if (labels[i] == i) out.push_back(recs[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Rank 5
// ---------------------------------------------------------------------------

template <class F>
using RotationQuad = std::array<ProjElement<F>, 4>;

/// (sigma_i ... sigma_j)^2 = 1 for 1 <= i < j <= 4.
template <class F>
bool check_relations(const RotationQuad<F>& s) {
  for (std::size_t i = 0; i < 4; ++i) {
    auto w = s[i];
    for (std::size_t j = i + 1; j < 4; ++j) {
      w = compose(w, s[j]);
      if (!is_involution(w)) return false;
    }
  }
  return true;
}

/// Whether the rank-5 rotation automorphism s1 -> s1^-1, s2 -> s1^2 s2,
/// s3 -> s3, s4 -> s4 is realized inside PGammaL(2,q).
template <class F>
bool is_chiral(const RotationQuad<F>& s) {
  const F& f = s[0].field();
  auto img1 = inverse(s[0]);
  auto img2 = compose(compose(s[0], s[0]), s[1]);
  for (unsigned r = 0; r < f.d(); ++r) {
    std::vector<std::pair<ProjElement<F>, ProjElement<F>>> pairs{{frobenius(s[0], r), img1},
                                                                 {frobenius(s[1], r), img2},
                                                                 {frobenius(s[2], r), s[2]},
                                                                 {frobenius(s[3], r), s[3]}};
    if (find_transporter(f, pairs)) return false;
  }
  return true;
}

/// Rank-5 intersection property in its recursive form: both rank-4 faces
/// satisfy the intersection condition and <s1,s2,s3> ∩ <s2,s3,s4> = <s2,s3>.
template <class F>
bool check_intersection(const RotationQuad<F>& s, std::size_t cap = kDefaultClosureCap) {
  const F& f = s[0].field();
  if (!check_intersection(RotationTriple<F>{s[0], s[1], s[2]}, cap)) return false;
  if (!check_intersection(RotationTriple<F>{s[1], s[2], s[3]}, cap)) return false;
  auto a = closure(f, {s[0], s[1], s[2]}, cap);
  auto b = closure(f, {s[1], s[2], s[3]}, cap);
  auto m = closure(f, {s[1], s[2]}, cap);
  if (!a || !b || !m) throw Error(ErrorKind::ParabolicTooLarge, "rank-5 parabolic exceeds the closure cap");
  return intersection_order(f, *a, *b) == m->size();
}

template <class F>
struct Rank5Enumeration {
  std::vector<RotationQuad<F>> chiral;
  u64 valid_regular = 0;  // quadruples meeting every condition except chirality
};

/// Quadruples of distinguished generators of a chiral 5-polytope with
/// rotation group the whole group; one quadruple per sigma2-class and
/// stabilizer orbit of sigma1 is examined, sigma3 and sigma4 range fully.
template <class F>
Rank5Enumeration<F> enumerate_rank5(const F& f, GroupKind kind, const EnumOptions& opt = {}) {
  if (f.q() > 13) throw Error(ErrorKind::UnsupportedScale, "rank-5 search supports q <= 13");
  const auto invs = involutions(f, kind);
  const auto s2s = sigma2_class_reps(f, kind);
  const u128 full = group_size(f.q(), kind);
  std::vector<Rank5Enumeration<F>> parts(s2s.size());
  detail::parallel_for(s2s.size(), opt.jobs, [&](std::size_t idx) {
    const auto& s2 = s2s[idx];
    const auto s2inv = inverse(s2);
    auto st = stabilizer(s2);
    ElementSet<F> seen(f);
    for (const auto& t : invs) {
      if (seen.contains(t)) continue;
      for (const auto& m : st) seen.insert(m(t));
      auto s1 = compose(t, s2inv);
      if (s1.is_identity() || cyclic_intersection_order(s1, s2) != 1) continue;
      for (const auto& s : detail::involutions_orthogonal_to(f, s1, kind)) {
        auto s3 = compose(s2inv, s);
        if (s3.is_identity() || !is_involution(compose(s1, s))) continue;
        for (const auto& u : invs) {
          auto s4 = compose(inverse(s3), u);
          if (s4.is_identity()) continue;
          RotationQuad<F> quad{s1, s2, s3, s4};
          if (!check_relations(quad)) continue;
          if (group_order(f, {s1, s2, s3, s4}) != full) continue;
          if (!check_intersection(quad, opt.cap)) continue;
          if (is_chiral(quad))
            parts[idx].chiral.push_back(quad);
          else
            ++parts[idx].valid_regular;
        }
      }
    }
  });
  Rank5Enumeration<F> out;
  for (auto& p : parts) {
    out.valid_regular += p.valid_regular;
    for (auto& x : p.chiral) out.chiral.push_back(x);
  }
  return out;
}

}  // namespace chiral
