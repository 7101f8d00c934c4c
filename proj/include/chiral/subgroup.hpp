#pragma once

// Subgroups of PGL(2,q): closure, exact order through a two-level
// point-stabilizer chain on PG(1,q), and recognition against the Dickson list.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "chiral/error.hpp"
#include "chiral/projective.hpp"

namespace chiral {

struct SubgroupClass {
  enum class Tag { Trivial, Cyclic, Dihedral, Affine, A4, S4, A5, SubfieldPSL, SubfieldPGL, FullPSL, FullPGL };

  Tag tag = Tag::Trivial;
  u128 order = 1;
  /// Cyclic(k), Dihedral(2k) and the complement C_k of Affine.
  u64 k = 1;
  /// Size of the elementary abelian part of Affine.
  u128 elementary = 1;
  /// Subfield degree for SubfieldPSL/PGL and the Full tags.
  unsigned e = 0;
  u64 p = 0;

  friend bool operator==(const SubgroupClass&, const SubgroupClass&) = default;
};

inline u128 psl_order(u128 q) { return q * (q * q - 1) / (q % 2 == 0 ? 1 : 2); }
inline u128 pgl_order(u128 q) { return q * (q * q - 1); }

/// Printed names: C_6, D_10, E_169:C_42, S4,
/// PSL(2,13), PGL(2,13).
inline std::string to_string(const SubgroupClass& c) {
  using T = SubgroupClass::Tag;
  auto field = [&] { return to_string_u128(ipow(c.p, c.e)); };
  switch (c.tag) {
    case T::Trivial: return "1";
    case T::Cyclic: return "C_" + std::to_string(c.k);
    case T::Dihedral: return "D_" + std::to_string(2 * c.k);
    case T::Affine:
      return "E_" + to_string_u128(c.elementary) + (c.k > 1 ? ":C_" + std::to_string(c.k) : std::string());
    case T::A4: return "A4";
    case T::S4: return "S4";
    case T::A5: return "A5";
    case T::SubfieldPSL:
    case T::FullPSL: return "PSL(2," + field() + ")";
    case T::SubfieldPGL:
    case T::FullPGL: return "PGL(2," + field() + ")";
  }
  return "?";
}

/// Open-addressing-free element set: packs canonical forms into 64 bits when
/// every entry code fits in 16 bits, otherwise hashes the elements.
template <class F>
class ElementSet {
 public:
  explicit ElementSet(const F& f) : packed_(f.q() <= (u128{1} << 16)) {}

  bool insert(const ProjElement<F>& g) {
    if (packed_) return keys_.insert(g.key()).second;
    return elems_.insert(g).second;
  }
  bool contains(const ProjElement<F>& g) const {
    if (packed_) return keys_.count(g.key()) > 0;
    return elems_.count(g) > 0;
  }
  void reserve(std::size_t n) {
    if (packed_) keys_.reserve(n);
    else elems_.reserve(n);
  }
  std::size_t size() const { return packed_ ? keys_.size() : elems_.size(); }

 private:
  bool packed_;
  std::unordered_set<std::uint64_t> keys_;
  std::unordered_set<ProjElement<F>, ProjHash<F>> elems_;
};

/// Breadth-first closure of gens; returns nullopt once more than cap elements
/// have been found.
template <class F>
std::optional<std::vector<ProjElement<F>>> closure(const F& f, const std::vector<ProjElement<F>>& gens,
                                                   std::size_t cap) {
  std::vector<ProjElement<F>> elems{ProjElement<F>::identity(f)};
  ElementSet<F> seen(f);
  seen.insert(elems[0]);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (const auto& s : gens) {
      auto y = compose(elems[i], s);
      if (seen.insert(y)) {
        if (elems.size() >= cap) return std::nullopt;
        elems.push_back(std::move(y));
      }
    }
  }
  return elems;
}

namespace detail {

/// Orbit of a point with a transversal: trans[i] maps the base point to orbit[i].
template <class F>
struct Orbit {
  std::vector<u64> points;
  std::vector<ProjElement<F>> trans;
  std::unordered_map<u64, std::size_t> where;
};

template <class F>
Orbit<F> orbit_with_transversal(const F& f, const std::vector<ProjElement<F>>& gens, u64 base) {
  Orbit<F> o;
  o.points.push_back(base);
  o.trans.push_back(ProjElement<F>::identity(f));
  o.where[base] = 0;
  for (std::size_t i = 0; i < o.points.size(); ++i) {
    auto pt = point_from_index(f, o.points[i]);
    for (const auto& s : gens) {
      u64 img = point_index(f, apply(s, pt));
      if (!o.where.count(img)) {
        o.where[img] = o.points.size();
        o.points.push_back(img);
        o.trans.push_back(compose(s, o.trans[i]));
      }
    }
  }
  return o;
}

/// Schreier generators of the stabilizer of the orbit's base point.
template <class F>
std::vector<ProjElement<F>> schreier_generators(const F& f, const Orbit<F>& o,
                                                const std::vector<ProjElement<F>>& gens) {
  std::vector<ProjElement<F>> out;
  ElementSet<F> seen(f);
  seen.insert(ProjElement<F>::identity(f));
  for (std::size_t i = 0; i < o.points.size(); ++i) {
    auto pt = point_from_index(f, o.points[i]);
    for (const auto& s : gens) {
      u64 img = point_index(f, apply(s, pt));
      const auto& u = o.trans[o.where.at(img)];
      auto g = compose(inverse(u), compose(s, o.trans[i]));
      if (seen.insert(g)) out.push_back(std::move(g));
    }
  }
  return out;
}

}  // namespace detail

/// Exact |<gens>| from the chain PGL > stabilizer of infinity > stabilizer of
/// infinity and 0, the last being cyclic (diagonal matrices).
template <class F>
u128 group_order(const F& f, const std::vector<ProjElement<F>>& gens) {
  const u64 inf = static_cast<u64>(f.q());
  auto o1 = detail::orbit_with_transversal(f, gens, inf);
  auto s1 = detail::schreier_generators(f, o1, gens);
  if (s1.empty()) return o1.points.size();
  auto o2 = detail::orbit_with_transversal(f, s1, 0);
  // Multipliers of the Schreier generators of the two-point stabilizer; the
  // group they generate is cyclic, of order the lcm of their orders, and at
  // most (q-1)/2 inside PSL for odd q.
  u128 l = 1, lmax = f.q() - 1;
  if (f.p() != 2 && std::all_of(gens.begin(), gens.end(), [](const auto& g) { return in_psl(g); }))
    lmax /= 2;
  for (std::size_t i = 0; i < o2.points.size(); ++i) {
    auto pt = point_from_index(f, o2.points[i]);
    for (const auto& s : s1) {
      u64 img = point_index(f, apply(s, pt));
      const auto& u = o2.trans[o2.where.at(img)];
      auto g = compose(inverse(u), compose(s, o2.trans[i]));
      if (g.is_identity()) continue;
      // g = [[1,0],[0,d]]
      if (f.is_one(f.pow(g.d(), l))) continue;
      u128 m = element_order(f, g.d());
      l = l / gcd_u128(l, m) * m;
      if (l == lmax) break;
    }
    if (l == lmax) break;
  }
  return static_cast<u128>(o1.points.size()) * o2.points.size() * l;
}

template <class F>
struct SubgroupHandle {
  std::vector<ProjElement<F>> generators;
  std::optional<std::vector<ProjElement<F>>> elements;
  u128 order = 1;
  SubgroupClass cls;

  bool materialized() const { return elements.has_value(); }
};

constexpr std::size_t kDefaultClosureCap = 2'000'000;

template <class F>
SubgroupClass classify(const F& f, const SubgroupHandle<F>& h);

namespace detail {

template <class F>
bool all_commute(const std::vector<ProjElement<F>>& gens) {
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (!(compose(gens[i], gens[j]) == compose(gens[j], gens[i]))) return false;
  return true;
}

template <class F>
bool has_common_fixed_point(const F& f, const std::vector<ProjElement<F>>& gens) {
  std::vector<ProjElement<F>> nontrivial;
  for (const auto& g : gens)
    if (!g.is_identity()) nontrivial.push_back(g);
  if (nontrivial.empty()) return true;
  for (const auto& pt : fixed_points(nontrivial[0])) {
    bool ok = true;
    for (const auto& g : nontrivial) ok = ok && apply(g, pt) == pt;
    if (ok) return true;
  }
  (void)f;
  return false;
}

inline u128 p_part(u128 n, u64 p) {
  u128 r = 1;
  while (n % p == 0) {
    n /= p;
    r *= p;
  }
  return r;
}

/// Subfield degree e | d with size(p^e) == n, if any.
template <class Size>
std::optional<unsigned> subfield_degree_with_order(u64 p, unsigned d, u128 n, Size size) {
  for (u64 e : divisors(d))
    if (size(ipow(p, static_cast<unsigned>(e))) == n) return static_cast<unsigned>(e);
  return std::nullopt;
}

}  // namespace detail

template <class F>
SubgroupHandle<F> generate(const F& f, const std::vector<ProjElement<F>>& gens,
                           std::size_t cap = kDefaultClosureCap) {
  if (gens.empty()) throw Error(ErrorKind::PreconditionFailed, "generate needs at least one generator");
  for (const auto& g : gens) {
    if (&g.field() != &f) throw Error(ErrorKind::ContextMismatch, "generator over a different field");
  }
  SubgroupHandle<F> h;
  h.generators = gens;
  h.order = group_order(f, gens);
  if (h.order <= cap) {
    h.elements = closure(f, gens, cap + 1);
    if (!h.elements || h.elements->size() != h.order)
      throw Error(ErrorKind::CapExceededWithoutOrder, "closure and stabilizer chain disagree");
  }
  h.cls = classify(f, h);
  return h;
}

template <class F>
SubgroupClass classify(const F& f, const SubgroupHandle<F>& h) {
  using T = SubgroupClass::Tag;
  SubgroupClass c;
  c.p = f.p();
  c.order = h.order;
  const u128 n = h.order;
  const u64 p = f.p();
  const unsigned d = f.d();
  if (n == 1) return c;

  auto set = [&](T tag, u64 k = 1) {
    c.tag = tag;
    c.k = k;
    return c;
  };
  auto subfield = [&]() -> std::optional<SubgroupClass> {
    if (auto e = detail::subfield_degree_with_order(p, d, n, psl_order)) {
      c.e = *e;
      return set(*e == d ? T::FullPSL : T::SubfieldPSL);
    }
    if (p != 2) {
      if (auto e = detail::subfield_degree_with_order(p, d, n, pgl_order)) {
        c.e = *e;
        return set(*e == d ? T::FullPGL : T::SubfieldPGL);
      }
    }
    return std::nullopt;
  };

  const u128 pp = detail::p_part(n, p);
  if (!h.materialized()) {
    // Large subgroups: point stabilizers are affine, dihedral groups have
    // order 2k with k | q +- 1, the rest are subfield groups.
    if (pp > 1 && detail::has_common_fixed_point(f, h.generators)) {
      c.elementary = pp;
      return set(T::Affine, static_cast<u64>(n / pp));
    }
    if (auto s = subfield()) return *s;
    if (n % 2 == 0 && ((f.q() + 1) % (n / 2) == 0 || (f.q() - 1) % (n / 2) == 0)) return set(T::Dihedral, static_cast<u64>(n / 2));
    throw Error(ErrorKind::UnrecognizedSubgroup, "order " + to_string_u128(n));
  }

  std::size_t involutions = 0, p_elements = 0;
  for (const auto& g : *h.elements) {
    if (g.is_identity()) continue;
    if (is_involution(g)) ++involutions;
    // Non-identity with tr^2 = 4 det is unipotent (order p).
    if (trace_invariant(g) == f.scalar(4) || (p == 2 && is_involution(g))) ++p_elements;
  }
  if (detail::all_commute(h.generators)) {
    if (pp == n && p_elements + 1 == n) {
      if (n == p) return set(T::Cyclic, p);
      c.elementary = n;
      return set(T::Affine, 1);
    }
    if (n == 4 && involutions == 3) return set(T::Dihedral, 2);
    return set(T::Cyclic, static_cast<u64>(n));
  }
  // Full groups first so that PSL(2,4), PSL(2,5) and PGL(2,3) keep their
  // ambient names; proper small subgroups take the exceptional names.
  if (n == psl_order(f.q()) || (p != 2 && n == pgl_order(f.q()))) return *subfield();
  if (n == 12 && involutions == 3 && !(pp == 4 && p_elements == 3)) return set(T::A4);
  if (n == 24 && involutions == 9) return set(T::S4);
  if (n == 60 && involutions == 15) return set(T::A5);
  if (pp > 1 && p_elements + 1 == pp) {
    // E_p:C_2 is the dihedral group of order 2p.
    if (p != 2 && pp == p && n == 2 * pp) return set(T::Dihedral, p);
    c.elementary = pp;
    return set(T::Affine, static_cast<u64>(n / pp));
  }
  if (n % 2 == 0) {
    u128 k = n / 2;
    if (involutions == (k % 2 == 1 ? k : k + 1)) return set(T::Dihedral, static_cast<u64>(k));
  }
  if (auto s = subfield()) return *s;
  throw Error(ErrorKind::UnrecognizedSubgroup, "order " + to_string_u128(n) + " with " +
                                                   std::to_string(involutions) + " involutions");
}

template <class F>
bool contains(const SubgroupHandle<F>& h, const ProjElement<F>& g) {
  if (!h.materialized()) throw Error(ErrorKind::ElementsNotMaterialized, "membership needs elements");
  return std::find(h.elements->begin(), h.elements->end(), g) != h.elements->end();
}

template <class F>
SubgroupHandle<F> intersect(const F& f, const SubgroupHandle<F>& h1, const SubgroupHandle<F>& h2) {
  if (!h1.materialized() || !h2.materialized())
    throw Error(ErrorKind::ElementsNotMaterialized, "intersect needs both element sets");
  const auto& small = h1.order <= h2.order ? *h1.elements : *h2.elements;
  const auto& large = h1.order <= h2.order ? *h2.elements : *h1.elements;
  ElementSet<F> big(f);
  big.reserve(large.size());
  for (const auto& g : large) big.insert(g);
  SubgroupHandle<F> r;
  r.elements.emplace();
  for (const auto& g : small)
    if (big.contains(g)) r.elements->push_back(g);
  r.order = r.elements->size();
  // Generators: the whole set (small in every use), trimmed greedily.
  std::vector<ProjElement<F>> gens;
  ElementSet<F> reached(f);
  reached.insert(ProjElement<F>::identity(f));
  std::vector<ProjElement<F>> span{ProjElement<F>::identity(f)};
  for (const auto& g : *r.elements) {
    if (reached.contains(g)) continue;
    gens.push_back(g);
    span = *closure(f, gens, r.elements->size() + 1);
    for (const auto& x : span) reached.insert(x);
  }
  if (gens.empty()) gens.push_back(ProjElement<F>::identity(f));
  r.generators = gens;
  r.cls = classify(f, r);
  return r;
}

/// Degree over GF(p) of the field generated by tr^2/det over all words of
/// length <= 4 in the generators. tr^2/det of generators and products alone
/// loses the sign of tr(ab) and can miss the field of definition.
template <class F>
unsigned trace_field_degree(const F& f, const std::vector<ProjElement<F>>& gens) {
  if (gens.empty()) throw Error(ErrorKind::PreconditionFailed, "no generators");
  unsigned deg = 1;
  std::vector<ProjElement<F>> words = gens;
  ElementSet<F> seen(f);
  for (const auto& g : gens) seen.insert(g);
  for (std::size_t lo = 0, len = 1; len < 4; ++len) {
    std::size_t hi = words.size();
    for (std::size_t i = lo; i < hi; ++i)
      for (const auto& g : gens) {
        auto w = compose(words[i], g);
        if (seen.insert(w)) words.push_back(w);
      }
    lo = hi;
  }
  for (const auto& w : words) {
    deg = static_cast<unsigned>(std::lcm(deg, element_degree(f, trace_invariant(w))));
    if (deg == f.d()) break;
  }
  return deg;
}

}  // namespace chiral
