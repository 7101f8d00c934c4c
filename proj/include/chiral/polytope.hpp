#pragma once

// Rotation triples (s1, s2, s3) in PGL(2,q) and the tests that make them the
// distinguished generators of a chiral 4-polytope.
//
// Equivalence under Aut(PSL(2,q)) = PGammaL(2,q) is decided by linear algebra:
// h^-1 frob_r(X) h = Y in PGL means X h = c h Y for a scalar c fixed (up to
// sign) by trace and determinant, so every constraint is four linear
// equations in the entries of h.

#include <algorithm>
#include <array>
#include <compare>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "chiral/error.hpp"
#include "chiral/projective.hpp"
#include "chiral/subgroup.hpp"

namespace chiral {

template <class F>
struct RotationTriple {
  ProjElement<F> s1, s2, s3;

  friend bool operator==(const RotationTriple&, const RotationTriple&) = default;
};

struct SchlafliSymbol {
  u64 p1 = 0, p2 = 0, p3 = 0;

  friend auto operator<=>(const SchlafliSymbol&, const SchlafliSymbol&) = default;
  SchlafliSymbol reversed() const { return {p3, p2, p1}; }
};

inline std::string to_string(const SchlafliSymbol& s) {
  return "[" + std::to_string(s.p1) + "," + std::to_string(s.p2) + "," + std::to_string(s.p3) + "]";
}

/// Reads "[a,b,c]".
inline SchlafliSymbol parse_schlafli(const std::string& text) {
  auto v = parse_u64_list(text.substr(text.find('[') + 1, text.rfind(']') - text.find('[') - 1));
  if (v.size() != 3) throw Error(ErrorKind::Parse, "bad Schlafli symbol '" + text + "'");
  return {v[0], v[1], v[2]};
}

template <class F>
SchlafliSymbol schlafli_of(const RotationTriple<F>& t) {
  auto ord = [](const ProjElement<F>& g) {
    u128 m = proj_order(g);
    if (m < 2) throw Error(ErrorKind::DegenerateOrder, "generator is the identity");
    if (m > static_cast<u128>(~u64{0})) throw Error(ErrorKind::UnsupportedScale, "order exceeds 64 bits");
    return static_cast<u64>(m);
  };
  return {ord(t.s1), ord(t.s2), ord(t.s3)};
}

template <class F>
bool check_relations(const RotationTriple<F>& t) {
  auto s12 = compose(t.s1, t.s2);
  return is_involution(s12) && is_involution(compose(t.s2, t.s3)) && is_involution(compose(s12, t.s3));
}

/// |<a> ∩ <b>| without materializing either group. Distinct nontrivial
/// powers of an element share its fixed points, so a nontrivial intersection
/// forces a and b into one maximal torus (or one unipotent group), where
/// subgroups of orders m and n meet in a subgroup of order gcd(m, n). The one
/// exception is a pair of commuting involutions with different fixed points.
template <class F>
u128 cyclic_intersection_order(const ProjElement<F>& a, const ProjElement<F>& b) {
  if (a.is_identity() || b.is_identity()) return 1;
  if (!(compose(a, b) == compose(b, a))) return 1;
  u128 m = proj_order(a), n = proj_order(b);
  if (m == 2 && n == 2) return a == b ? 2 : 1;
  const F& f = a.field();
  if (m == f.p() && n == f.p() && f.d() > 1) {
    // Commuting p-elements lie in one elementary abelian group, which is
    // cyclic only over a prime field.
    auto x = a;
    for (u64 i = 1; i < f.p(); ++i, x = compose(x, a))
      if (x == b) return m;
    return 1;
  }
  if (m == 2 || n == 2) {
    // An involution commuting with an element of order > 2 lies in its torus
    // exactly when it is the unique involution there, i.e. a power of it.
    const auto& inv = m == 2 ? a : b;
    const auto& other = m == 2 ? b : a;
    u128 o = m == 2 ? n : m;
    if (o % 2 != 0) return 1;
    return power(other, static_cast<long long>(o / 2)) == inv ? 2 : 1;
  }
  return gcd_u128(m, n);
}

template <class F>
RotationTriple<F> dual(const RotationTriple<F>& t) {
  return {inverse(t.s3), inverse(t.s2), inverse(t.s1)};
}

template <class F>
RotationTriple<F> enantiomorph(const RotationTriple<F>& t) {
  return {inverse(t.s1), compose(compose(t.s1, t.s1), t.s2), t.s3};
}

// ---------------------------------------------------------------------------
// Transporters in PGammaL(2,q)
// ---------------------------------------------------------------------------

/// (r, h) acting as g -> h^-1 frob_r(g) h.
template <class F>
struct SemilinearMap {
  unsigned r = 0;
  ProjElement<F> h;

  ProjElement<F> operator()(const ProjElement<F>& g) const { return conjugate(frobenius(g, r), h); }
  RotationTriple<F> operator()(const RotationTriple<F>& t) const { return {(*this)(t.s1), (*this)(t.s2), (*this)(t.s3)}; }
};

namespace detail {

template <class F>
using Row4 = std::array<typename F::Elem, 4>;

/// Basis of the null space of a k x 4 system.
template <class F>
std::vector<Row4<F>> null_space(const F& f, std::vector<Row4<F>> rows) {
  std::array<int, 4> pivot_row{-1, -1, -1, -1};
  std::size_t r = 0;
  for (int col = 0; col < 4 && r < rows.size(); ++col) {
    std::size_t sel = r;
    while (sel < rows.size() && f.is_zero(rows[sel][col])) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[r]);
    auto inv = f.inv(rows[r][col]);
    for (auto& x : rows[r]) x = f.mul(x, inv);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || f.is_zero(rows[i][col])) continue;
      auto c = rows[i][col];
      for (int k = 0; k < 4; ++k) rows[i][k] = f.sub(rows[i][k], f.mul(c, rows[r][k]));
    }
    pivot_row[col] = static_cast<int>(r);
    ++r;
  }
  std::vector<Row4<F>> basis;
  for (int free = 0; free < 4; ++free) {
    if (pivot_row[free] >= 0) continue;
    Row4<F> v{f.zero(), f.zero(), f.zero(), f.zero()};
    v[free] = f.one();
    for (int col = 0; col < 4; ++col)
      if (pivot_row[col] >= 0) v[col] = f.neg(rows[pivot_row[col]][free]);
    basis.push_back(v);
  }
  return basis;
}

/// Scalars c with X ~ cY in GL(2,q): tr X = c tr Y and det X = c^2 det Y.
template <class F>
std::vector<typename F::Elem> conjugation_scalars(const F& f, const ProjElement<F>& X, const ProjElement<F>& Y) {
  auto tx = X.trace(), ty = Y.trace(), dx = X.det(), dy = Y.det();
  if (!f.is_zero(ty)) {
    auto c = f.div(tx, ty);
    if (f.is_zero(c) || !(f.mul(f.mul(c, c), dy) == dx)) return {};
    return {c};
  }
  if (!f.is_zero(tx)) return {};
  auto c2 = f.div(dx, dy);
  if (!is_square(f, c2)) return {};
  auto c = sqrt(f, c2);
  if (f.p() == 2) return {c};
  return {c, f.neg(c)};
}

/// Rows of X h - c h Y = 0, unknowns (h11, h12, h21, h22).
template <class F>
void append_rows(const F& f, const ProjElement<F>& X, const ProjElement<F>& Y, const typename F::Elem& c,
                 std::vector<Row4<F>>& rows) {
  const auto& x = X.entries();
  const auto& y = Y.entries();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Row4<F> row{f.zero(), f.zero(), f.zero(), f.zero()};
      for (int k = 0; k < 2; ++k) {
        // (X h)_ij contains X_ik h_kj; (h Y)_ij contains h_ik Y_kj.
        row[2 * k + j] = f.add(row[2 * k + j], x[2 * i + k]);
        row[2 * i + k] = f.sub(row[2 * i + k], f.mul(c, y[2 * k + j]));
      }
      rows.push_back(row);
    }
}

template <class F>
std::optional<ProjElement<F>> as_element(const F& f, const Row4<F>& v) {
  if (f.is_zero(f.sub(f.mul(v[0], v[3]), f.mul(v[1], v[2])))) return std::nullopt;
  return ProjElement<F>(f, v[0], v[1], v[2], v[3]);
}

/// Calls visit(space) for each choice of scalars; space is a null-space basis.
template <class F, class Visit>
void for_each_solution_space(const F& f, const std::vector<std::pair<ProjElement<F>, ProjElement<F>>>& pairs,
                             Visit&& visit) {
  std::vector<std::vector<typename F::Elem>> choices;
  for (const auto& [X, Y] : pairs) {
    if (!(trace_invariant(X) == trace_invariant(Y))) return;
    choices.push_back(conjugation_scalars(f, X, Y));
    if (choices.back().empty()) return;
  }
  std::vector<std::size_t> idx(pairs.size(), 0);
  for (;;) {
    std::vector<Row4<F>> rows;
    for (std::size_t i = 0; i < pairs.size(); ++i) append_rows(f, pairs[i].first, pairs[i].second, choices[i][idx[i]], rows);
    if (!visit(null_space(f, rows))) return;
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == choices[i].size()) idx[i++] = 0;
    if (i == idx.size()) return;
  }
}

template <class F>
Row4<F> combine(const F& f, const Row4<F>& u, const typename F::Elem& a, const Row4<F>& v, const typename F::Elem& b) {
  Row4<F> w;
  for (int i = 0; i < 4; ++i) w[i] = f.add(f.mul(a, u[i]), f.mul(b, v[i]));
  return w;
}

}  // namespace detail

/// All h in PGL(2,q) with X_i h = c_i h Y_i for every pair. Enumerates at
/// most a projective line of candidates, so the pairs must include a
/// non-scalar element.
template <class F>
std::vector<ProjElement<F>> all_transporters(const F& f,
                                             const std::vector<std::pair<ProjElement<F>, ProjElement<F>>>& pairs) {
  std::vector<ProjElement<F>> out;
  detail::for_each_solution_space(f, pairs, [&](const std::vector<detail::Row4<F>>& basis) {
    if (basis.size() == 1) {
      if (auto h = detail::as_element(f, basis[0])) out.push_back(*h);
    } else if (basis.size() == 2) {
      if (auto h = detail::as_element(f, basis[0])) out.push_back(*h);
      for (u128 x = 0; x < f.q(); ++x)
        if (auto h = detail::as_element(f, detail::combine(f, basis[0], f.from_code(x), basis[1], f.one())))
          out.push_back(*h);
    } else if (basis.size() > 2) {
      throw Error(ErrorKind::PreconditionFailed, "transporter space too large to enumerate");
    }
    return true;
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Some h solving the pairs, preferring the least canonical form among the
/// candidates examined.
template <class F>
std::optional<ProjElement<F>> find_transporter(const F& f,
                                               const std::vector<std::pair<ProjElement<F>, ProjElement<F>>>& pairs) {
  std::optional<ProjElement<F>> best;
  auto offer = [&](const detail::Row4<F>& v) {
    if (auto h = detail::as_element(f, v))
      if (!best || *h < *best) best = h;
  };
  detail::for_each_solution_space(f, pairs, [&](const std::vector<detail::Row4<F>>& basis) {
    for (const auto& v : basis) offer(v);
    // det on a 2-dimensional slice is a binary quadratic form: it has at most
    // two projective zeros unless it vanishes identically.
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = i + 1; j < basis.size(); ++j)
        for (long long x = 1; x <= 3; ++x) offer(detail::combine(f, basis[i], f.scalar(x), basis[j], f.one()));
    return true;
  });
  return best;
}

/// Least (r, h) in PGammaL(2,q) carrying t1 onto t2 componentwise.
template <class F>
std::optional<SemilinearMap<F>> find_equivalence(const RotationTriple<F>& t1, const RotationTriple<F>& t2) {
  const F& f = t1.s1.field();
  for (unsigned r = 0; r < f.d(); ++r) {
    auto a = frobenius(t1.s1, r), b = frobenius(t1.s2, r), c = frobenius(t1.s3, r);
    auto h = find_transporter(f, {{a, t2.s1}, {b, t2.s2}, {c, t2.s3}});
    if (h) return SemilinearMap<F>{r, *h};
  }
  return std::nullopt;
}

template <class F>
bool are_equivalent(const RotationTriple<F>& t1, const RotationTriple<F>& t2) {
  require_same_field(t1.s1, t2.s1);
  return find_equivalence(t1, t2).has_value();
}

/// Stabilizer of g in PGammaL(2,q) under g -> h^-1 frob_r(g) h.
template <class F>
std::vector<SemilinearMap<F>> stabilizer(const ProjElement<F>& g) {
  const F& f = g.field();
  std::vector<SemilinearMap<F>> out;
  for (unsigned r = 0; r < f.d(); ++r)
    for (const auto& h : all_transporters(f, {{frobenius(g, r), g}})) out.push_back({r, h});
  return out;
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// |H1 ∩ H2| for materialized subgroups.
template <class F>
std::size_t intersection_order(const F& f, const std::vector<ProjElement<F>>& h1, const std::vector<ProjElement<F>>& h2) {
  const auto& small = h1.size() <= h2.size() ? h1 : h2;
  const auto& large = h1.size() <= h2.size() ? h2 : h1;
  ElementSet<F> set(f);
  set.reserve(large.size());
  for (const auto& g : large) set.insert(g);
  std::size_t n = 0;
  for (const auto& g : small) n += set.contains(g);
  return n;
}

template <class F>
bool check_intersection(const RotationTriple<F>& t, std::size_t cap = kDefaultClosureCap) {
  if (cyclic_intersection_order(t.s1, t.s2) != 1 || cyclic_intersection_order(t.s2, t.s3) != 1) return false;
  const F& f = t.s1.field();
  auto h1 = closure(f, {t.s1, t.s2}, cap);
  auto h2 = closure(f, {t.s2, t.s3}, cap);
  if (!h1 || !h2) throw Error(ErrorKind::ParabolicTooLarge, "parabolic subgroup exceeds the closure cap");
  return intersection_order(f, *h1, *h2) == proj_order(t.s2);
}

/// Whether <gens> contains PSL(2,q), decided from Dickson's list without
/// building the group: subfield groups are ruled out by the trace field,
/// affine groups by the absence of a common fixed point, A4/S4/A5 by
/// overflowing a 60-element closure, and cyclic or dihedral groups by a
/// generator that neither fixes nor inverts some element of order > 2.
template <class F>
bool dickson_contains_psl(const F& f, const std::vector<ProjElement<F>>& gens) {
  const u128 q = f.q();
  if (auto small = closure(f, gens, 60)) return small->size() >= psl_order(q);
  if (trace_field_degree(f, gens) != f.d()) return false;
  if (detail::has_common_fixed_point(f, gens)) return false;
  // A group with more than 60 elements has an element of order > 2 among
  // short words unless it is elementary abelian of even order, which has a
  // common fixed point.
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
    if (w.is_identity() || proj_order(w) <= 2) continue;
    auto wi = inverse(w);
    for (const auto& g : gens) {
      auto c = conjugate(w, g);
      if (!(c == w) && !(c == wi)) return true;
    }
    return false;  // every generator normalizes <w>: cyclic or dihedral
  }
  throw Error(ErrorKind::PreconditionFailed, "no element of order > 2 among short words");
}

/// Whether <s1,s2,s3> is the whole of `expected` (FullPSL or FullPGL; the two
/// coincide for even q). Exact via the stabilizer chain while q <= 2^20,
/// otherwise the Dickson test plus determinant squareness.
template <class F>
bool check_generation(const RotationTriple<F>& t, SubgroupClass::Tag expected) {
  using T = SubgroupClass::Tag;
  const F& f = t.s1.field();
  const u128 q = f.q();
  const bool all_psl = in_psl(t.s1) && in_psl(t.s2) && in_psl(t.s3);
  if (q % 2 == 0) expected = T::FullPSL;
  if (expected == T::FullPSL && !all_psl) return false;
  if (expected == T::FullPGL && all_psl) return false;
  if (q <= (u128{1} << 20)) {
    u128 n = group_order(f, {t.s1, t.s2, t.s3});
    return n == (expected == T::FullPSL ? psl_order(q) : pgl_order(q));
  }
  return dickson_contains_psl(f, {t.s1, t.s2, t.s3});
}

template <class F>
bool is_chiral(const RotationTriple<F>& t) {
  if (!check_relations(t)) throw Error(ErrorKind::PreconditionFailed, "triple fails the involution relations");
  return !are_equivalent(t, enantiomorph(t));
}

/// Whether s1 -> s1^-1, s2 -> s1^2 s2, si -> si (i >= 3) extends to an
/// automorphism of <s1, ..., sm>, i.e. the polytope with these rotations is
/// directly regular. Checked as a homomorphism on the materialized group.
template <class F>
bool admits_reflection(const std::vector<ProjElement<F>>& gens, std::size_t cap = kDefaultClosureCap) {
  if (gens.empty()) return true;
  const F& f = gens[0].field();
  std::vector<ProjElement<F>> imgs = gens;
  imgs[0] = inverse(gens[0]);
  if (gens.size() > 1) imgs[1] = compose(compose(gens[0], gens[0]), gens[1]);
  std::vector<ProjElement<F>> elems{ProjElement<F>::identity(f)}, phi{ProjElement<F>::identity(f)};
  std::unordered_map<ProjElement<F>, std::size_t, ProjHash<F>> index{{elems[0], 0}};
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t s = 0; s < gens.size(); ++s) {
      auto y = compose(elems[i], gens[s]);
      auto img = compose(phi[i], imgs[s]);
      auto it = index.find(y);
      if (it == index.end()) {
        if (elems.size() >= cap) throw Error(ErrorKind::ParabolicTooLarge, "section group exceeds the closure cap");
        index.emplace(y, elems.size());
        elems.push_back(y);
        phi.push_back(img);
      } else if (!(phi[it->second] == img)) {
        return false;
      }
    }
  }
  return true;
}

/// The (n-2)-faces and the cofaces of edges of a chiral n-polytope are
/// directly regular. Their rotation groups are generated by the first n-3
/// and the last n-3 generators; for rank 4 these are the polygons <s1>, <s3>.
template <class F>
bool sections_directly_regular(const std::vector<ProjElement<F>>& rotations) {
  if (rotations.size() < 3) return true;
  std::size_t m = rotations.size() - 2;
  std::vector<ProjElement<F>> lower(rotations.begin(), rotations.begin() + m);
  std::vector<ProjElement<F>> upper(rotations.end() - m, rotations.end());
  return admits_reflection(lower) && admits_reflection(upper);
}

template <class F>
bool sections_directly_regular(const RotationTriple<F>& t) {
  return sections_directly_regular(std::vector<ProjElement<F>>{t.s1, t.s2, t.s3});
}

/// Facet <s1,s2> and vertex-figure <s2,s3>: each is either chiral or
/// directly regular.
template <class F>
std::pair<bool, bool> faces_directly_regular(const RotationTriple<F>& t) {
  return {admits_reflection<F>({t.s1, t.s2}), admits_reflection<F>({t.s2, t.s3})};
}

/// Invariant tuple used to bucket triples before transporter tests: the
/// Schläfli symbol and tr^2/det of s1, s2, s3, s1 s3, taken Frobenius-minimal.
struct Fingerprint {
  SchlafliSymbol schlafli;
  std::vector<u128> invariants;

  friend auto operator<=>(const Fingerprint&, const Fingerprint&) = default;
};

template <class F>
Fingerprint fingerprint(const RotationTriple<F>& t) {
  const F& f = t.s1.field();
  std::vector<typename F::Elem> inv{trace_invariant(t.s1), trace_invariant(t.s2), trace_invariant(t.s3),
                                    trace_invariant(compose(t.s1, t.s3))};
  std::vector<u128> best;
  for (unsigned r = 0; r < f.d(); ++r) {
    std::vector<u128> codes;
    for (const auto& x : inv) codes.push_back(f.code(f.frobenius(x, r)));
    if (best.empty() || codes < best) best = codes;
  }
  return {schlafli_of(t), best};
}

template <class F>
struct PolytopeRecord {
  RotationTriple<F> triple;
  SchlafliSymbol schlafli;
  SubgroupClass group;
  SubgroupClass parabolic1, parabolic2;
  std::string provenance;
};

struct Verification {
  bool relations = false;
  bool intersection = false;
  bool generation = false;
  bool chiral = false;

  bool ok() const { return relations && intersection && generation && chiral; }
};

template <class F>
Verification verify(const RotationTriple<F>& t, SubgroupClass::Tag expected) {
  Verification v;
  for (const auto* g : {&t.s1, &t.s2, &t.s3})
    if (g->is_identity()) return v;
  v.relations = check_relations(t);
  if (!v.relations) return v;
  v.intersection = check_intersection(t);
  v.generation = check_generation(t, expected);
  v.chiral = is_chiral(t);
  return v;
}

/// Builds the record of a verified triple; throws PreconditionFailed when a
/// check fails.
template <class F>
PolytopeRecord<F> make_record(const RotationTriple<F>& t, SubgroupClass::Tag expected, std::string provenance) {
  auto v = verify(t, expected);
  if (!v.ok()) throw Error(ErrorKind::PreconditionFailed, "triple is not a chiral 4-polytope");
  const F& f = t.s1.field();
  PolytopeRecord<F> r;
  r.triple = t;
  r.schlafli = schlafli_of(t);
  r.group = generate(f, {t.s1, t.s2, t.s3}, 0).cls;
  r.parabolic1 = generate(f, {t.s1, t.s2}).cls;
  r.parabolic2 = generate(f, {t.s2, t.s3}).cls;
  r.provenance = std::move(provenance);
  return r;
}

template <class F>
std::string group_name(const F& f, SubgroupClass::Tag tag) {
  bool pgl = tag == SubgroupClass::Tag::FullPGL;
  return std::string(pgl ? "PGL" : "PSL") + "(2," + to_string_u128(f.q()) + ")";
}

}  // namespace chiral
