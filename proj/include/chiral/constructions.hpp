#pragma once

// Explicit families of chiral 4-polytopes.
//
//  - Affine families: sigma2 = diag(j^l, 1), sigma1 = [[-j^-l, 1], [0, 1]],
//    sigma3 = [[1, 0], [1 + j^l, -j^l]] in PGL(2,q), or in PSL(2,q) when
//    q = 1 (mod 4) and j^l is a square.
//  - [5,3,4], [5,3,5], [3,5,3]: an icosahedral pair (sigma1, sigma2) is
//    completed by the sigma3 of prescribed trace solving tr(sigma2 sigma3) = 0
//    and tr(sigma1 sigma2 sigma3) = 0 with det 1.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "chiral/enumerator.hpp"
#include "chiral/polytope.hpp"

namespace chiral {

/// Whether k divides p^e - 1 or p^e + 1 for some 1 <= e < d.
inline bool divides_smaller_field(u64 k, u64 p, unsigned d) {
  u64 pe = 1;
  for (unsigned e = 1; e < d; ++e) {
    pe = static_cast<u64>((static_cast<u128>(pe) * p) % k);
    if ((pe + k - 1) % k == 0 || (pe + 1) % k == 0) return true;
  }
  return false;
}

template <class F>
RotationTriple<F> affine_triple(const F& f, u64 l) {
  auto j = primitive_element(f);
  auto x = f.pow(j, l);
  u64 k = static_cast<u64>(element_order(f, x));
  if (k <= 2) throw Error(ErrorKind::OrderTooSmall, "j^l has order " + std::to_string(k));
  auto one = f.one();
  ProjElement<F> s1(f, f.neg(f.inv(x)), one, f.zero(), one);
  ProjElement<F> s2(f, x, f.zero(), f.zero(), one);
  ProjElement<F> s3(f, one, f.zero(), f.add(one, x), f.neg(x));
  return {s1, s2, s3};
}

template <class F>
RotationTriple<F> pgl_triple(const F& f, u64 l) {
  return affine_triple(f, l);
}

struct FamilyMember {
  u64 k = 0;
  std::vector<u64> ls;  // least exponent of each Frobenius orbit of order-k powers of j
  u64 predicted = 0;    // phi(k) / d
  SchlafliSymbol type;
};

namespace detail {

/// Exponents l in [1, q-1] with |j^l| = k, least in {l p^r mod (q-1)}.
inline std::vector<u64> orbit_exponents(u64 q, u64 p, unsigned d, u64 k) {
  std::vector<u64> out;
  const u64 n = q - 1;
  for (u64 l = 1; l <= n; ++l) {
    if (n / std::gcd(l, n) != k) continue;
    bool least = true;
    u64 m = l;
    for (unsigned r = 1; r < d && least; ++r) {
      m = static_cast<u64>((static_cast<u128>(m) * p) % n);
      least = m >= l;
    }
    if (least) out.push_back(l);
  }
  return out;
}

inline FamilyMember make_member(u64 q, u64 p, unsigned d, u64 k, SchlafliSymbol type) {
  FamilyMember m;
  m.k = k;
  m.ls = orbit_exponents(q, p, d, k);
  m.predicted = euler_phi(k) / d;
  m.type = type;
  return m;
}

}  // namespace detail

/// k > 2 with k | q-1, k ∤ (q-1)/2 and k ∤ p^e ± 1 for e < d.
inline std::vector<FamilyMember> pgl_family(u64 p, unsigned d) {
  const u64 q = static_cast<u64>(ipow(p, d));
  std::vector<FamilyMember> out;
  if (q <= 4) return out;
  for (u64 k : divisors(q - 1)) {
    if (k <= 2 || ((q - 1) / 2) % k == 0 || divides_smaller_field(k, p, d)) continue;
    SchlafliSymbol type = q % 4 == 3 ? SchlafliSymbol{k / 2, k, k / 2} : SchlafliSymbol{k, k, k};
    out.push_back(detail::make_member(q, p, d, k, type));
  }
  return out;
}

/// Even k > 2 with k | (q-1)/2 and k ∤ p^e ± 1 for e < d; q = 1 (mod 4).
inline std::vector<FamilyMember> psl_family(u64 p, unsigned d) {
  const u64 q = static_cast<u64>(ipow(p, d));
  if (q % 4 != 1) throw Error(ErrorKind::WrongResidue, "q must be 1 mod 4");
  std::vector<FamilyMember> out;
  for (u64 k : divisors((q - 1) / 2)) {
    if (k <= 2 || k % 2 != 0 || divides_smaller_field(k, p, d)) continue;
    SchlafliSymbol type = k % 4 == 0 ? SchlafliSymbol{k, k, k} : SchlafliSymbol{k / 2, k, k / 2};
    out.push_back(detail::make_member(q, p, d, k, type));
  }
  return out;
}

template <class F>
std::vector<FamilyMember> pgl_family(const F& f) {
  return pgl_family(f.p(), f.d());
}

template <class F>
std::vector<FamilyMember> psl_family(const F& f) {
  return psl_family(f.p(), f.d());
}

// ---------------------------------------------------------------------------
// Icosahedral pairs and the Coxeter families
// ---------------------------------------------------------------------------

template <class F>
struct IcosahedralPair {
  ProjElement<F> s1, s2;  // orders 5 and 3, product an involution
  int branch = 1;         // t = (-1 + sqrt5)/2 for branch 1, (-1 - sqrt5)/2 for branch 2
  typename F::Elem t, a, b;
};

/// The embeddings psi_1, psi_2 of <s1, s2 | s1^5, s2^3, (s1 s2)^2> into
/// PSL(2,q), with a the first nonzero field element (in code order) for
/// which t^2 - 3 - a^2 is a square and b its canonical square root.
template <class F>
std::array<IcosahedralPair<F>, 2> icosahedral_embeddings(const F& f) {
  const auto five = f.scalar(5);
  if (f.p() == 2 || f.p() == 5 || !is_square(f, five))
    throw Error(ErrorKind::NoSqrt5, "no usable square root of 5 in GF(" + to_string_u128(f.q()) + ")");
  const auto r5 = sqrt(f, five);
  const auto half = f.inv(f.scalar(2));
  std::array<IcosahedralPair<F>, 2> out;
  for (int i = 0; i < 2; ++i) {
    auto t = f.mul(half, i == 0 ? f.sub(r5, f.one()) : f.neg(f.add(r5, f.one())));
    auto rhs = f.sub(f.mul(t, t), f.scalar(3));
    std::optional<typename F::Elem> a, b;
    for (u128 code = 1; code < f.q() && !a; ++code) {
      auto x = f.from_code(code);
      auto rest = f.sub(rhs, f.mul(x, x));
      if (is_square(f, rest)) a = x, b = sqrt(f, rest);
    }
    if (!a) throw Error(ErrorKind::PreconditionFailed, "no (a, b) with a^2 + b^2 = t^2 - 3");
    auto h = [&](const typename F::Elem& x) { return f.mul(half, x); };
    auto one = f.one();
    ProjElement<F> s1(f, h(f.sub(t, *b)), h(f.add(*a, one)), h(f.sub(*a, one)), h(f.add(t, *b)));
    ProjElement<F> s2(f, h(f.add(*a, one)), h(f.add(t, *b)), h(f.sub(*b, t)), h(f.sub(one, *a)));
    out[i] = IcosahedralPair<F>{s1, s2, i + 1, t, *a, *b};
  }
  return out;
}

/// Discriminant of (a^2 + b^2) x^2 + sqrt2 b x + (a^2 + 1)/2, which is
/// 2b^2 - 2(a^2 + b^2)(a^2 + 1) and equals a^2 (2t + 2).
template <class F>
typename F::Elem quad_discriminant(const F& f, const IcosahedralPair<F>& pr) {
  auto a2 = f.mul(pr.a, pr.a), b2 = f.mul(pr.b, pr.b), two = f.scalar(2);
  return f.sub(f.mul(two, b2), f.mul(f.mul(two, f.add(a2, b2)), f.add(a2, f.one())));
}

namespace detail {

/// SL(2) representative: scale so that det = 1 (exists when det is a square).
template <class F>
std::array<typename F::Elem, 4> sl_matrix(const F& f, const ProjElement<F>& g) {
  auto e = g.entries();
  auto s = f.inv(sqrt(f, g.det()));
  for (auto& x : e) x = f.mul(x, s);
  return e;
}

template <class F>
std::array<typename F::Elem, 4> mat_mul(const F& f, const std::array<typename F::Elem, 4>& x,
                                        const std::array<typename F::Elem, 4>& y) {
  return {f.add(f.mul(x[0], y[0]), f.mul(x[1], y[2])), f.add(f.mul(x[0], y[1]), f.mul(x[1], y[3])),
          f.add(f.mul(x[2], y[0]), f.mul(x[3], y[2])), f.add(f.mul(x[2], y[1]), f.mul(x[3], y[3]))};
}

}  // namespace detail

/// Every sigma3 in PSL(2,q) with tr(sigma3)^2 = target (det 1),
/// tr(s2 sigma3) = 0 and tr(s1 s2 sigma3) = 0. Returns 0, 1 or 2 triples.
template <class F>
std::vector<RotationTriple<F>> complete_triple(const F& f, const ProjElement<F>& s1, const ProjElement<F>& s2,
                                               const typename F::Elem& target_trace_sq) {
  std::vector<RotationTriple<F>> out;
  if (!is_square(f, target_trace_sq)) return out;
  const auto tau = sqrt(f, target_trace_sq);
  const auto m2 = detail::sl_matrix(f, s2);
  const auto m12 = detail::mat_mul(f, detail::sl_matrix(f, s1), m2);
  // Unknowns (w, x, y, z) of [[w, x], [y, z]]: tr(M S) = M11 w + M21 x + M12 y + M22 z.
  using E = typename F::Elem;
  std::vector<std::array<E, 5>> rows{{f.one(), f.zero(), f.zero(), f.one(), tau},
                                     {m2[0], m2[2], m2[1], m2[3], f.zero()},
                                     {m12[0], m12[2], m12[1], m12[3], f.zero()}};
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
      for (int k = 0; k < 5; ++k) rows[i][k] = f.sub(rows[i][k], f.mul(c, rows[r][k]));
    }
    pivot_row[col] = static_cast<int>(r);
    ++r;
  }
  for (std::size_t i = r; i < rows.size(); ++i)
    if (!f.is_zero(rows[i][4])) return out;  // inconsistent
  int free_col = -1, n_free = 0;
  for (int c = 0; c < 4; ++c)
    if (pivot_row[c] < 0) free_col = c, ++n_free;
  if (n_free != 1) throw Error(ErrorKind::PreconditionFailed, "s1 s2 commutes with s2");
  std::array<E, 4> base{f.zero(), f.zero(), f.zero(), f.zero()}, dir = base;
  dir[free_col] = f.one();
  for (int c = 0; c < 4; ++c)
    if (pivot_row[c] >= 0) {
      base[c] = rows[pivot_row[c]][4];
      dir[c] = f.neg(rows[pivot_row[c]][free_col]);
    }
  // det(base + s dir) = 1 is A s^2 + B s + C = 0.
  auto det = [&](const std::array<E, 4>& m) { return f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2])); };
  auto A = det(dir);
  auto B = f.sub(f.add(f.mul(base[0], dir[3]), f.mul(base[3], dir[0])), f.add(f.mul(base[1], dir[2]), f.mul(base[2], dir[1])));
  auto C = f.sub(det(base), f.one());
  std::vector<E> roots;
  if (f.is_zero(A)) {
    if (!f.is_zero(B)) roots.push_back(f.neg(f.div(C, B)));
  } else {
    auto disc = f.sub(f.mul(B, B), f.mul(f.scalar(4), f.mul(A, C)));
    if (!is_square(f, disc)) return out;
    auto sd = sqrt(f, disc);
    auto den = f.inv(f.mul(f.scalar(2), A));
    roots.push_back(f.mul(f.sub(sd, B), den));
    if (!f.is_zero(sd)) roots.push_back(f.mul(f.sub(f.neg(sd), B), den));
  }
  for (const auto& s : roots) {
    std::array<E, 4> m;
    for (int i = 0; i < 4; ++i) m[i] = f.add(base[i], f.mul(s, dir[i]));
    out.push_back({s1, s2, ProjElement<F>(f, m[0], m[1], m[2], m[3])});
  }
  return out;
}

template <class F>
std::vector<RotationTriple<F>> complete_triple(const IcosahedralPair<F>& pr, const typename F::Elem& target) {
  return complete_triple(pr.s1.field(), pr.s1, pr.s2, target);
}

enum class CoxeterFamily { T534, T535, T353 };

inline const char* to_string(CoxeterFamily c) {
  switch (c) {
    case CoxeterFamily::T534: return "534";
    case CoxeterFamily::T535: return "535";
    case CoxeterFamily::T353: return "353";
  }
  return "?";
}

template <class F>
struct Candidate {
  RotationTriple<F> triple;
  Verification verdict;
  int branch = 0;
};

template <class F>
struct FamilyBuild {
  std::vector<PolytopeRecord<F>> records;  // verified chiral, pairwise inequivalent
  std::vector<Candidate<F>> candidates;    // every completed triple, verified or not

  /// Candidates with the whole group that admit a reflection. These are
  /// not directly regular, so the rotation form of the intersection
  /// condition does not apply to them and is not required.
  std::vector<Candidate<F>> regular() const {
    std::vector<Candidate<F>> out;
    for (const auto& c : candidates) {
      const auto& v = c.verdict;
      if (v.relations && v.generation && !v.chiral) out.push_back(c);
    }
    return out;
  }
};

/// Completes both icosahedral branches into triples of the given family in
/// PSL(2,q) and keeps the verified chiral ones, up to PGammaL-equivalence.
/// Empty when 5 has no square root (the parabolics cannot be icosahedral).
template <class F>
FamilyBuild<F> build_family(const F& f, CoxeterFamily fam) {
  FamilyBuild<F> out;
  if (f.p() == 2 || f.p() == 5 || !is_square(f, f.scalar(5))) return out;
  auto pairs = icosahedral_embeddings(f);
  for (const auto& pr : pairs) {
    ProjElement<F> a = pr.s1, b = pr.s2;
    std::vector<typename F::Elem> targets;
    switch (fam) {
      case CoxeterFamily::T534: targets = {f.scalar(2)}; break;
      case CoxeterFamily::T535:
        for (const auto& q : pairs) targets.push_back(f.mul(q.t, q.t));
        break;
      case CoxeterFamily::T353:
        std::swap(a, b);  // order 3 first: s2 s1 is an involution too
        targets = {f.one()};
        break;
    }
    for (const auto& target : targets)
      for (const auto& t : complete_triple(f, a, b, target)) {
        Candidate<F> c{t, verify(t, SubgroupClass::Tag::FullPSL), pr.branch};
        out.candidates.push_back(c);
        if (!c.verdict.ok()) continue;
        bool dup = false;
        for (const auto& r : out.records) dup = dup || are_equivalent(r.triple, t);
        if (dup) continue;
        PolytopeRecord<F> rec = detail::enumerated_record(f, t, GroupKind::PSL);
        rec.provenance = to_string(fam);
        out.records.push_back(rec);
      }
  }
  return out;
}

template <class F>
FamilyBuild<F> build_family_534(const F& f) {
  return build_family(f, CoxeterFamily::T534);
}
template <class F>
FamilyBuild<F> build_family_535(const F& f) {
  return build_family(f, CoxeterFamily::T535);
}
template <class F>
FamilyBuild<F> build_family_353(const F& f) {
  return build_family(f, CoxeterFamily::T353);
}

/// Verified records of an affine family: one per Frobenius orbit of each
/// admissible k, in PGL(2,q) or PSL(2,q).
template <class F>
std::vector<PolytopeRecord<F>> build_affine_family(const F& f, GroupKind kind) {
  auto members = kind == GroupKind::PGL ? pgl_family(f) : psl_family(f);
  std::vector<PolytopeRecord<F>> out;
  for (const auto& m : members)
    for (u64 l : m.ls) {
      auto t = affine_triple(f, l);
      if (!verify(t, full_tag(kind)).ok()) throw Error(ErrorKind::PreconditionFailed, "affine triple failed verification");
      auto rec = detail::enumerated_record(f, t, kind);
      rec.provenance = std::string(kind == GroupKind::PGL ? "pgl" : "psl") + " k=" + std::to_string(m.k);
      out.push_back(rec);
    }
  return out;
}

}  // namespace chiral
