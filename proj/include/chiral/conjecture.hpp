#pragma once

// Candidate generators for PSL(2,p^d), d odd and not a prime power.
//
// With omega_i = j_i + 1/j_i for primitive j_i in GF(p^e_i), the triple
//   sigma1 = [[w1, w1 + 2], [w1 - 2, w1]],  sigma2 = [[2 + w1, w1], [-w1, 2 - w1]],
//   sigma3 = [[w2 (w1 - 2), s], [s, w2 (w1 + 2)]],  s^2 = Omega,
// has sigma1 sigma2 and sigma2 sigma3 and sigma1 sigma2 sigma3 involutions
// whenever Omega = w1^2 w2^2 - 4 (w1^2 + w2^2) is a square in GF(p^lcm).

#include <atomic>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "chiral/enumerator.hpp"
#include "chiral/polytope.hpp"
#include "chiral/subfield.hpp"

namespace chiral {

/// GF(p^e1), GF(p^e2) and GF(p^lcm(e1,e2)) with fixed embeddings.
class ConjectureLab {
 public:
  ConjectureLab(u64 p, unsigned e1, unsigned e2)
      : p_(p), e1_(e1), e2_(e2), e_(std::lcm(e1, e2)) {
    if (p == 2 || !is_prime(p)) throw Error(ErrorKind::PreconditionFailed, "p must be an odd prime");
    if (e1 == 0 || e2 == 0) throw Error(ErrorKind::PreconditionFailed, "degrees must be positive");
    f1_ = std::make_unique<Field>(make_field_spec(p, e1));
    f2_ = std::make_unique<Field>(make_field_spec(p, e2));
    big_ = std::make_unique<Field>(make_field_spec(p, e_));
    emb1_ = std::make_unique<SubfieldEmbedding<Field, Field>>(*f1_, *big_);
    emb2_ = std::make_unique<SubfieldEmbedding<Field, Field>>(*f2_, *big_);
  }

  u64 p() const { return p_; }
  unsigned e1() const { return e1_; }
  unsigned e2() const { return e2_; }
  unsigned e() const { return e_; }
  const Field& f1() const { return *f1_; }
  const Field& f2() const { return *f2_; }
  const Field& big() const { return *big_; }
  Field::Elem embed1(const Field::Elem& x) const { return (*emb1_)(x); }
  Field::Elem embed2(const Field::Elem& x) const { return (*emb2_)(x); }

 private:
  u64 p_;
  unsigned e1_, e2_, e_;
  std::unique_ptr<Field> f1_, f2_, big_;
  std::unique_ptr<SubfieldEmbedding<Field, Field>> emb1_, emb2_;
};

struct ConjectureWitness {
  u64 p = 0;
  unsigned e1 = 0, e2 = 0;
  Field::Elem j1, j2;              // in GF(p^e1), GF(p^e2)
  Field::Elem omega1, omega2;      // embedded in GF(p^lcm)
  Field::Elem Omega;
};

/// w1^2 w2^2 - 4 (w1^2 + w2^2).
template <class F>
typename F::Elem omega_formula(const F& f, const typename F::Elem& w1, const typename F::Elem& w2) {
  auto a = f.mul(w1, w1), b = f.mul(w2, w2);
  return f.sub(f.mul(a, b), f.mul(f.scalar(4), f.add(a, b)));
}

inline Field::Elem omega_of(const ConjectureLab& lab, const Field::Elem& j1, const Field::Elem& j2) {
  if (lab.f1().is_zero(j1) || lab.f2().is_zero(j2)) throw Error(ErrorKind::ZeroElement, "j must be nonzero");
  const auto& F = lab.big();
  auto x1 = lab.embed1(j1), x2 = lab.embed2(j2);
  return omega_formula(F, F.add(x1, F.inv(x1)), F.add(x2, F.inv(x2)));
}

/// Witness data for (j1, j2); throws unless both are primitive and Omega is a square.
inline ConjectureWitness make_witness(const ConjectureLab& lab, const Field::Elem& j1, const Field::Elem& j2) {
  if (!is_primitive(lab.f1(), j1) || !is_primitive(lab.f2(), j2))
    throw Error(ErrorKind::PreconditionFailed, "j1 and j2 must be primitive");
  const auto& F = lab.big();
  ConjectureWitness w;
  w.p = lab.p(), w.e1 = lab.e1(), w.e2 = lab.e2();
  w.j1 = j1, w.j2 = j2;
  auto x1 = lab.embed1(j1), x2 = lab.embed2(j2);
  w.omega1 = F.add(x1, F.inv(x1));
  w.omega2 = F.add(x2, F.inv(x2));
  w.Omega = omega_formula(F, w.omega1, w.omega2);
  if (!is_square(F, w.Omega)) throw Error(ErrorKind::NotASquare, "Omega is not a square");
  return w;
}

struct WitnessSearch {
  std::optional<ConjectureWitness> witness;
  std::optional<u64> witness_index;  // sample at which the first witness appeared
  u64 seed = 0;
  u64 samples = 0, squares = 0;                          // primitive pairs
  u64 unconditioned_samples = 0, unconditioned_squares = 0;  // arbitrary nonzero pairs
  double fraction() const { return samples ? static_cast<double>(squares) / samples : 0.0; }
  double unconditioned_fraction() const {
    return unconditioned_samples ? static_cast<double>(unconditioned_squares) / unconditioned_samples : 0.0;
  }
  bool exhausted() const { return !witness; }
};

namespace detail {

inline constexpr u64 kSampleChunk = 256;

inline Field::Elem random_nonzero(const Field& f, std::mt19937_64& rng) {
  std::uniform_int_distribution<u64> coef(0, f.p() - 1);
  for (;;) {
    std::vector<u64> c(f.d());
    for (auto& x : c) x = coef(rng);
    auto e = f.from_coeffs(c);
    if (!f.is_zero(e)) return e;
  }
}

inline Field::Elem random_primitive(const Field& f, std::mt19937_64& rng) {
  for (;;) {
    auto e = random_nonzero(f, rng);
    if (is_primitive(f, e)) return e;
  }
}

}  // namespace detail

/// Samples `budget` primitive pairs (and as many unrestricted nonzero pairs)
/// and records how often Omega is a square. Sample i is drawn from a stream
/// seeded by (seed, i / 256), so results do not depend on `jobs`.
inline WitnessSearch search_witness(const ConjectureLab& lab, u64 budget, u64 seed, unsigned jobs = 1) {
  if (lab.e1() < 2 || lab.e2() < 2 || lab.e1() % 2 == 0 || lab.e2() % 2 == 0)
    throw Error(ErrorKind::PreconditionFailed, "e1 and e2 must be odd and greater than 1");
  const auto& F = lab.big();
  const std::size_t chunks = static_cast<std::size_t>((budget + detail::kSampleChunk - 1) / detail::kSampleChunk);
  struct Part {
    u64 squares = 0, usquares = 0, n = 0;
    std::optional<std::pair<u64, std::pair<Field::Elem, Field::Elem>>> first;
  };
  std::vector<Part> parts(chunks);
  detail::parallel_for(chunks, jobs, [&](std::size_t c) {
    std::seed_seq sq{seed, static_cast<u64>(c)};
    std::mt19937_64 rng(sq);
    u64 lo = c * detail::kSampleChunk, hi = std::min<u64>(budget, lo + detail::kSampleChunk);
    auto& part = parts[c];
    for (u64 i = lo; i < hi; ++i) {
      auto j1 = detail::random_primitive(lab.f1(), rng), j2 = detail::random_primitive(lab.f2(), rng);
      ++part.n;
      if (is_square(F, omega_of(lab, j1, j2))) {
        ++part.squares;
        if (!part.first) part.first = {i, {j1, j2}};
      }
      auto u1 = detail::random_nonzero(lab.f1(), rng), u2 = detail::random_nonzero(lab.f2(), rng);
      part.usquares += is_square(F, omega_of(lab, u1, u2));
    }
  });
  WitnessSearch out;
  out.seed = seed;
  for (const auto& part : parts) {
    out.samples += part.n;
    out.squares += part.squares;
    out.unconditioned_samples += part.n;
    out.unconditioned_squares += part.usquares;
    if (part.first && !out.witness) {
      out.witness = make_witness(lab, part.first->second.first, part.first->second.second);
      out.witness_index = part.first->first;
    }
  }
  return out;
}

/// The candidate triple over GF(p^lcm); `sign` picks the square root of Omega.
inline RotationTriple<Field> build_candidate(const ConjectureLab& lab, const ConjectureWitness& w, int sign = 1) {
  if (std::gcd(lab.e1(), lab.e2()) != 1) throw Error(ErrorKind::PreconditionFailed, "gcd(e1, e2) must be 1");
  const auto& F = lab.big();
  if (F.is_zero(w.omega1)) throw Error(ErrorKind::DegenerateOmega1, "omega1 = 0");
  const auto& w1 = w.omega1;
  const auto& w2 = w.omega2;
  auto two = F.scalar(2);
  auto s = sqrt(F, w.Omega);
  if (sign < 0) s = F.neg(s);
  ProjElement<Field> s1(F, w1, F.add(w1, two), F.sub(w1, two), w1);
  ProjElement<Field> s2(F, F.add(two, w1), w1, F.neg(w1), F.sub(two, w1));
  ProjElement<Field> s3(F, F.mul(w2, F.sub(w1, two)), s, s, F.mul(w2, F.add(w1, two)));
  return {s1, s2, s3};
}

enum class C3Verdict { Verified, Violated, UnverifiedSampled };

inline const char* to_string(C3Verdict v) {
  switch (v) {
    case C3Verdict::Verified: return "VERIFIED";
    case C3Verdict::Violated: return "VIOLATED";
    case C3Verdict::UnverifiedSampled: return "UNVERIFIED-SAMPLED";
  }
  return "?";
}

struct CandidateReport {
  bool relations = false;
  bool cyclic_intersections = false;
  u128 order1 = 0, order2 = 0, order3 = 0;
  unsigned trace_field_degree = 0;
  bool generation = false;
  bool chiral = false;
  bool not_directly_regular = false;
  C3Verdict c3 = C3Verdict::UnverifiedSampled;
  u64 c3_samples = 0;        // words of <sigma1, sigma2> examined
  u64 c3_trace_excluded = 0;  // ruled out since beta lies outside GF(p)
  u64 c3_field_excluded = 0;  // ruled out by the trace field of <sigma2, sigma3, x>
  u64 c3_violations = 0;      // words not ruled out; the exact check stops at the first

  bool ok() const {
    return relations && cyclic_intersections && generation && chiral && not_directly_regular &&
           c3 != C3Verdict::Violated && c3_violations == 0;
  }
};

/// Whether PSL(2,p^d) can be the rotation group of a directly regular
/// 4-polytope: only for q = 5, 11, 19 or d even.
inline bool directly_regular_possible(u64 p, unsigned d) {
  if (d % 2 == 0) return true;
  return d == 1 && (p == 5 || p == 11 || p == 19);
}

namespace detail {

/// Whether every word of length <= 4 in gens has beta in GF(p^e).
template <class F>
bool trace_field_within(const F& f, const std::vector<ProjElement<F>>& gens, unsigned e) {
  auto inside = [&](const ProjElement<F>& w) {
    auto b = trace_invariant(w);
    return f.frobenius(b, e) == b;
  };
  std::vector<ProjElement<F>> words;
  ElementSet<F> seen(f);
  for (const auto& g : gens) {
    if (!inside(g)) return false;
    if (seen.insert(g)) words.push_back(g);
  }
  for (std::size_t lo = 0, len = 1; len < 4; ++len) {
    std::size_t hi = words.size();
    for (std::size_t i = lo; i < hi; ++i)
      for (const auto& g : gens) {
        auto w = compose(words[i], g);
        if (!seen.insert(w)) continue;
        if (!inside(w)) return false;
        words.push_back(w);
      }
    lo = hi;
  }
  return true;
}

template <class F>
bool in_cyclic(const ProjElement<F>& x, const ProjElement<F>& g, u128 n) {
  auto y = ProjElement<F>::identity(g.field());
  for (u128 i = 0; i < n; ++i, y = compose(y, g))
    if (y == x) return true;
  return false;
}

}  // namespace detail

/// Checks what can be checked of the candidate. The full intersection
/// condition is decided exactly when q <= 2^20 and <sigma1, sigma2> has at
/// most `exact_cap` elements; otherwise `budget` random words of
/// <sigma1, sigma2> are tested against <sigma2, sigma3>.
inline CandidateReport verify_candidate(const ConjectureLab& lab, const RotationTriple<Field>& t, u64 budget,
                                        u64 seed, std::size_t exact_cap = 20000) {
  const auto& F = lab.big();
  CandidateReport r;
  r.relations = check_relations(t);
  r.order1 = proj_order(t.s1), r.order2 = proj_order(t.s2), r.order3 = proj_order(t.s3);
  r.cyclic_intersections =
      cyclic_intersection_order(t.s1, t.s2) == 1 && cyclic_intersection_order(t.s2, t.s3) == 1;
  r.trace_field_degree = trace_field_degree(F, {t.s1, t.s2, t.s3});
  r.generation = check_generation(t, SubgroupClass::Tag::FullPSL);
  r.not_directly_regular = !directly_regular_possible(F.p(), F.d());
  if (r.relations) r.chiral = is_chiral(t);

  if (F.q() <= (u128{1} << 20)) {
    if (auto h1 = closure(F, {t.s1, t.s2}, exact_cap)) {
      // Membership in <sigma2, sigma3> by lookup when it is small, else by
      // group order. Stops at the first common element outside <sigma2>.
      std::optional<ElementSet<Field>> h2set;
      if (auto h2 = closure(F, {t.s2, t.s3}, exact_cap)) {
        h2set.emplace(F);
        for (const auto& g : *h2) h2set->insert(g);
      }
      const u128 n2 = h2set ? 0 : group_order(F, {t.s2, t.s3});
      r.c3 = C3Verdict::Verified;
      for (const auto& x : *h1) {
        ++r.c3_samples;
        if (detail::in_cyclic(x, t.s2, r.order2)) continue;
        bool common = h2set ? h2set->contains(x) : group_order(F, {t.s2, t.s3, x}) == n2;
        if (common) {
          r.c3 = C3Verdict::Violated;
          r.c3_violations = 1;
          break;
        }
      }
      return r;
    }
  }
  // Elements of <sigma_a, sigma_b> have beta in the field generated by the
  // traces of sigma_a, sigma_b and their product, so anything common to both
  // parabolics has beta in GF(p^gcd(e1, e2)) = GF(p).
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(1, 12), pick(0, 3);
  const std::array<ProjElement<Field>, 4> letters{t.s1, inverse(t.s1), t.s2, inverse(t.s2)};
  const unsigned e2 = lab.e2();
  for (u64 i = 0; i < budget; ++i) {
    auto x = ProjElement<Field>::identity(F);
    for (int k = len(rng); k > 0; --k) x = compose(x, letters[pick(rng)]);
    ++r.c3_samples;
    if (detail::in_cyclic(x, t.s2, r.order2)) continue;
    auto beta = trace_invariant(x);
    if (!(F.frobenius(beta, 1) == beta)) {
      ++r.c3_trace_excluded;
      continue;
    }
    if (!detail::trace_field_within(F, {t.s2, t.s3, x}, e2)) {
      ++r.c3_field_excluded;
      continue;
    }
    ++r.c3_violations;
  }
  r.c3 = C3Verdict::UnverifiedSampled;
  return r;
}

}  // namespace chiral
