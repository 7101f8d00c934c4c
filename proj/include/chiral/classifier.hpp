#pragma once

// Existence of chiral 4-polytopes for PSL(2,q) and PGL(2,q) decided from
// the arithmetic of q alone.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chiral/constructions.hpp"
#include "chiral/finite_field.hpp"
#include "chiral/number_theory.hpp"

namespace chiral {

enum class Existence { Yes, No, Unresolved };

inline const char* to_string(Existence e) {
  switch (e) {
    case Existence::Yes: return "yes";
    case Existence::No: return "no";
    case Existence::Unresolved: return "unresolved";
  }
  return "?";
}

/// Residues of p and the square tests behind the q = 3 (mod 4) cases.
/// Square tests are false when 5 has no square root in GF(p).
struct Residues {
  u64 p4 = 0, p5 = 0, p8 = 0, p11 = 0, p19 = 0, p20 = 0, p40 = 0;
  bool sqrt5 = false;
  bool three_pm_two_sqrt5 = false;       // 3 + 2 sqrt5 and 3 - 2 sqrt5 both squares
  bool three_pm_two_sqrt5_none = false;  // both non-squares
  bool seven_pm_five_sqrt5 = false;      // (7 +- 5 sqrt5)/2 both squares
  bool seven_pm_five_sqrt5_none = false;
  bool one_plus_sqrt5 = false, one_minus_sqrt5 = false;
};

inline Residues residues_of(u64 p) {
  Residues r;
  r.p4 = p % 4, r.p5 = p % 5, r.p8 = p % 8, r.p11 = p % 11, r.p19 = p % 19, r.p20 = p % 20, r.p40 = p % 40;
  if (p == 2 || p == 5) return r;
  Field f(make_field_spec(p, 1));
  auto five = f.scalar(5);
  if (!is_square(f, five)) return r;
  r.sqrt5 = true;
  auto s = sqrt(f, five);
  auto sq = [&](const Field::Elem& x) { return !f.is_zero(x) && is_square(f, x); };
  auto nsq = [&](const Field::Elem& x) { return !f.is_zero(x) && !is_square(f, x); };
  auto a1 = f.add(f.scalar(3), f.mul(f.scalar(2), s)), a2 = f.sub(f.scalar(3), f.mul(f.scalar(2), s));
  r.three_pm_two_sqrt5 = sq(a1) && sq(a2);
  r.three_pm_two_sqrt5_none = nsq(a1) && nsq(a2);
  auto half = f.inv(f.scalar(2));
  auto c1 = f.mul(half, f.add(f.scalar(7), f.mul(f.scalar(5), s)));
  auto c2 = f.mul(half, f.sub(f.scalar(7), f.mul(f.scalar(5), s)));
  r.seven_pm_five_sqrt5 = sq(c1) && sq(c2);
  r.seven_pm_five_sqrt5_none = nsq(c1) && nsq(c2);
  r.one_plus_sqrt5 = sq(f.add(f.one(), s));
  r.one_minus_sqrt5 = sq(f.sub(f.one(), s));
  return r;
}

namespace detail {

inline bool in_list(u64 x, std::initializer_list<u64> xs) {
  for (u64 y : xs)
    if (x == y) return true;
  return false;
}

inline bool mod20_ok(const Residues& r) { return r.p20 == 11 || r.p20 == 19; }

}  // namespace detail

// Literal conditions (a)-(e) for q = p = 3 (mod 4).
inline bool case_a(u64 p, const Residues& r) {
  return detail::mod20_ok(r) && detail::in_list(r.p11, {1, 3, 4, 5, 9}) && r.three_pm_two_sqrt5 && p % 4 == 3;
}
inline bool case_b(u64 p, const Residues& r) {
  return detail::mod20_ok(r) && detail::in_list(r.p11, {2, 6, 7, 8}) && p % 4 == 3;
}
inline bool case_c(u64 p, const Residues& r) {
  return detail::mod20_ok(r) && detail::in_list(r.p19, {1, 4, 5, 6, 7, 9, 11, 16, 17}) && r.seven_pm_five_sqrt5 &&
         p % 4 == 3;
}
inline bool case_d(u64 p, const Residues& r) {
  return detail::mod20_ok(r) && detail::in_list(r.p19, {2, 3, 8, 10, 12, 13, 14, 15, 18}) && p % 4 == 3;
}
inline bool case_e(u64 p, const Residues& r) { return (r.p40 == 31 || r.p40 == 39) && p % 4 == 3; }

/// Letters of the cases (a)-(e) that prime p satisfies.
inline std::vector<char> letter_cases(u64 p) {
  auto r = residues_of(p);
  std::vector<char> out;
  if (case_a(p, r)) out.push_back('a');
  if (case_b(p, r)) out.push_back('b');
  if (case_c(p, r)) out.push_back('c');
  if (case_d(p, r)) out.push_back('d');
  if (case_e(p, r)) out.push_back('e');
  return out;
}

struct PredictedCounts {
  std::map<SchlafliSymbol, u64> counts;
  bool partial = false;  // more polytopes exist than the families listed

  u64 total() const {
    u64 n = 0;
    for (const auto& [k, v] : counts) n += v;
    return n;
  }
};

struct ClassificationReport {
  u64 q = 0, p = 0;
  unsigned d = 0;
  GroupKind group = GroupKind::PSL;
  Existence exists = Existence::No;
  std::vector<std::string> matched_cases;  // "2", "3", "4a".."4e", "conjecture3"
  PredictedCounts family_counts;
  std::optional<Residues> residues;  // only for odd q
  std::string note;
  bool rank5_exists = false;
};

/// Whether d > 1 has at least two distinct prime factors.
inline bool composite_degree(unsigned d) { return d > 1 && factorize(d).size() >= 2; }

/// Counts the classification gives. [5,3,4] polytopes come with their duals of type
/// [4,3,5]; both are listed, since tables count dual pairs separately.
inline PredictedCounts predicted_counts(u64 q, GroupKind group) {
  auto pd = prime_power_decompose(q);
  if (!pd) throw Error(ErrorKind::NotAPrimePower, std::to_string(q) + " is not a prime power");
  const auto [p, d] = *pd;
  PredictedCounts out;
  auto add_family = [&](const std::vector<FamilyMember>& fam) {
    for (const auto& m : fam) out.counts[m.type] += m.predicted;
  };
  if (group == GroupKind::PGL || p == 2) {
    add_family(pgl_family(p, d));
    out.partial = true;
    return out;
  }
  if (q % 4 == 1) {
    add_family(psl_family(p, d));
    out.partial = true;
    return out;
  }
  if (d > 1) {
    out.partial = composite_degree(d);
    return out;
  }
  auto r = residues_of(p);
  if (!r.sqrt5) return out;
  if (r.p40 == 31 || r.p40 == 39) {
    out.counts[{5, 3, 4}] += 2;
    out.counts[{4, 3, 5}] += 2;
  }
  if (p == 19) {
    out.counts[{5, 3, 5}] += 2;
  } else if (detail::in_list(r.p19, {1, 4, 5, 6, 7, 9, 11, 16, 17})) {
    if (r.seven_pm_five_sqrt5) out.counts[{5, 3, 5}] += 4;
  } else if (detail::in_list(r.p19, {2, 3, 8, 10, 12, 13, 14, 15, 18})) {
    out.counts[{5, 3, 5}] += 2;
  }
  if (detail::in_list(r.p11, {1, 3, 4, 5, 9})) {
    if (r.three_pm_two_sqrt5) out.counts[{3, 5, 3}] += 4;
  } else if (detail::in_list(r.p11, {2, 6, 7, 8, 10})) {
    out.counts[{3, 5, 3}] += 2;
  }
  return out;
}

inline ClassificationReport classify(u64 q, GroupKind group) {
  auto pd = prime_power_decompose(q);
  if (!pd) throw Error(ErrorKind::NotAPrimePower, std::to_string(q) + " is not a prime power");
  if (q < 4) throw Error(ErrorKind::PreconditionFailed, "q must be at least 4");
  ClassificationReport rep;
  rep.q = q, rep.p = pd->first, rep.d = pd->second, rep.group = group;
  if (rep.p != 2) rep.residues = residues_of(rep.p);
  rep.family_counts = predicted_counts(q, group);
  auto yes = [&](std::string c) {
    rep.matched_cases.push_back(std::move(c));
    rep.exists = Existence::Yes;
  };
  if (group == GroupKind::PGL || rep.p == 2) {
    if (q >= 5) yes("2");
    if (rep.p == 2) rep.note = "PSL(2,q) = PGL(2,q) for even q";
    return rep;
  }
  if (q % 4 == 1) {
    if (q >= 13) yes("3");
    return rep;
  }
  if (rep.d == 1) {
    for (char c : letter_cases(rep.p)) yes(std::string("4") + c);
    return rep;
  }
  if (composite_degree(rep.d)) {
    rep.exists = Existence::Unresolved;
    rep.matched_cases.push_back("conjecture3");
    rep.note = "open case; see the conjecture lab";
  }
  return rep;
}

/// Table-style case labels: "(2)", "(3)" or the letters of (a)-(e).
inline std::string case_labels(const ClassificationReport& r) {
  std::string out;
  for (const auto& c : r.matched_cases) {
    if (c == "conjecture3") continue;
    out += "(" + (c.size() == 2 ? c.substr(1) : c) + ")";
  }
  return out;
}

/// For each case (a)-(e), the least prime matched by that case and by no
/// other of (a)-(e). p = 19 is skipped: it has chiral [5,3,5] polytopes
/// outside the generic pattern of the letter cases.
inline std::map<char, u64> smallest_witnesses(u64 limit = 20000) {
  std::map<char, u64> out;
  for (u64 p = 3; p < limit && out.size() < 5; p += 2) {
    if (!is_prime(p) || p == 19) continue;
    auto cs = letter_cases(p);
    if (cs.size() == 1 && !out.count(cs[0])) out[cs[0]] = p;
  }
  return out;
}

}  // namespace chiral
