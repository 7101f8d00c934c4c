#pragma once

// JSON forms of records and reports.

#include <string>

#include "chiral/classifier.hpp"
#include "chiral/conjecture.hpp"
#include "chiral/enumerator.hpp"
#include "chiral/polytope.hpp"
#include "json.hpp"

namespace chiral {

using json = nlohmann::json;

inline std::vector<u64> to_vector(const SchlafliSymbol& s) { return {s.p1, s.p2, s.p3}; }

template <class F>
json triple_to_json(const RotationTriple<F>& t) {
  return json::array({to_string(t.s1), to_string(t.s2), to_string(t.s3)});
}

template <class F>
RotationTriple<F> triple_from_json(const F& f, const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::Parse, "triple must be an array of three matrices");
  return {parse_proj(f, j[0].get<std::string>()), parse_proj(f, j[1].get<std::string>()),
          parse_proj(f, j[2].get<std::string>())};
}

template <class F>
json record_to_json(const F& f, const PolytopeRecord<F>& r, GroupKind kind) {
  return json{{"field", format_field_spec(f.spec())},
              {"group", to_string(kind)},
              {"triple", triple_to_json(r.triple)},
              {"schlafli", to_vector(r.schlafli)},
              {"type", to_string(r.schlafli)},
              {"automorphism_group", to_string(r.group)},
              {"parabolic1", to_string(r.parabolic1)},
              {"parabolic2", to_string(r.parabolic2)},
              {"provenance", r.provenance}};
}

inline GroupKind parse_group(const std::string& s) {
  if (s == "psl" || s == "PSL") return GroupKind::PSL;
  if (s == "pgl" || s == "PGL") return GroupKind::PGL;
  throw Error(ErrorKind::Parse, "group must be psl or pgl, got '" + s + "'");
}

inline json residues_to_json(const Residues& r) {
  return json{{"p_mod_4", r.p4},
              {"p_mod_5", r.p5},
              {"p_mod_8", r.p8},
              {"p_mod_11", r.p11},
              {"p_mod_19", r.p19},
              {"p_mod_20", r.p20},
              {"p_mod_40", r.p40},
              {"sqrt5_in_GFp", r.sqrt5},
              {"3+-2sqrt5_both_squares", r.three_pm_two_sqrt5},
              {"3+-2sqrt5_both_nonsquares", r.three_pm_two_sqrt5_none},
              {"(7+-5sqrt5)/2_both_squares", r.seven_pm_five_sqrt5},
              {"(7+-5sqrt5)/2_both_nonsquares", r.seven_pm_five_sqrt5_none},
              {"1+sqrt5_square", r.one_plus_sqrt5},
              {"1-sqrt5_square", r.one_minus_sqrt5}};
}

inline json counts_to_json(const PredictedCounts& c) {
  json m = json::object();
  for (const auto& [k, v] : c.counts) m[to_string(k)] = v;
  return json{{"counts", m}, {"total", c.total()}, {"partial", c.partial}};
}

inline json report_to_json(const ClassificationReport& r) {
  json j{{"q", r.q},
         {"p", r.p},
         {"d", r.d},
         {"group", to_string(r.group)},
         {"exists", to_string(r.exists)},
         {"matched_cases", r.matched_cases},
         {"case_labels", case_labels(r)},
         {"family_counts", counts_to_json(r.family_counts)},
         {"rank5_exists", r.rank5_exists}};
  if (r.residues) j["residues"] = residues_to_json(*r.residues);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline json candidate_report_to_json(const CandidateReport& r) {
  return json{{"relations", r.relations},
              {"cyclic_intersections", r.cyclic_intersections},
              {"orders", {to_string_u128(r.order1), to_string_u128(r.order2), to_string_u128(r.order3)}},
              {"trace_field_degree", r.trace_field_degree},
              {"generation", r.generation},
              {"chiral", r.chiral},
              {"not_directly_regular", r.not_directly_regular},
              {"intersection_property", to_string(r.c3)},
              {"intersection_samples", r.c3_samples},
              {"excluded_by_trace", r.c3_trace_excluded},
              {"excluded_by_trace_field", r.c3_field_excluded},
              {"violations", r.c3_violations}};
}

}  // namespace chiral
