#pragma once

// Recomputing the reference tables from the enumerator and the classifier.

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "chiral/classifier.hpp"
#include "chiral/enumerator.hpp"
#include "chiral/tables.hpp"

namespace chiral {

inline const char* kCountingConvention =
    "PGammaL(2,q)-classes of generating triples; enantiomorphic and dual pairs counted separately";

inline SmallField small_field(u64 q) {
  auto pd = prime_power_decompose(q);
  if (!pd) throw Error(ErrorKind::NotAPrimePower, std::to_string(q) + " is not a prime power");
  return SmallField(make_field_spec(pd->first, pd->second));
}

struct Table2Computed {
  u64 q = 0;
  u64 count = 0;
  std::string q4, p20;  // blank for even q, as in the table
  std::string cases;
};

inline Table2Computed table2_row(u64 q, unsigned jobs = 1) {
  auto f = small_field(q);
  EnumOptions opt;
  opt.jobs = jobs;
  auto e = enumerate_rank4(f, GroupKind::PSL, opt);
  Table2Computed r;
  r.q = q;
  r.count = e.chiral.size();
  if (q % 2 == 1) {
    r.q4 = std::to_string(q % 4);
    r.p20 = std::to_string(f.p() % 20);
  }
  r.cases = case_labels(classify(q, GroupKind::PSL));
  return r;
}

struct Table1Line {
  std::string type, parabolic1, parabolic2;
  u64 computed = 0, expected = 0;
  bool dual_row = false;  // the dual of a listed row; the table lists pairs once
};

/// Breakdown of the PSL(2,169) records against the table, with the dual of
/// every non-self-dual row added explicitly.
template <class F>
std::vector<Table1Line> compare_table1(const std::vector<PolytopeRecord<F>>& recs) {
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, u64> got;
  for (const auto& r : recs) got[{to_string(r.schlafli), to_string(r.parabolic1), to_string(r.parabolic2)}]++;
  std::map<Key, std::pair<u64, bool>> want;
  for (const auto& row : table1()) {
    want[{row.type, row.parabolic1, row.parabolic2}] = {row.count, false};
    auto s = parse_schlafli(row.type);
    if (!(s.reversed() == s)) want[{to_string(s.reversed()), row.parabolic2, row.parabolic1}] = {row.count, true};
  }
  std::vector<Table1Line> out;
  for (const auto& [k, v] : want) {
    auto it = got.find(k);
    out.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), it == got.end() ? 0 : it->second, v.first, v.second});
  }
  for (const auto& [k, n] : got)
    if (!want.count(k)) out.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), n, 0, false});
  return out;
}

inline bool table1_matches(const std::vector<Table1Line>& lines) {
  for (const auto& l : lines)
    if (l.computed != l.expected) return false;
  return true;
}

}  // namespace chiral
