// chiralpoly: command-line front end.
//
// Exit status: 0 success, 1 usage or input error, 2 mismatch against a
// reference table or an expected verdict.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "chiral/classifier.hpp"
#include "chiral/conjecture.hpp"
#include "chiral/constructions.hpp"
#include "chiral/enumerator.hpp"
#include "chiral/io.hpp"
#include "chiral/reproduce.hpp"

using namespace chiral;

namespace {

constexpr int kOk = 0, kUsage = 1, kMismatch = 2;

struct Output {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path);
    if (!file) throw Error(ErrorKind::PreconditionFailed, "cannot open '" + path + "' for writing");
    os = &file;
  }
  std::ostream& operator*() { return *os; }
};

template <class Fn>
auto with_field(const FieldSpec& spec, Fn&& fn) {
  if (spec.q() <= (u128{1} << 20)) {
    SmallField f(spec);
    return fn(f);
  }
  Field f(spec);
  return fn(f);
}

// ---------------------------------------------------------------------------

struct ClassifyArgs {
  std::string field, group = "psl", format = "json";
  u64 survey = 0;
};

int run_classify(const ClassifyArgs& a) {
  auto g = parse_group(a.group);
  if (a.survey) {
    std::cout << "q,count,q(4),p(20),cases\n";
    for (u64 q = 4; q <= a.survey; ++q) {
      auto pd = prime_power_decompose(q);
      if (!pd) continue;
      auto rep = classify(q, g);
      const auto& pc = rep.family_counts;
      std::string count = rep.exists == Existence::No ? "0"
                          : pc.partial || rep.exists == Existence::Unresolved ? "?"
                                                                              : std::to_string(pc.total());
      std::cout << q << ',' << count << ',' << (q % 2 ? std::to_string(q % 4) : "") << ','
                << (q % 2 ? std::to_string(pd->first % 20) : "") << ',' << case_labels(rep) << '\n';
    }
    return kOk;
  }
  if (a.field.empty()) throw CLI::RequiredError("--field or --survey");
  auto spec = parse_field_spec(a.field);
  auto rep = classify(static_cast<u64>(spec.q()), g);
  if (a.format == "text") {
    std::cout << group_name(Field(spec), full_tag(g)) << ": " << to_string(rep.exists);
    if (rep.exists == Existence::Unresolved) std::cout << " (Conjecture case 3)";
    if (!rep.matched_cases.empty() && rep.exists == Existence::Yes) std::cout << ", cases " << case_labels(rep);
    std::cout << '\n';
  } else {
    std::cout << report_to_json(rep).dump(2) << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct ConstructArgs {
  std::string field, family, out;
  u64 k = 0;
};

int run_construct(const ConstructArgs& a) {
  auto spec = parse_field_spec(a.field);
  Output out(a.out);
  return with_field(spec, [&](const auto& f) {
    if (a.family == "pgl" || a.family == "psl") {
      auto kind = parse_group(a.family);
      auto members = kind == GroupKind::PGL ? pgl_family(f) : psl_family(f);
      for (const auto& m : members) {
        if (a.k && m.k != a.k) continue;
        for (u64 l : m.ls) {
          auto t = affine_triple(f, l);
          auto rec = make_record(t, full_tag(kind), a.family + " k=" + std::to_string(m.k) + " l=" + std::to_string(l));
          *out << record_to_json(f, rec, kind).dump() << '\n';
        }
      }
      return kOk;
    }
    CoxeterFamily fam;
    if (a.family == "534") fam = CoxeterFamily::T534;
    else if (a.family == "535") fam = CoxeterFamily::T535;
    else if (a.family == "353") fam = CoxeterFamily::T353;
    else throw Error(ErrorKind::Parse, "unknown family '" + a.family + "'");
    for (const auto& rec : build_family(f, fam).records) *out << record_to_json(f, rec, GroupKind::PSL).dump() << '\n';
    return kOk;
  });
}

// ---------------------------------------------------------------------------

struct EnumerateArgs {
  std::string field, group = "psl", out, format = "json";
  int rank = 4;
  unsigned jobs = 1;
};

int run_enumerate(const EnumerateArgs& a) {
  auto spec = parse_field_spec(a.field);
  if (spec.q() > kMaxEnumerationQ) throw Error(ErrorKind::UnsupportedScale, "enumeration supports q <= 181");
  auto kind = parse_group(a.group);
  SmallField f(spec);
  EnumOptions opt;
  opt.jobs = a.jobs;
  Output out(a.out);
  if (a.rank == 5) {
    auto e = enumerate_rank5(f, kind, opt);
    std::cerr << "rank 5, " << group_name(f, full_tag(kind)) << ": " << e.chiral.size() << " chiral, "
              << e.valid_regular << " regular\n";
    for (const auto& quad : e.chiral) {
      json j = json::array();
      for (const auto& g : quad) j.push_back(to_string(g));
      *out << json{{"field", format_field_spec(spec)}, {"group", to_string(kind)}, {"quad", j}}.dump() << '\n';
    }
    return kOk;
  }
  if (a.rank != 4) throw Error(ErrorKind::PreconditionFailed, "rank must be 4 or 5");
  auto e = enumerate_rank4(f, kind, opt);
  std::cerr << group_name(f, full_tag(kind)) << ": " << e.chiral.size() << " chiral 4-polytopes ("
            << kCountingConvention << ")\n";
  for (const auto& r : e.chiral) {
    if (a.format == "text")
      *out << to_string(r.schlafli) << ' ' << to_string(r.parabolic1) << ' ' << to_string(r.parabolic2) << '\n';
    else
      *out << record_to_json(f, r, kind).dump() << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string triple, group, format = "text";
};

int run_verify(const VerifyArgs& a) {
  std::ifstream in(a.triple);
  if (!in) throw Error(ErrorKind::PreconditionFailed, "cannot read '" + a.triple + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
  auto spec = parse_field_spec(j.at("field").get<std::string>());
  std::string gs = !a.group.empty() ? a.group : j.value("group", std::string("psl"));
  auto kind = parse_group(gs);
  return with_field(spec, [&](const auto& f) {
    auto t = triple_from_json(f, j.at("triple"));
    auto v = verify(t, full_tag(kind));
    std::string verdict;
    if (!v.relations) verdict = "INVALID (relations)";
    else if (!v.intersection) verdict = "INVALID (intersection property)";
    else if (!v.generation) verdict = "INVALID (does not generate " + group_name(f, full_tag(kind)) + ")";
    else verdict = v.chiral ? "CHIRAL" : "REGULAR";
    std::string type = v.relations ? to_string(schlafli_of(t)) : "?";
    if (a.format == "json") {
      std::cout << json{{"verdict", verdict},   {"type", type},
                        {"relations", v.relations}, {"intersection", v.intersection},
                        {"generation", v.generation}, {"chiral", v.chiral},
                        {"group", group_name(f, full_tag(kind))}}
                       .dump(2)
                << '\n';
    } else {
      std::cout << verdict << ", type " << type << ", group " << group_name(f, full_tag(kind)) << '\n';
    }
    // A record that claims a type or parabolics must agree with the recomputation.
    if (v.ok()) {
      auto rec = make_record(t, full_tag(kind), "verify");
      if (j.contains("type") && j["type"] != to_string(rec.schlafli)) return kMismatch;
      if (j.contains("parabolic1") && j["parabolic1"] != to_string(rec.parabolic1)) return kMismatch;
      if (j.contains("parabolic2") && j["parabolic2"] != to_string(rec.parabolic2)) return kMismatch;
    } else if (j.contains("type")) {
      return kMismatch;  // exported records are verified chiral polytopes
    }
    return kOk;
  });
}

// ---------------------------------------------------------------------------

struct ConjectureArgs {
  u64 p = 3, budget = 10000, seed = 1, verify_budget = 1000;
  unsigned e1 = 3, e2 = 5, jobs = 1;
};

int run_conjecture(const ConjectureArgs& a) {
  ConjectureLab lab(a.p, a.e1, a.e2);
  auto s = search_witness(lab, a.budget, a.seed, a.jobs);
  json j{{"p", a.p},
         {"e1", a.e1},
         {"e2", a.e2},
         {"seed", a.seed},
         {"samples", s.samples},
         {"fraction", s.fraction()},
         {"unconditioned_fraction", s.unconditioned_fraction()}};
  if (s.witness) {
    const auto& w = *s.witness;
    j["witness"] = {{"j1", to_string(lab.f1(), w.j1)},
                    {"j2", to_string(lab.f2(), w.j2)},
                    {"omega1", to_string(lab.big(), w.omega1)},
                    {"omega2", to_string(lab.big(), w.omega2)},
                    {"Omega", to_string(lab.big(), w.Omega)},
                    {"sample", *s.witness_index}};
    if (std::gcd(a.e1, a.e2) == 1) {
      auto t = build_candidate(lab, w);
      j["candidate"] = triple_to_json(t);
      if (a.verify_budget) j["verification"] = candidate_report_to_json(verify_candidate(lab, t, a.verify_budget, a.seed));
    }
  } else {
    j["witness"] = nullptr;
  }
  std::cout << j.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct TablesArgs {
  int reproduce = 2;
  u64 max_q = 83;
  unsigned jobs = 1;
};

int run_tables(const TablesArgs& a) {
  std::cout << "# convention: " << kCountingConvention << '\n';
  bool ok = true;
  if (a.reproduce == 1) {
    auto f = small_field(169);
    EnumOptions opt;
    opt.jobs = a.jobs;
    auto e = enumerate_rank4(f, GroupKind::PSL, opt);
    std::cout << "type,#,parabolic1,parabolic2,expected,dual_of_listed_row,status\n";
    for (const auto& l : compare_table1(e.chiral)) {
      bool good = l.computed == l.expected;
      ok = ok && good;
      std::cout << '"' << l.type << '"' << ',' << l.computed << ',' << l.parabolic1 << ',' << l.parabolic2 << ','
                << l.expected << ',' << (l.dual_row ? "yes" : "no") << ',' << (good ? "ok" : "MISMATCH") << '\n';
    }
    std::cout << "# total " << e.chiral.size() << " (expected 44)\n";
    ok = ok && e.chiral.size() == 44;
  } else if (a.reproduce == 2) {
    std::cout << "q,#,q(4),p(20),case(s),expected_#,expected_case(s),status\n";
    for (const auto& row : table2()) {
      if (row.q > a.max_q || !row.count) continue;
      auto r = table2_row(row.q, a.jobs);
      bool good = r.count == *row.count && r.cases == row.cases;
      ok = ok && good;
      std::cout << r.q << ',' << r.count << ',' << r.q4 << ',' << r.p20 << ',' << r.cases << ',' << *row.count << ','
                << row.cases << ',' << (good ? "ok" : "MISMATCH") << '\n';
    }
  } else {
    throw Error(ErrorKind::PreconditionFailed, "--reproduce takes 1 or 2");
  }
  return ok ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chiral 4-polytopes with automorphism group PSL(2,q) or PGL(2,q)"};
  app.require_subcommand(1);

  ClassifyArgs ca;
  auto* classify_cmd = app.add_subcommand("classify", "decide existence from the arithmetic of q");
  classify_cmd->add_option("--field", ca.field, "q, p^d or p^d/c0,...,1");
  classify_cmd->add_option("--group", ca.group, "psl or pgl")->check(CLI::IsMember({"psl", "pgl"}));
  classify_cmd->add_option("--survey", ca.survey, "CSV for every prime power up to N");
  classify_cmd->add_option("--format", ca.format)->check(CLI::IsMember({"json", "text"}));

  ConstructArgs co;
  auto* construct_cmd = app.add_subcommand("construct", "build an explicit family");
  construct_cmd->add_option("--field", co.field)->required();
  construct_cmd->add_option("--family", co.family)->required()->check(CLI::IsMember({"pgl", "psl", "534", "535", "353"}));
  construct_cmd->add_option("--k", co.k, "only this k (affine families)");
  construct_cmd->add_option("--out", co.out, "JSONL output path");

  EnumerateArgs ea;
  auto* enumerate_cmd = app.add_subcommand("enumerate", "exhaustive search");
  enumerate_cmd->add_option("--field", ea.field)->required();
  enumerate_cmd->add_option("--group", ea.group)->check(CLI::IsMember({"psl", "pgl"}));
  enumerate_cmd->add_option("--rank", ea.rank)->check(CLI::IsMember({4, 5}));
  enumerate_cmd->add_option("--jobs", ea.jobs)->check(CLI::Range(1u, 1024u));
  enumerate_cmd->add_option("--out", ea.out, "JSONL output path");
  enumerate_cmd->add_option("--format", ea.format)->check(CLI::IsMember({"json", "text"}));

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "re-verify a triple from a JSON file");
  verify_cmd->add_option("--triple", va.triple)->required();
  verify_cmd->add_option("--group", va.group)->check(CLI::IsMember({"psl", "pgl"}));
  verify_cmd->add_option("--format", va.format)->check(CLI::IsMember({"json", "text"}));

  ConjectureArgs cj;
  auto* conjecture_cmd = app.add_subcommand("conjecture", "witness search and candidate checks");
  conjecture_cmd->add_option("--p", cj.p)->required();
  conjecture_cmd->add_option("--e1", cj.e1)->required();
  conjecture_cmd->add_option("--e2", cj.e2)->required();
  conjecture_cmd->add_option("--budget", cj.budget);
  conjecture_cmd->add_option("--seed", cj.seed);
  conjecture_cmd->add_option("--verify-budget", cj.verify_budget, "sampled words for the intersection check (0 skips)");
  conjecture_cmd->add_option("--jobs", cj.jobs)->check(CLI::Range(1u, 1024u));

  TablesArgs ta;
  auto* tables_cmd = app.add_subcommand("tables", "recompute the reference tables");
  tables_cmd->add_option("--reproduce", ta.reproduce)->required()->check(CLI::IsMember({1, 2}));
  tables_cmd->add_option("--max-q", ta.max_q);
  tables_cmd->add_option("--jobs", ta.jobs)->check(CLI::Range(1u, 1024u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  try {
    if (*classify_cmd) return run_classify(ca);
    if (*construct_cmd) return run_construct(co);
    if (*enumerate_cmd) return run_enumerate(ea);
    if (*verify_cmd) return run_verify(va);
    if (*conjecture_cmd) return run_conjecture(cj);
    if (*tables_cmd) return run_tables(ta);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
