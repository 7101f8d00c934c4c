#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const char* exe = std::getenv("CHIRALPOLY");
  if (!exe) throw std::runtime_error("CHIRALPOLY not set");
  std::string cmd = std::string(exe) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);)
    if (!l.empty()) out.push_back(l);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("chiralpoly_test_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path path(const std::string& name) const { return dir_ / name; }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ClassifyOpenCase) {
  auto r = run("classify --field 3^15 --group psl --format text");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("unresolved (Conjecture case 3)"), std::string::npos) << r.out;
}

TEST_F(Cli, ClassifyJson) {
  auto r = run("classify --field 31 --group psl");
  ASSERT_EQ(r.status, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["exists"], "yes");
  EXPECT_EQ(j["case_labels"], "(d)(e)");
  EXPECT_EQ(j["residues"]["p_mod_40"], 31);
  auto r8 = json::parse(run("classify --field 8 --group pgl").out);
  EXPECT_EQ(r8["family_counts"]["counts"]["[7,7,7]"], 2);
}

TEST_F(Cli, ClassifySurvey) {
  auto r = run("classify --survey 31");
  ASSERT_EQ(r.status, 0);
  auto ls = lines_of(r.out);
  EXPECT_EQ(ls.front(), "q,count,q(4),p(20),cases");
  EXPECT_NE(std::find(ls.begin(), ls.end(), "19,4,3,19,(b)"), ls.end());
  EXPECT_NE(std::find(ls.begin(), ls.end(), "31,6,3,11,(d)(e)"), ls.end());
  EXPECT_NE(std::find(ls.begin(), ls.end(), "23,0,3,3,"), ls.end());
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("").status, 1);
  EXPECT_EQ(run("classify --field 12").status, 1);
  EXPECT_EQ(run("classify --field 13 --group sl").status, 1);
  EXPECT_EQ(run("enumerate --field 13 --bogus").status, 1);
  EXPECT_EQ(run("enumerate --field 191").status, 1);
  EXPECT_EQ(run("verify --triple /nonexistent.json").status, 1);
  EXPECT_EQ(run("--help").status, 0);
}

TEST_F(Cli, ConstructAndVerify) {
  auto out = path("pgl8.jsonl");
  ASSERT_EQ(run("construct --field 8 --family pgl --out " + out.string()).status, 0);
  auto ls = lines_of(slurp(out));
  ASSERT_EQ(ls.size(), 2u);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    auto f = path("t" + std::to_string(i) + ".json");
    std::ofstream(f) << ls[i];
    auto r = run("verify --triple " + f.string());
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "CHIRAL, type [7,7,7], group PGL(2,8)\n");
  }
  // A record whose stated type disagrees with the triple is a mismatch.
  auto j = json::parse(ls[0]);
  j["type"] = "[7,7,8]";
  std::ofstream(path("bad.json")) << j.dump();
  EXPECT_EQ(run("verify --triple " + path("bad.json").string()).status, 2);
  // So is a triple that is not a polytope at all.
  j = json::parse(ls[0]);
  j["triple"][2] = j["triple"][1];
  std::ofstream(path("inv.json")) << j.dump();
  auto r = run("verify --triple " + path("inv.json").string());
  EXPECT_EQ(r.status, 2);
  EXPECT_EQ(r.out.rfind("INVALID", 0), 0u) << r.out;
}

TEST_F(Cli, ConstructIcosahedral) {
  auto r = run("construct --field 31 --family 534");
  ASSERT_EQ(r.status, 0);
  auto ls = lines_of(r.out);
  ASSERT_EQ(ls.size(), 2u);
  for (const auto& l : ls) {
    auto j = json::parse(l);
    EXPECT_EQ(j["type"], "[5,3,4]");
    EXPECT_EQ(j["parabolic1"], "A5");
    EXPECT_EQ(j["parabolic2"], "S4");
  }
}

// Every emitted record re-verifies with the same verdict.
TEST_F(Cli, EnumerateRoundTrip) {
  auto out = path("e13.jsonl");
  ASSERT_EQ(run("enumerate --field 13 --group psl --out " + out.string()).status, 0);
  auto ls = lines_of(slurp(out));
  ASSERT_EQ(ls.size(), 6u);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    auto f = path("r" + std::to_string(i) + ".json");
    std::ofstream(f) << ls[i];
    auto r = run("verify --triple " + f.string() + " --format json");
    ASSERT_EQ(r.status, 0);
    auto j = json::parse(r.out);
    EXPECT_EQ(j["verdict"], "CHIRAL");
    EXPECT_EQ(j["type"], json::parse(ls[i])["type"]);
  }
}

TEST_F(Cli, TablesIdempotentAcrossJobs) {
  auto a = run("tables --reproduce 2 --max-q 23 --jobs 1");
  auto b = run("tables --reproduce 2 --max-q 23 --jobs 2");
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.find("MISMATCH"), std::string::npos);
  EXPECT_NE(a.out.find("19,4,3,19,(b),4,(b),ok"), std::string::npos) << a.out;
  EXPECT_EQ(a.out.rfind("# convention:", 0), 0u);
}

TEST_F(Cli, Conjecture) {
  auto r = run("conjecture --p 3 --e1 3 --e2 5 --budget 256 --seed 5 --verify-budget 50");
  ASSERT_EQ(r.status, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["seed"], 5);
  EXPECT_EQ(j["samples"], 256);
  ASSERT_FALSE(j["witness"].is_null());
  EXPECT_EQ(j["verification"]["relations"], true);
  EXPECT_EQ(j["verification"]["violations"], 0);
  EXPECT_EQ(j["verification"]["intersection_property"], "UNVERIFIED-SAMPLED");
  EXPECT_EQ(run("conjecture --p 3 --e1 3 --e2 5 --budget 256 --seed 5 --verify-budget 50").out, r.out);
}
