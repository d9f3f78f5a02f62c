#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Env(const char* name) {
  const char* v = std::getenv(name);
  if (v && *v) return v;
  const std::string n = name;
#ifdef ACKERMANN_BIN_DEFAULT
  if (n == "ACKERMANN_BIN") return ACKERMANN_BIN_DEFAULT;
#endif
#ifdef ACKERMANN_SAMPLES_DEFAULT
  if (n == "ACKERMANN_SAMPLES") return ACKERMANN_SAMPLES_DEFAULT;
#endif
  return "";
}

std::string Sample(const std::string& name) { return Env("ACKERMANN_SAMPLES") + "/" + name; }

fs::path TempDir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("ackermann_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Result Exec(const std::string& args) {
  const fs::path err = TempDir() / "stderr.txt";
  std::string cmd = "'" + Env("ACKERMANN_BIN") + "' " + args + " 2>'" + err.string() + "'";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = Slurp(err);
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    if (Env("ACKERMANN_BIN").empty() || Env("ACKERMANN_SAMPLES").empty())
      GTEST_SKIP() << "ACKERMANN_BIN and ACKERMANN_SAMPLES must be set";
  }
};

TEST_F(Cli, CheckVerdictsAndExitCodes) {
  auto s1 = Exec("check " + Sample("s1.fo"));
  EXPECT_EQ(s1.code, 10);
  EXPECT_EQ(s1.out.substr(0, s1.out.find('\n')), "SAT (method=gfp, pi0={})");

  auto s2 = Exec("check " + Sample("s2.fo") + " --method game");
  EXPECT_EQ(s2.code, 20);
  EXPECT_EQ(s2.out.rfind("UNSAT", 0), 0u);

  auto s4 = Exec("check " + Sample("s4.fo") + " --method extended");
  EXPECT_EQ(s4.code, 20);
  EXPECT_EQ(s4.out.rfind("UNSAT", 0), 0u);
}

TEST_F(Cli, CheckJsonIsAnOutcome) {
  auto r = Exec("check " + Sample("s3.fo") + " --json");
  ASSERT_EQ(r.code, 10);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["verdict"], "SAT");
  EXPECT_EQ(j["method"], "gfp");
  EXPECT_TRUE(j.contains("certificate"));
  EXPECT_FALSE(j["stats"].contains("elapsed_ms"));
  auto timed = nlohmann::json::parse(Exec("check " + Sample("s3.fo") + " --json --timing").out);
  EXPECT_TRUE(timed["stats"].contains("elapsed_ms"));
}

TEST_F(Cli, ErrorsMapToExitCodes) {
  const fs::path bad = TempDir() / "bad.fo";
  std::ofstream(bad) << "exists x. P(x)\n";
  auto frag = Exec("check " + bad.string());
  EXPECT_EQ(frag.code, 2);
  EXPECT_NE(frag.err.find("universal"), std::string::npos);

  std::ofstream(bad) << "exists z. forall x. P(x) &\n";
  EXPECT_EQ(Exec("parse " + bad.string()).code, 2);

  EXPECT_EQ(Exec("check " + Sample("s1.fo") + " --method bogus").code, 1);
  EXPECT_EQ(Exec("check").code, 1);
  EXPECT_EQ(Exec("frobnicate").code, 1);
  EXPECT_EQ(Exec("check /nonexistent/file.fo").code, 1);
  EXPECT_EQ(Exec("model " + Sample("s3.fo") + " --method game").code, 1);
  EXPECT_EQ(Exec("check " + Sample("s3.fo") + " --max-witnesses 1").code, 1);
  EXPECT_EQ(Exec("brute " + Sample("s2.fo") + " --max-size 6 --max-structures 100").code, 1);
  EXPECT_EQ(Exec("--help").code, 0);
}

TEST_F(Cli, ModelCommand) {
  const fs::path out = TempDir() / "m.json";
  auto r = Exec("model " + Sample("s3.fo") + " --depth 2 -o " + out.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  auto j = nlohmann::json::parse(Slurp(out));
  ASSERT_EQ(j["stages"].size(), 3u);
  EXPECT_EQ(j["stages"][0]["universe_size"], 1);
  EXPECT_EQ(j["stages"][2]["universe_size"], 3);

  EXPECT_EQ(Exec("model " + Sample("s2.fo") + " --depth 1").code, 20);

  auto c = Exec("model " + Sample("s4.fo") + " --depth 2");
  ASSERT_EQ(c.code, 3);
  auto cj = nlohmann::json::parse(c.out);
  EXPECT_EQ(cj["conflict"]["stage"], 2);
  EXPECT_EQ(cj["conflict"]["tuple"], nlohmann::json::parse("[0,1]"));
}

TEST_F(Cli, DiffMatrix) {
  auto s3 = Exec("diff " + Sample("s3.fo") + " --max-size 2");
  EXPECT_EQ(s3.code, 0);
  EXPECT_NE(s3.out.find("oracle    model of size 2"), std::string::npos);

  auto s4 = Exec("diff " + Sample("s4.fo") + " --max-size 4 --json");
  EXPECT_EQ(s4.code, 0);
  auto j = nlohmann::json::parse(s4.out);
  EXPECT_EQ(j["gfp"], "SAT");
  EXPECT_EQ(j["game"], "SAT");
  EXPECT_EQ(j["extended"], "UNSAT");
  EXPECT_TRUE(j["oracle"]["model_size"].is_null());
  EXPECT_EQ(j["classification"], "documented-divergence");
  EXPECT_NE(s4.err.find("warning"), std::string::npos);
}

TEST_F(Cli, BruteAndParse) {
  auto b = Exec("brute " + Sample("s5.fo") + " --max-size 2");
  EXPECT_EQ(b.code, 10);
  auto none = Exec("brute " + Sample("s2.fo") + " --max-size 3");
  EXPECT_EQ(none.code, 20);
  EXPECT_NE(none.out.find("no model of size <= 3"), std::string::npos);

  auto p = Exec("parse " + Sample("s3.fo"));
  EXPECT_EQ(p.code, 0);
  EXPECT_EQ(p.out, "exists z. forall x. exists y. (E(x,y) & (~E(x,x)))\nsignature: {E/2}\n");
  auto pj = nlohmann::json::parse(Exec("parse " + Sample("s3.fo") + " --json").out);
  EXPECT_EQ(pj["signature"]["E"], 2);
}

TEST_F(Cli, CertifyRoundTripAndMutation) {
  for (const char* method : {"gfp", "extended"}) {
    const fs::path cert = TempDir() / "cert.json";
    ASSERT_EQ(Exec("check " + Sample("s5.fo") + " --json --method " + method + " -o " + cert.string()).code, 10);
    EXPECT_EQ(Exec("certify " + Sample("s5.fo") + " --cert " + cert.string()).code, 0) << method;

    auto j = nlohmann::json::parse(Slurp(cert));
    auto& atoms = j["certificate"]["strategy"][0]["witness"]["atom_values"];
    for (auto& a : atoms) a["value"] = !a["value"].get<bool>();
    std::ofstream(cert) << j.dump();
    auto rejected = Exec("certify " + Sample("s5.fo") + " --cert " + cert.string());
    EXPECT_EQ(rejected.code, 4) << method;
    EXPECT_NE(rejected.out.find("REJECTED"), std::string::npos);
  }
  const fs::path junk = TempDir() / "junk.json";
  std::ofstream(junk) << "{not json";
  EXPECT_EQ(Exec("certify " + Sample("s5.fo") + " --cert " + junk.string()).code, 2);
}

TEST_F(Cli, Determinism) {
  const std::string cmds[] = {"check", "check --method game", "check --method extended", "check --json",
                              "check --json --method extended", "diff --max-size 2"};
  for (const char* f : {"s1.fo", "s2.fo", "s3.fo", "s4.fo", "s5.fo"}) {
    for (const auto& c : cmds) {
      auto a = Exec(c + " " + Sample(f));
      auto b = Exec(c + " " + Sample(f) + " --jobs 4");
      EXPECT_EQ(a.code, b.code) << c << " " << f;
      EXPECT_EQ(a.out, b.out) << c << " " << f;
      EXPECT_EQ(a.out, Exec(c + " " + Sample(f)).out) << c << " " << f;
    }
  }
}

}  // namespace
