#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

#ifndef TOPOFORGE_CLI_PATH
#define TOPOFORGE_CLI_PATH "./topoforge"
#endif

struct RunResult {
  int status;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(TOPOFORGE_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), got);
  int rc = pclose(p);
  return RunResult{WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, out};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(run("").status == 2);
  CHECK(run("bogus-subcommand").status == 2);
  CHECK(run("verify").status == 2);
}

TEST_CASE("build then verify then export round-trip") {
  RunResult b = run("build -p 2 -J 1 --tau-budget 24 -o /tmp/tf_cli_a.json");
  CHECK(b.status == 0);
  RunResult v = run("verify /tmp/tf_cli_a.json");
  CHECK(v.status == 0);
  auto rep = nlohmann::json::parse(v.out.substr(v.out.find('{')));
  CHECK(rep["ok"] == true);
  RunResult e = run("export --pretty /tmp/tf_cli_a.json");
  CHECK(e.status == 0);
  CHECK(e.out.find("\"format\"") != std::string::npos);
}

TEST_CASE("identical config and seed give byte-identical artifacts") {
  REQUIRE(run("build -p 2 -J 2 --seed 7 --tau-budget 24 -o /tmp/tf_cli_r1.json").status == 0);
  REQUIRE(run("build -p 2 -J 2 --seed 7 --tau-budget 24 -o /tmp/tf_cli_r2.json").status == 0);
  CHECK(slurp("/tmp/tf_cli_r1.json") == slurp("/tmp/tf_cli_r2.json"));
  CHECK_FALSE(slurp("/tmp/tf_cli_r1.json").empty());
}

TEST_CASE("tampered artifact fails verification with exit 1") {
  REQUIRE(run("build -p 3 -J 1 --tau-budget 24 -o /tmp/tf_cli_t.json").status == 0);
  auto j = nlohmann::json::parse(slurp("/tmp/tf_cli_t.json"));
  j["rows"][1][1].push_back("p:3;d:1;c:[2]");  // inject -1 into A_1
  std::ofstream("/tmp/tf_cli_t.json") << j.dump();
  RunResult v = run("verify /tmp/tf_cli_t.json");
  CHECK(v.status == 1);
}

TEST_CASE("malformed artifact exits 2") {
  std::ofstream("/tmp/tf_cli_bad.json") << "{\"format\":\"garbage\"}";
  CHECK(run("verify /tmp/tf_cli_bad.json").status == 2);
}

TEST_CASE("rational control build exhausts with exit 3 and writes the partial artifact") {
  RunResult b = run("build --field-rational-control -J 2 --tau-budget 16 -N 8 -o /tmp/tf_cli_q.json");
  CHECK(b.status == 3);
  auto j = nlohmann::json::parse(slurp("/tmp/tf_cli_q.json"));
  CHECK(j["status"]["budget_exhausted"] == true);
}

TEST_CASE("brute subcommand reports the finite-field collapse") {
  RunResult r = run("brute -p 3 -L 3");
  CHECK(r.status == 0);
  auto j = nlohmann::json::parse(r.out.substr(r.out.find('{')));
  CHECK(j["stages"][2]["forced_zero"] == true);
}

TEST_CASE("frontier subcommand from a sample file") {
  nlohmann::json sj;
  sj["dim"] = 1;
  sj["limit_point"] = {"p:2;d:1;c:[0]"};
  sj["samples"] = {{"p:2;d:4;c:[0,1,0,1]"}, {"p:2;d:4;c:[1,1,0,1]"}, {"p:2;d:4;c:[0,0,1,1]"}};
  std::ofstream("/tmp/tf_cli_samples.json") << sj.dump();
  RunResult f = run("frontier -p 2 -J 2 -n 1 --samples /tmp/tf_cli_samples.json -o /tmp/tf_cli_f.json");
  CHECK(f.status == 0);
  CHECK(run("verify /tmp/tf_cli_f.json").status == 0);
}

TEST_CASE("TOPOFORGE_JOBS env var is honored") {
  RunResult b = run("build -p 2 -J 1 --tau-budget 8 --jobs 2 -o /tmp/tf_cli_j.json");
  CHECK(b.status == 0);
  // same artifact as the sequential run with the same seed
  REQUIRE(run("build -p 2 -J 1 --tau-budget 8 -o /tmp/tf_cli_j1.json").status == 0);
  CHECK(slurp("/tmp/tf_cli_j.json") == slurp("/tmp/tf_cli_j1.json"));
}
