// topoforge: build and verify finite-stage neighborhood bases over
// algebraic closures of prime fields (and a rational control field).
//
// Exit codes: 0 success / certified, 1 verification failure, 2 usage or
// malformed input, 3 budget exhausted (a partial artifact is still written).

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "topoforge.h"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  out << data;
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    std::exit(2);
  }
}

struct Options {
  unsigned p = 2;
  bool rational_control = false;
  unsigned rows = 1;
  unsigned precision = 16;
  unsigned long long tau_budget = 64;
  unsigned long long branch_budget = 8;
  unsigned long long direct_attempts = 8;
  unsigned long long max_stage_series = 100000;
  unsigned long long max_stage_field = 2000000;
  unsigned long long seed = 0;
  unsigned jobs = 0;  // 0 = unset; env or default
  std::string strategy = "series-guided";
  unsigned dim = 1;
};

std::string config_json(const Options& o) {
  std::ostringstream ss;
  unsigned jobs = o.jobs;
  if (jobs == 0) {
    if (const char* env = std::getenv("TOPOFORGE_JOBS")) jobs = std::max(1, std::atoi(env));
    else jobs = 1;
  }
  ss << "{\"p\":" << (o.rational_control ? 0 : o.p) << ",\"rows\":" << o.rows
     << ",\"precision\":" << o.precision << ",\"tau_budget\":" << o.tau_budget
     << ",\"branch_budget\":" << o.branch_budget << ",\"direct_attempts\":" << o.direct_attempts
     << ",\"max_stage_series\":" << o.max_stage_series << ",\"max_stage_field\":" << o.max_stage_field
     << ",\"seed\":" << o.seed << ",\"jobs\":" << jobs << ",\"strategy\":\"" << o.strategy
     << "\",\"sample_dim\":" << o.dim << "}";
  return ss.str();
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("-p,--characteristic", o.p, "prime characteristic (2, 3, 5, ...)");
  cmd->add_flag_callback("--field-rational-control", [&o]() { o.rational_control = true; },
                         "use the exact-rational control field instead of a closure");
  cmd->add_option("-N,--precision", o.precision, "series precision floor");
  cmd->add_option("--tau-budget", o.tau_budget, "seed candidates per row");
  cmd->add_option("--branch-budget", o.branch_budget, "root-branch retries per lift node");
  cmd->add_option("--direct-attempts", o.direct_attempts, "rotation retries in direct mode");
  cmd->add_option("--max-stage-series", o.max_stage_series, "cap on series stage size");
  cmd->add_option("--max-stage-field", o.max_stage_field, "cap on field stage size");
  cmd->add_option("--seed", o.seed, "RNG seed for candidate shuffling");
  cmd->add_option("--jobs", o.jobs, "parallel seed attempts (default: TOPOFORGE_JOBS or 1)");
}

int run_build(const Options& o, const std::string& out_path) {
  tf_session* s = tf_session_create(config_json(o).c_str());
  if (!s) {
    std::cerr << "error: bad configuration\n";
    return 2;
  }
  char* artifact = nullptr;
  tf_status st = tf_build(s, &artifact);
  if (artifact) {
    write_file(out_path, artifact);
    tf_string_free(artifact);
  }
  if (st == TF_OK) {
    std::cout << "certified artifact written to " << out_path << "\n";
  } else {
    std::cerr << "build: " << tf_session_last_error(s) << "\n";
    if (st == TF_E_BUDGET) std::cerr << "partial artifact written to " << out_path << "\n";
  }
  tf_session_destroy(s);
  return st == TF_OK ? 0 : (st == TF_E_BUDGET ? 3 : 2);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-stage neighborhood basis forge"};
  app.require_subcommand(1);

  Options o;
  std::string out_path = "artifact.json";
  std::string samples_path;
  std::string artifact_path;
  unsigned brute_p = 2;
  unsigned brute_len = 4;
  bool pretty = false;

  CLI::App* build = app.add_subcommand("build", "build a stage matrix with J rows");
  add_common(build, o);
  build->add_option("-J,--rows", o.rows, "number of diagonal rows");
  build->add_option("--strategy", o.strategy, "series-guided or direct-greedy")
      ->check(CLI::IsMember({"series-guided", "direct-greedy"}));
  build->add_option("-o,--output", out_path, "artifact output path");

  CLI::App* frontier = app.add_subcommand("frontier", "frontier build from a sample set");
  add_common(frontier, o);
  frontier->add_option("-J,--rows", o.rows, "number of diagonal rows");
  frontier->add_option("-n,--dim", o.dim, "sample tuple arity");
  frontier->add_option("--samples", samples_path, "sample-set JSON file")->required();
  frontier->add_option("-o,--output", out_path, "artifact output path");

  CLI::App* verify = app.add_subcommand("verify", "re-verify an artifact");
  verify->add_option("artifact", artifact_path, "artifact JSON path")->required();

  CLI::App* brute = app.add_subcommand("brute", "exhaustive finite-field suitable search");
  brute->add_option("-p,--characteristic", brute_p, "prime (2, 3, or 5)");
  brute->add_option("-L,--max-len", brute_len, "maximum sequence length");

  CLI::App* exp = app.add_subcommand("export", "re-format an artifact");
  exp->add_flag("--pretty", pretty, "indent the output");
  exp->add_option("artifact", artifact_path, "artifact JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (build->parsed()) return run_build(o, out_path);

  if (frontier->parsed()) {
    tf_session* s = tf_session_create(config_json(o).c_str());
    if (!s) {
      std::cerr << "error: bad configuration\n";
      return 2;
    }
    char* artifact = nullptr;
    tf_status st;
    try {
      st = tf_frontier_build(s, read_file(samples_path).c_str(), &artifact);
    } catch (const CLI::ValidationError& e) {
      std::cerr << e.what() << "\n";
      tf_session_destroy(s);
      return 2;
    }
    if (artifact) {
      write_file(out_path, artifact);
      tf_string_free(artifact);
    }
    if (st == TF_OK) std::cout << "certified frontier artifact written to " << out_path << "\n";
    else {
      std::cerr << "frontier: " << tf_session_last_error(s) << "\n";
      if (st == TF_E_BUDGET) std::cerr << "partial artifact written to " << out_path << "\n";
    }
    tf_session_destroy(s);
    return st == TF_OK ? 0 : (st == TF_E_BUDGET ? 3 : 2);
  }

  if (verify->parsed()) {
    tf_session* s = tf_session_create("");
    char* report = nullptr;
    tf_status st;
    try {
      st = tf_verify(s, read_file(artifact_path).c_str(), &report);
    } catch (const CLI::ValidationError& e) {
      std::cerr << e.what() << "\n";
      tf_session_destroy(s);
      return 2;
    }
    if (report) {
      std::cout << report << "\n";
      tf_string_free(report);
    }
    if (st != TF_OK) std::cerr << "verify: " << tf_session_last_error(s) << "\n";
    tf_session_destroy(s);
    return st == TF_OK ? 0 : (st == TF_E_VERIFY ? 1 : 2);
  }

  if (brute->parsed()) {
    tf_session* s = tf_session_create("");
    char* report = nullptr;
    tf_status st = tf_brute_force(s, brute_p, brute_len, &report);
    if (report) {
      std::cout << report << "\n";
      tf_string_free(report);
    }
    if (st != TF_OK) std::cerr << "brute: " << tf_session_last_error(s) << "\n";
    tf_session_destroy(s);
    return st == TF_OK ? 0 : 2;
  }

  if (exp->parsed()) {
    tf_session* s = tf_session_create("");
    char* out = nullptr;
    tf_status st;
    try {
      st = tf_reformat(s, read_file(artifact_path).c_str(), pretty ? 1 : 0, &out);
    } catch (const CLI::ValidationError& e) {
      std::cerr << e.what() << "\n";
      tf_session_destroy(s);
      return 2;
    }
    if (out) {
      std::cout << out << "\n";
      tf_string_free(out);
    }
    if (st != TF_OK) std::cerr << "export: " << tf_session_last_error(s) << "\n";
    tf_session_destroy(s);
    return st == TF_OK ? 0 : 2;
  }

  return 2;
}
