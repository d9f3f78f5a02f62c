// Command-line front end. Exit codes:
//   check   10 SAT, 20 UNSAT, 3 certificate self-check failure
//   model   0 built, 20 UNSAT, 3 construction conflict
//   diff    0 agreement or documented divergence, 4 hard disagreement
//   parse   0
//   brute   10 model found, 20 none up to the bound
//   certify 0 accepted, 4 rejected
// Every command: 2 parse/fragment error or malformed certificate, 1 usage
// error or exhausted budget.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ackermann/ackermann.hpp"

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string input;
  std::string method = "gfp";
  std::size_t depth = 2;
  std::size_t max_size = 3;
  bool json = false;
  std::string output;
  std::size_t jobs = 1;
  std::size_t max_witnesses = ack::kDefaultMaxWitnesses;
  std::size_t max_structures = ack::kDefaultMaxStructures;
  std::size_t max_game_depth = ack::kDefaultMaxGameDepth;
  std::size_t arity_cap = ack::kDefaultArityCap;
  bool timing = false;
  std::string cert;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Usage("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Emit(const Config& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output, std::ios::binary);
  if (!out) throw Usage("cannot write '" + cfg.output + "'");
  out << text;
}

std::string Dump(const ack::Json& j) { return j.dump(2) + "\n"; }

ack::SolveOptions Options(const Config& cfg) {
  ack::SolveOptions o;
  o.jobs = cfg.jobs;
  o.max_witness_searches = cfg.max_witnesses;
  o.max_game_depth = cfg.max_game_depth;
  o.arity_cap = cfg.arity_cap;
  return o;
}

ack::Method MethodOf(const Config& cfg) {
  auto m = ack::method_from_string(cfg.method);
  if (!m) throw Usage("unknown method '" + cfg.method + "'");
  return *m;
}

std::string StatsLine(const ack::SolveStats& st, bool timing) {
  std::string s = "stats: witness_searches=" + std::to_string(st.witness_searches) +
                  " cache_hits=" + std::to_string(st.cache_hits) + " types_total=" + std::to_string(st.types_total);
  if (timing) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", st.elapsed_ms);
    s += std::string(" elapsed_ms=") + buf;
  }
  return s + "\n";
}

int CmdParse(const Config& cfg) {
  auto s = ack::parse(ReadFile(cfg.input));
  if (cfg.json) {
    Emit(cfg, Dump(ack::sentence_to_json(s)));
    return 0;
  }
  std::string sig;
  for (const auto& r : s.signature) sig += (sig.empty() ? "" : ", ") + r.name + "/" + std::to_string(r.arity);
  Emit(cfg, ack::print(s) + "\nsignature: {" + sig + "}\n");
  return 0;
}

int CmdCheck(const Config& cfg) {
  auto s = ack::parse(ReadFile(cfg.input));
  const ack::Method method = MethodOf(cfg);
  auto out = ack::solve(s, method, Options(cfg));
  if (out.certificate) {
    auto violations = ack::check_certificate(s, *out.certificate, cfg.arity_cap);
    if (!violations.empty()) {
      std::cerr << "internal error: certificate fails its own check: " << violations.front().code << ": "
                << violations.front().detail << "\n";
      return 3;
    }
  }
  if (cfg.json) {
    Emit(cfg, Dump(ack::outcome_to_json(out, s, cfg.timing, cfg.arity_cap)));
  } else {
    std::string line = ack::to_string(out.verdict);
    line += " (method=" + std::string(ack::to_string(out.method));
    if (out.pi0) line += ", pi0=" + ack::render(*out.pi0, s.signature);
    line += ")\n";
    Emit(cfg, line + StatsLine(out.stats, cfg.timing));
  }
  return out.verdict == ack::Verdict::Sat ? 10 : 20;
}

int CmdModel(const Config& cfg) {
  auto s = ack::parse(ReadFile(cfg.input));
  const ack::Method method = MethodOf(cfg);
  if (method == ack::Method::Game) throw Usage("model needs a certificate; use --method gfp or extended");
  auto out = ack::solve(s, method, Options(cfg));
  if (out.verdict == ack::Verdict::Unsat) {
    std::cerr << "UNSAT: no model to build\n";
    return 20;
  }
  auto built = ack::build_model_sequence(s, *out.certificate, cfg.depth, cfg.arity_cap);
  if (auto* conflict = std::get_if<ack::ConstructionConflict>(&built)) {
    std::cerr << "construction conflict at stage " << conflict->stage << " on relation " << conflict->relation
              << "\n";
    Emit(cfg, Dump(ack::conflict_to_json(*conflict)));
    return 3;
  }
  const auto& staged = std::get<ack::StagedModel>(built);
  auto report = ack::verify_construction(staged, s, *out.certificate, cfg.arity_cap);
  if (!report.ok()) {
    std::cerr << "internal error: staged model fails verification: " << report.failures.front().code << ": "
              << report.failures.front().detail << "\n";
    return 3;
  }
  Emit(cfg, Dump(ack::staged_to_json(staged)));
  return 0;
}

int CmdDiff(const Config& cfg) {
  auto s = ack::parse(ReadFile(cfg.input));
  auto r = ack::run_diff(s, cfg.max_size, Options(cfg), cfg.max_structures);
  if (cfg.json) {
    ack::Json j{{"gfp", ack::to_string(r.gfp)},
                {"game", ack::to_string(r.game)},
                {"extended", ack::to_string(r.extended)},
                {"oracle", ack::Json{{"max_size", r.max_size},
                                     {"model_size", r.oracle_model_size ? ack::Json(*r.oracle_model_size)
                                                                        : ack::Json(nullptr)},
                                     {"enumerated", r.oracle_enumerated}}},
                {"classification", ack::to_string(r.classification)},
                {"notes", r.notes},
                {"exit", r.exit_code()}};
    Emit(cfg, Dump(j));
  } else {
    std::string oracle = r.oracle_model_size ? "model of size " + std::to_string(*r.oracle_model_size)
                                             : "none <= " + std::to_string(r.max_size);
    std::string text = std::string("gfp       ") + ack::to_string(r.gfp) + "\n" + "game      " +
                       ack::to_string(r.game) + "\n" + "extended  " + ack::to_string(r.extended) + "\n" +
                       "oracle    " + oracle + "\n" + "result    " + ack::to_string(r.classification) + "\n";
    for (const auto& n : r.notes) text += n + "\n";
    Emit(cfg, text);
  }
  if (r.classification == ack::DiffClass::DocumentedDivergence) std::cerr << "warning: documented divergence\n";
  return r.exit_code();
}

int CmdBrute(const Config& cfg) {
  auto s = ack::parse(ReadFile(cfg.input));
  auto r = ack::brute_force_search(s, cfg.max_size, cfg.max_structures, cfg.jobs);
  if (cfg.json) {
    ack::Json j{{"max_size", cfg.max_size},
                {"enumerated", r.enumerated},
                {"model", r.model ? ack::structure_to_json(*r.model) : ack::Json(nullptr)}};
    Emit(cfg, Dump(j));
  } else if (r.model) {
    Emit(cfg, "model of size " + std::to_string(r.model->size()) + "\n" + Dump(ack::structure_to_json(*r.model)));
  } else {
    Emit(cfg, "no model of size <= " + std::to_string(cfg.max_size) + " (larger models are not excluded)\n");
  }
  return r.model ? 10 : 20;
}

int CmdCertify(const Config& cfg) {
  auto s = ack::parse(ReadFile(cfg.input));
  ack::Certificate cert;
  try {
    cert = ack::certificate_from_json(ack::Json::parse(ReadFile(cfg.cert)), s, cfg.arity_cap);
  } catch (const Usage&) {
    throw;
  } catch (const std::exception& e) {
    std::cerr << "malformed certificate: " << e.what() << "\n";
    return 2;
  }
  auto violations = ack::check_certificate(s, cert, cfg.arity_cap);
  if (cfg.json) {
    ack::Json v = ack::Json::array();
    for (const auto& x : violations) v.push_back(ack::Json{{"code", x.code}, {"detail", x.detail}});
    Emit(cfg, Dump(ack::Json{{"valid", violations.empty()}, {"violations", v}}));
  } else if (violations.empty()) {
    Emit(cfg, "certificate OK\n");
  } else {
    std::string text = "certificate REJECTED\n";
    for (const auto& x : violations) text += "  " + x.code + ": " + x.detail + "\n";
    Emit(cfg, text);
  }
  return violations.empty() ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision procedure for sentences of the form exists z. forall x. exists y1..yn. psi"};
  app.require_subcommand(1);
  Config cfg;

  auto input = [&](CLI::App* sub) {
    sub->add_option("file", cfg.input, "Sentence file")->required();
    sub->add_option("-o", cfg.output, "Write output to this path instead of stdout");
    sub->add_flag("--json", cfg.json, "Machine-readable output");
  };
  auto solving = [&](CLI::App* sub) {
    sub->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::Range(1, 64));
    sub->add_option("--max-witnesses", cfg.max_witnesses, "Witness search budget per pi0")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-game-depth", cfg.max_game_depth, "Largest game counter bound accepted")
        ->check(CLI::PositiveNumber);
    sub->add_option("--arity-cap", cfg.arity_cap, "Largest arity accepted by the extended method")
        ->check(CLI::Range(1, 6));
  };
  auto method_opt = [&](CLI::App* sub) {
    sub->add_option("--method", cfg.method, "gfp | game | extended")
        ->check(CLI::IsMember({"gfp", "game", "extended"}));
  };
  auto oracle = [&](CLI::App* sub) {
    sub->add_option("--max-size", cfg.max_size, "Largest universe tried by the oracle")->check(CLI::Range(1, 8));
    sub->add_option("--max-structures", cfg.max_structures, "Oracle structure budget")->check(CLI::PositiveNumber);
  };

  auto* parse_cmd = app.add_subcommand("parse", "Parse and print a sentence with its signature");
  input(parse_cmd);

  auto* check_cmd = app.add_subcommand("check", "Decide satisfiability");
  input(check_cmd);
  method_opt(check_cmd);
  solving(check_cmd);
  check_cmd->add_flag("--timing", cfg.timing, "Include elapsed time in the statistics");

  auto* model_cmd = app.add_subcommand("model", "Build the staged model B0 <= ... <= Bm");
  input(model_cmd);
  method_opt(model_cmd);
  solving(model_cmd);
  model_cmd->add_option("--depth", cfg.depth, "Number of stages m")->check(CLI::Range(0, 8));

  auto* diff_cmd = app.add_subcommand("diff", "Run every method and the oracle, compare verdicts");
  input(diff_cmd);
  solving(diff_cmd);
  oracle(diff_cmd);

  auto* brute_cmd = app.add_subcommand("brute", "Brute-force finite model search");
  input(brute_cmd);
  oracle(brute_cmd);
  brute_cmd->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::Range(1, 64));

  auto* certify_cmd = app.add_subcommand("certify", "Check a certificate against a sentence");
  input(certify_cmd);
  certify_cmd->add_option("--cert", cfg.cert, "Certificate or check --json output")->required();
  certify_cmd->add_option("--arity-cap", cfg.arity_cap, "Arity cap the certificate was made with")
      ->check(CLI::Range(1, 6));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*parse_cmd) return CmdParse(cfg);
    if (*check_cmd) return CmdCheck(cfg);
    if (*model_cmd) return CmdModel(cfg);
    if (*diff_cmd) return CmdDiff(cfg);
    if (*brute_cmd) return CmdBrute(cfg);
    if (*certify_cmd) return CmdCertify(cfg);
  } catch (const ack::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Usage& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const ack::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 1;
  } catch (const ack::CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 1;
  } catch (const ack::CertificateError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
