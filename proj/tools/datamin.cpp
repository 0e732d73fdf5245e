// datamin: synthesize, verify, and audit data minimisers for programs in
// the bounded-domain mini language.
//
// Exit codes: 0 success, 1 parse/validation/input errors, 2 synthesis
// failure (class cap or enumeration budget), 3 failed verification
// property, 4 audit breach witnesses found.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "datamin/emit.hpp"
#include "datamin/knowledge.hpp"
#include "datamin/oracle.hpp"
#include "datamin/parser.hpp"
#include "datamin/printer.hpp"
#include "datamin/smtlib.hpp"
#include "datamin/solver.hpp"
#include "datamin/symexec.hpp"
#include "datamin/synth.hpp"

namespace fs = std::filesystem;
using namespace datamin;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSynthesis = 2;
constexpr int kExitVerify = 3;
constexpr int kExitBreach = 4;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

dsl::Program load_program(const fs::path& path) {
  try {
    return dsl::parse(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ":" + e.what(), e.loc);
  }
}

struct Limits {
  int unroll = dsl::kDefaultUnrollBound;
  std::uint64_t budget = 1'000'000;
  std::uint64_t class_cap = 100'000;
};

void add_limit_flags(CLI::App* cmd, Limits& limits) {
  cmd->add_option("--unroll", limits.unroll, "Loop unroll bound")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--budget", limits.budget, "Enumeration budget (product points)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--class-cap", limits.class_cap,
                  "Maximum equivalence classes per input")
      ->check(CLI::PositiveNumber);
}

// -- External SMT cross-check ------------------------------------------

// Runs one SMT-LIB2 script through the configured solver binary and
// returns "sat" / "unsat" / anything else verbatim.
std::string run_external_solver(const std::string& solver,
                                const std::string& script) {
  fs::path tmp =
      fs::temp_directory_path() / ("datamin-" + std::to_string(::getpid()) +
                                   "-" + std::to_string(::rand()) + ".smt2");
  write_file(tmp, script);
  std::string cmd = solver + " " + tmp.string() + " 2>/dev/null";
  std::string output;
  if (FILE* pipe = ::popen(cmd.c_str(), "r")) {
    char buf[256];
    while (fgets(buf, sizeof buf, pipe) != nullptr) output += buf;
    ::pclose(pipe);
  }
  fs::remove(tmp);
  std::istringstream is(output);
  std::string first;
  is >> first;
  return first;
}

// Cross-checks a handful of synthesis artifacts against an external
// solver: the reachable space is satisfiable, and guards within a table
// are pairwise disjoint.
bool smt_cross_check(const std::string& solver, const dsl::Program& program,
                     const symexec::SymbolicCharacterisation& gamma,
                     const synth::Minimiser& m, bool verbose) {
  logic::Env env = logic::env_of_program(program);
  auto expect = [&](const logic::FormulaPtr& f, bool expect_sat,
                    const std::string& what) {
    std::string got = run_external_solver(solver, logic::to_smtlib(f, env));
    bool ok = got == (expect_sat ? "sat" : "unsat");
    if (!ok)
      std::cerr << "smt cross-check failed: " << what << ": external solver said '"
                << got << "', expected " << (expect_sat ? "sat" : "unsat") << "\n";
    else if (verbose)
      std::cout << "smt cross-check: " << what << ": " << got << " (agrees)\n";
    return ok;
  };

  std::vector<logic::FormulaPtr> pcs;
  for (const auto& leaf : gamma.leaves) pcs.push_back(leaf.path_condition);
  logic::FormulaPtr reachable =
      logic::f_and({gamma.precondition, logic::f_or(std::move(pcs))});
  bool ok = expect(reachable, true, "reachable space");

  if (m.mode == synth::Mode::Distributed) {
    for (std::size_t a = 0; a < m.space.arity() && ok; ++a) {
      const auto& [name, dom] = m.space.vars()[a];
      const auto& rows = m.tables[a];
      for (std::size_t i = 0; i + 1 < rows.size() && ok; ++i) {
        logic::FormulaPtr overlap = logic::f_and(
            {logic::interval_set_formula(rows[i].guard, name, dom),
             logic::interval_set_formula(rows[i + 1].guard, name, dom)});
        ok = expect(overlap, false,
                    "guard disjointness of '" + name + "' rows " +
                        std::to_string(i) + "," + std::to_string(i + 1));
      }
    }
  } else {
    for (std::size_t i = 0; i + 1 < m.joint_table.size() && ok; ++i) {
      logic::FormulaPtr overlap = logic::f_and(
          {m.joint_table[i].guard, m.joint_table[i + 1].guard});
      ok = expect(overlap, false,
                  "guard disjointness of rows " + std::to_string(i) + "," +
                      std::to_string(i + 1));
    }
  }
  return ok;
}

// -- synth ----------------------------------------------------------------

int cmd_synth(const fs::path& program_path, const std::string& mode_name,
              const fs::path& outdir, bool emit_source, const Limits& limits,
              const fs::path& dump_tree, const std::string& smt_solver,
              bool verbose) {
  dsl::Program program = load_program(program_path);
  symexec::ExecOptions exec_options{limits.unroll, limits.budget};
  symexec::SymbolicCharacterisation gamma =
      symexec::symbolic_execute(program, exec_options);
  if (!dump_tree.empty()) write_file(dump_tree, symexec::to_debug_json(gamma));

  synth::SynthOptions options{limits.class_cap, limits.budget};
  synth::Minimiser m;
  if (mode_name == "monolithic") {
    m = synth::synthesize_monolithic(program, gamma, options);
    std::cout << "classes=" << m.joint_table.size()
              << " domain=" << m.space.size() << "\n";
  } else {
    m = synth::synthesize_distributed(program, gamma, options);
    for (std::size_t a = 0; a < m.space.arity(); ++a) {
      std::cout << m.space.name(a) << ": classes=" << m.tables[a].size() << "/"
                << m.space.domain(a).cardinality() << "\n";
    }
  }

  fs::path doc_path = outdir / (program.name + ".minimiser.json");
  write_file(doc_path, emit::to_json(m, program));
  if (verbose) std::cout << "wrote " << doc_path.string() << "\n";

  if (emit_source) {
    for (const auto& ep : emit::to_source(m, program)) {
      fs::path src_path = outdir / (program.name + "_min_" + ep.input_name + ".dm");
      write_file(src_path, ep.source);
      if (verbose) std::cout << "wrote " << src_path.string() << "\n";
    }
  }

  if (!smt_solver.empty() &&
      !smt_cross_check(smt_solver, program, gamma, m, verbose))
    return kExitSynthesis;
  return kExitOk;
}

// -- verify -----------------------------------------------------------------

struct PropertyResult {
  std::string name;
  bool passed;
  std::string detail;
};

int cmd_verify(const fs::path& program_path, const fs::path& minimiser_path,
               const Limits& limits, const fs::path& report_path, bool verbose) {
  dsl::Program program = load_program(program_path);
  synth::Minimiser m;
  std::vector<PropertyResult> results;

  try {
    m = emit::from_json(read_file(minimiser_path), program);
    results.push_back({"digest", true, ""});
  } catch (const Error& e) {
    results.push_back({"digest", false, e.what()});
  }

  if (results.back().passed) {
    oracle::OutputTable table(program, limits.budget, limits.unroll);
    const InputSpace& space = table.space();
    synth::Applier applier(m);

    bool correct = true, idempotent = true, total = true;
    std::string witness;
    Point point;
    for (std::uint64_t r : table.universe()) {
      space.unrank(r, point);
      Point rep;
      try {
        rep = applier.at(point);
      } catch (const Error& e) {
        total = false;
        witness = e.what();
        break;
      }
      if (dsl::evaluate_point(program, space, rep, limits.unroll) != *table.at(r)) {
        correct = false;
        witness = "output changes at " + space.point_to_string(point);
        break;
      }
      if (applier.at(rep) != rep) {
        idempotent = false;
        witness = "representative of " + space.point_to_string(point) +
                  " is not a fixed point";
        break;
      }
    }
    results.push_back({"totality", total, total ? "" : witness});
    results.push_back({"correctness", correct, correct ? "" : witness});
    results.push_back({"idempotency", idempotent, idempotent ? "" : witness});

    try {
      synth::Minimiser reference =
          m.mode == synth::Mode::Distributed
              ? oracle::reference_best_distributed(program, limits.budget)
              : oracle::reference_best_monolithic(program, limits.budget);
      bool best = oracle::same_partition(m, reference);
      std::string detail;
      if (!best) {
        detail = "partition differs from the enumerated best minimiser";
        // Name one merged-or-split witness pair if possible.
        oracle::Partition want = oracle::induced_partition(reference, program,
                                                           limits.budget);
        oracle::Partition got = oracle::induced_partition(m, program,
                                                          limits.budget);
        if (!want.classes.empty() && !got.classes.empty()) {
          for (const auto& cls : got.classes) {
            std::size_t c0 = want.class_of(cls.front());
            for (std::uint64_t r : cls) {
              if (want.class_of(r) != c0) {
                detail += "; " + space.point_to_string(space.point_at(cls.front())) +
                          " and " + space.point_to_string(space.point_at(r)) +
                          " share a representative but differ semantically";
                break;
              }
            }
          }
        }
      }
      results.push_back({"best-partition", best, detail});
    } catch (const BudgetError& e) {
      results.push_back({"best-partition", true,
                         std::string("skipped: ") + e.what()});
    }
  }

  bool all_passed = true;
  for (const auto& r : results) {
    all_passed &= r.passed;
    std::cout << (r.passed ? "pass" : "FAIL") << " " << r.name;
    if (!r.detail.empty() && (verbose || !r.passed))
      std::cout << " (" << r.detail << ")";
    std::cout << "\n";
  }

  if (!report_path.empty()) {
    nlohmann::ordered_json report;
    report["program"] = program.name;
    report["minimiser"] = minimiser_path.string();
    report["passed"] = all_passed;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& r : results) {
      nlohmann::ordered_json c;
      c["name"] = r.name;
      c["passed"] = r.passed;
      if (!r.detail.empty()) c["detail"] = r.detail;
      checks.push_back(std::move(c));
    }
    report["checks"] = std::move(checks);
    write_file(report_path, report.dump(2) + "\n");
  }
  return all_passed ? kExitOk : kExitVerify;
}

// -- online -----------------------------------------------------------------

int cmd_online(const fs::path& program_path,
               const std::vector<std::string>& raw_inputs, const Limits& limits) {
  dsl::Program program = load_program(program_path);
  Valuation v;
  for (const auto& raw : raw_inputs) {
    auto eq = raw.find('=');
    if (eq == std::string::npos)
      throw Error("--in expects name=value, got '" + raw + "'");
    std::string name = raw.substr(0, eq);
    std::string value = raw.substr(eq + 1);
    const dsl::Param* param = program.find_input(name);
    if (param == nullptr)
      throw Error("'" + name + "' is not an input of '" + program.name + "'");
    if (param->domain.kind == Type::Bool) {
      if (value != "true" && value != "false")
        throw Error("input '" + name + "' is boolean; got '" + value + "'");
      v[name] = value == "true" ? 1 : 0;
    } else {
      try {
        v[name] = std::stoll(value);
      } catch (const std::exception&) {
        throw Error("invalid integer '" + value + "' for input '" + name + "'");
      }
    }
  }

  symexec::ExecOptions exec_options{limits.unroll, limits.budget};
  symexec::SymbolicCharacterisation gamma =
      symexec::symbolic_execute(program, exec_options);
  synth::SynthOptions options{limits.class_cap, limits.budget};
  Valuation rep = synth::online_representative(program, gamma, v, options);

  bool first = true;
  for (const auto& in : program.inputs) {
    if (!first) std::cout << " ";
    std::cout << in.name << "="
              << value_to_string(rep.at(in.name), in.domain.kind);
    first = false;
  }
  std::cout << "\n";
  return kExitOk;
}

// -- audit --------------------------------------------------------------

int cmd_audit(const fs::path& log_path) {
  std::ifstream in(log_path);
  if (!in) throw Error("cannot open '" + log_path.string() + "'");
  std::vector<knowledge::AuditEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(log_path.string() + ":" + std::to_string(line_no) +
                  ": invalid JSON: " + e.what());
    }
    knowledge::AuditEntry entry;
    for (const auto& [name, value] : j.at("input").items()) {
      if (value.is_boolean()) entry.input[name] = value.get<bool>() ? 1 : 0;
      else entry.input[name] = value.get<Value>();
    }
    const auto& out = j.at("output");
    if (out.is_boolean()) {
      entry.output = out.get<bool>() ? 1 : 0;
      entry.output_is_bool = true;
    } else {
      entry.output = out.get<Value>();
    }
    entries.push_back(std::move(entry));
  }

  auto witnesses = knowledge::audit_log(entries);
  for (const auto& w : witnesses) {
    const auto& a = entries[w.first_entry];
    const auto& b = entries[w.second_entry];
    auto fmt = [](const Valuation& v) {
      std::string s = "{";
      bool first = true;
      for (const auto& [name, value] : v) {
        if (!first) s += ", ";
        s += name + "=" + std::to_string(value);
        first = false;
      }
      return s + "}";
    };
    std::cout << "breach: entries " << w.first_entry + 1 << " and "
              << w.second_entry + 1 << " disclosed distinct inputs " << fmt(a.input)
              << " and " << fmt(b.input) << " for the same output "
              << value_to_string(w.output, a.output_is_bool ? Type::Bool : Type::Int)
              << "\n";
  }
  if (witnesses.empty()) {
    std::cout << "no breaches: all logged disclosures are distinguishable\n";
    return kExitOk;
  }
  std::cout << witnesses.size() << " breach witness"
            << (witnesses.size() == 1 ? "" : "es") << "\n";
  return kExitBreach;
}

// -- knowledge ------------------------------------------------------------

int cmd_knowledge(const fs::path& f_path, const fs::path& g_path,
                  const Limits& limits) {
  dsl::Program f = load_program(f_path);
  dsl::Program g = load_program(g_path);
  bool fg = knowledge::discloses_leq(f, g, limits.budget);
  bool gf = knowledge::discloses_leq(g, f, limits.budget);
  if (fg && gf) std::cout << "f ≡ g\n";
  else if (fg) std::cout << "f ⊑ g\n";
  else if (gf) std::cout << "g ⊑ f\n";
  else std::cout << "incomparable\n";
  std::cout << "ker(f): " << oracle::kernel(f, limits.budget).classes.size()
            << " classes\n";
  std::cout << "ker(g): " << oracle::kernel(g, limits.budget).classes.size()
            << " classes\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"datamin: provably-best data minimisers for bounded-domain programs"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Verbose output");

  // synth
  auto* synth_cmd =
      app.add_subcommand("synth", "Synthesize a minimiser for a program");
  fs::path synth_program;
  std::string mode = "distributed";
  fs::path outdir = ".";
  bool emit_source = false;
  fs::path dump_tree;
  std::string smt_solver;
  Limits synth_limits;
  synth_cmd->add_option("program", synth_program, "Program source (.dm)")
      ->required();
  synth_cmd->add_option("--mode", mode, "monolithic or distributed")
      ->check(CLI::IsMember({"monolithic", "distributed"}));
  synth_cmd->add_option("-o,--out", outdir, "Output directory");
  synth_cmd->add_flag("--emit-source", emit_source,
                      "Also emit the minimiser as .dm source");
  synth_cmd->add_option("--dump-tree", dump_tree,
                        "Dump the symbolic leaves as JSON to this path");
  synth_cmd->add_option("--smt-solver", smt_solver,
                        "External SMT-LIB2 solver binary for cross-checking")
      ->envname("DATAMIN_SMT");
  add_limit_flags(synth_cmd, synth_limits);

  // verify
  auto* verify_cmd =
      app.add_subcommand("verify", "Verify a minimiser document against its program");
  fs::path verify_program, verify_minimiser, report_path;
  Limits verify_limits;
  verify_cmd->add_option("program", verify_program, "Program source (.dm)")
      ->required();
  verify_cmd->add_option("minimiser", verify_minimiser, "Minimiser JSON document")
      ->required();
  verify_cmd->add_option("--report", report_path, "Write a JSON report here");
  add_limit_flags(verify_cmd, verify_limits);

  // online
  auto* online_cmd = app.add_subcommand(
      "online", "Compute the representative for one concrete input");
  fs::path online_program;
  std::vector<std::string> online_inputs;
  Limits online_limits;
  online_cmd->add_option("program", online_program, "Program source (.dm)")
      ->required();
  online_cmd->add_option("--in", online_inputs, "Input assignment name=value")
      ->required();
  add_limit_flags(online_cmd, online_limits);

  // audit
  auto* audit_cmd =
      app.add_subcommand("audit", "Audit a disclosure log for breaches");
  fs::path log_path;
  audit_cmd->add_option("log", log_path, "JSON-lines log file")->required();

  // knowledge
  auto* knowledge_cmd = app.add_subcommand(
      "knowledge", "Compare the disclosure of two programs");
  fs::path know_f, know_g;
  Limits know_limits;
  knowledge_cmd->add_option("f", know_f, "First program (.dm)")->required();
  knowledge_cmd->add_option("g", know_g, "Second program (.dm)")->required();
  add_limit_flags(knowledge_cmd, know_limits);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth_cmd->parsed())
      return cmd_synth(synth_program, mode, outdir, emit_source, synth_limits,
                       dump_tree, smt_solver, verbose);
    if (verify_cmd->parsed())
      return cmd_verify(verify_program, verify_minimiser, verify_limits,
                        report_path, verbose);
    if (online_cmd->parsed())
      return cmd_online(online_program, online_inputs, online_limits);
    if (audit_cmd->parsed()) return cmd_audit(log_path);
    if (knowledge_cmd->parsed())
      return cmd_knowledge(know_f, know_g, know_limits);
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSynthesis;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
