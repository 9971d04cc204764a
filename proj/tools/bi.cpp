// bi: command-line front end for the notation system.
//
// Exit status: 0 success, 1 assertion or validation failure, 2 usage error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bi/bi.hpp"

namespace {

using json = nlohmann::json;
using namespace bi;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void report_error(const ProofError& e) {
  std::cout << "error: " << to_string(e.kind()) << "\n  " << e.detail() << "\n";
  if (!e.path().empty()) std::cout << "  path: " << e.path() << "\n";
  if (!e.clause().empty()) std::cout << "  clause: " << e.clause() << "\n";
}

void print_verdict(const AuditVerdict& v) {
  std::size_t passed = 0;
  for (const auto& c : v.checks) passed += c.pass;
  for (const auto& c : v.failures()) std::cout << "FAIL " << c.name << "  " << c.where << "\n";
  std::cout << "audit: " << (v.overall ? "pass" : "fail") << " (" << passed << "/" << v.checks.size()
            << " checks)\n";
}

int cmd_check(const std::string& path) {
  Derivation d = parse_derivation(slurp(path));
  std::cout << "end-sequent: " << render(d.end_sequent()) << "\n";
  std::cout << "degree: " << d.degree() << "\n";
  ProperReport pr = is_proper(d);
  if (!pr.ok) {
    std::cout << "proper: no (clause " << pr.clause << ")\n  path: " << (pr.path.empty() ? "root" : pr.path)
              << "\n  " << pr.reason << "\n";
    return 1;
  }
  std::cout << "proper: yes\n";
  std::cout << "symbol: " << render(rule_of(d)) << "\n";
  GateReport g = gate(d);
  std::cout << "gate: proper=" << g.proper << " pi1=" << g.pi1_end << " degree0=" << g.degree_zero
            << " symbol=" << g.tp_ok << "\n";
  return 0;
}

int cmd_step(const std::string& path, unsigned count) {
  Derivation d = parse_derivation(slurp(path));
  for (unsigned k = 0; k < count; ++k) {
    RedResult res = red_step(d);
    std::cout << k << " " << res.clause << " " << render(res.label) << "\n";
    d = res.term;
  }
  std::cout << render_pretty(d) << "\n";
  return 0;
}

json step_record(const TraceStep& st) {
  return {{"type", "step"},          {"index", st.index},
          {"path", st.path},         {"clause", st.clause},
          {"label", render(st.label)}, {"before", render(st.before)},
          {"after", render(st.after)}, {"global", render(st.global)},
          {"end_sequent", render(st.global.end_sequent())}};
}

void write_trace(std::ostream& out, const Trace& t) {
  out << json{{"type", "input"}, {"term", render(t.input)}, {"end_sequent", render(t.input.end_sequent())}}.dump()
      << "\n";
  for (const auto& st : t.steps) out << step_record(st).dump() << "\n";
  out << json{{"type", "final"},
              {"term", render(t.final)},
              {"steps", t.steps.size()},
              {"budget_exhausted", t.budget_exhausted},
              {"lazy_families", t.lazy_families}}
             .dump()
      << "\n";
}

Trace read_trace(const std::string& text) {
  Trace t;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_final = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ProofError(ErrorKind::ParseError, "trace line " + std::to_string(lineno) + ": " + e.what());
    }
    std::string type = j.value("type", "");
    if (type == "input") {
      t.input = parse_derivation(j.at("term").get<std::string>());
    } else if (type == "step") {
      TraceStep st;
      st.index = j.at("index").get<std::size_t>();
      st.path = j.at("path").get<std::string>();
      st.clause = j.at("clause").get<std::string>();
      st.before = parse_derivation(j.at("before").get<std::string>());
      st.after = parse_derivation(j.at("after").get<std::string>());
      st.global = parse_derivation(j.at("global").get<std::string>());
      t.steps.push_back(std::move(st));
    } else if (type == "final") {
      t.final = parse_derivation(j.at("term").get<std::string>());
      t.budget_exhausted = j.at("budget_exhausted").get<bool>();
      t.lazy_families = j.at("lazy_families").get<unsigned>();
      have_final = true;
    } else {
      throw ProofError(ErrorKind::ParseError, "trace line " + std::to_string(lineno) + ": unknown record type");
    }
  }
  if (!t.input.valid() || !have_final) throw ProofError(ErrorKind::ParseError, "trace lacks input or final record");
  return t;
}

int cmd_normalize(const std::string& path, std::size_t max_steps, const std::string& trace_out, bool exact,
                  bool prep) {
  Derivation d = parse_derivation(slurp(path));
  if (prep) d = prepare(d);
  Trace t = normalize(d, max_steps);
  if (!trace_out.empty()) {
    std::ofstream out(trace_out);
    if (!out) throw UsageError("cannot write " + trace_out);
    write_trace(out, t);
  }
  std::cout << "steps: " << t.steps.size() << (t.budget_exhausted ? " (budget exhausted)" : "") << "\n";
  if (t.lazy_families) std::cout << "lazy families: " << t.lazy_families << "\n";
  std::cout << "final: " << render(t.final) << "\n";
  bool cut_free = !t.budget_exhausted && is_cut_free(t.final);
  std::cout << "cut-free: " << (cut_free ? "yes" : "no") << "\n";
  AuditOptions opt;
  opt.exact = exact;
  AuditVerdict v = audit_trace(t, opt);
  print_verdict(v);
  return v.overall ? 0 : 1;
}

int cmd_audit(const std::string& path, bool exact) {
  Trace t = read_trace(slurp(path));
  AuditOptions opt;
  opt.exact = exact;
  AuditVerdict v = audit_trace(t, opt);
  print_verdict(v);
  return v.overall ? 0 : 1;
}

std::vector<std::uint64_t> parse_picks(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw UsageError("--omega expects a comma-separated list of numerals");
    out.push_back(std::stoull(item));
  }
  return out;
}

int cmd_expand(const std::string& path, unsigned depth, const std::string& picks, unsigned budget, bool records) {
  Derivation d = parse_derivation(slurp(path));
  TreeView v = expand(d, depth, parse_picks(picks), budget);
  if (!records) {
    std::cout << render_text(v);
    return 0;
  }
  for (const auto& r : tree_records(v))
    std::cout << json{{"path", r.path}, {"label", r.label}, {"sequent", r.sequent}, {"truncated", r.truncated}}.dump()
              << "\n";
  return 0;
}

int cmd_corpus(const std::string& name, bool list, bool do_export) {
  if (list || name.empty()) {
    for (const auto& n : scenario_names()) std::cout << n << "\n";
    for (const auto& [n, d] : sample_proofs()) std::cout << n << "\n";
    return 0;
  }
  for (const auto& [n, d] : sample_proofs())
    if (n == name) {
      std::cout << render_pretty(d) << "\n";
      return 0;
    }
  Scenario s;
  try {
    s = scenario(name);
  } catch (const ProofError&) {
    throw UsageError("unknown scenario " + name);
  }
  if (do_export) {
    std::cout << render_pretty(s.input) << "\n";
    return 0;
  }
  RedResult res = red_step(s.input);
  bool tp_ok = rule_of(s.input) == s.expected_tp;
  bool red_ok = alpha_equal(res.term, s.expected_red);
  AuditVerdict v = check_step(s.input, res.term);
  std::cout << "scenario " << s.name << "\n";
  std::cout << "symbol: " << render(rule_of(s.input)) << (tp_ok ? "  (as expected)" : "  MISMATCH") << "\n";
  std::cout << "clause: " << res.clause << "\n";
  std::cout << "red: " << (red_ok ? "matches expected" : "MISMATCH") << "\n" << render_pretty(res.term) << "\n";
  if (!red_ok) std::cout << "expected:\n" << render_pretty(s.expected_red) << "\n";
  print_verdict(v);
  return tp_ok && red_ok && v.overall ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Infinitary derivation notations: check, reduce and normalize derivations"};
  app.require_subcommand(1);

  std::string file, trace_out, picks = "0,1,2", name;
  unsigned count = 1, depth = 3, budget = 1;
  std::size_t max_steps = 10000;
  bool exact = false, prep = false, records = false, list = false, do_export = false;

  auto* check = app.add_subcommand("check", "validate a derivation and report its end-sequent, degree and gate");
  check->add_option("file", file, "derivation file ('-' for stdin)")->required();

  auto* step = app.add_subcommand("step", "apply red and print the clause fired");
  step->add_option("file", file)->required();
  step->add_option("--count,-n", count, "number of steps")->capture_default_str();

  auto* norm = app.add_subcommand("normalize", "reduce to cut-free form, writing a trace and auditing it");
  norm->add_option("file", file)->required();
  norm->add_option("--max-steps", max_steps)->capture_default_str();
  norm->add_option("--trace", trace_out, "write the step records (one JSON object per line)");
  norm->add_flag("--prepare", prep, "wrap a cut-bearing derivation in ew first");
  norm->add_flag("--exact", exact, "require identical end-sequents at every step");

  auto* audit = app.add_subcommand("audit", "re-run the audit on a written trace file");
  audit->add_option("trace", file)->required();
  audit->add_flag("--exact", exact);

  auto* exp = app.add_subcommand("expand", "print a finite view of the denoted infinitary derivation");
  exp->add_option("file", file)->required();
  exp->add_option("--depth", depth)->capture_default_str();
  exp->add_option("--omega", picks, "omega indices to show")->capture_default_str();
  exp->add_option("--witness-budget", budget)->capture_default_str();
  exp->add_flag("--json", records, "one JSON record per node");

  auto* corp = app.add_subcommand("corpus", "run a named scenario's golden assertion");
  corp->add_option("name", name);
  corp->add_flag("--list", list);
  corp->add_flag("--export", do_export, "print the input term instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*check) return cmd_check(file);
    if (*step) return cmd_step(file, count);
    if (*norm) return cmd_normalize(file, max_steps, trace_out, exact, prep);
    if (*audit) return cmd_audit(file, exact);
    if (*exp) return cmd_expand(file, depth, picks, budget, records);
    if (*corp) return cmd_corpus(name, list, do_export);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ProofError& e) {
    report_error(e);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
