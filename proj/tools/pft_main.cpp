// pft: check, render, prove, and format derivation scripts.
//
// Exit status: 0 success, 1 violations or goal not reached, 2 parse or
// usage errors.  Machine-readable output goes to stdout alone; diagnostics
// stay on stderr.

#include <cstddef>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pft/pft.hpp"

namespace {

using nlohmann::ordered_json;

int fail_usage(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return 2;
}

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string label_or(const pft::Node* n) {
  return n->label.empty() ? std::string("?") : n->label;
}

// Parses the script or reports why not; nullopt means exit 2 was earned.
std::optional<pft::ScriptDocument> load(const std::string& path) {
  auto text = slurp(path);
  if (!text) {
    std::cerr << "error: cannot read '" << path << "'\n";
    return std::nullopt;
  }
  try {
    return pft::parse_script(*text, path);
  } catch (const pft::ScriptError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

struct CheckFlags {
  std::string path;
  std::string report = "text";
  std::string choice_step5 = "diagram";
  bool strict_naming = false;
};

int run_check(const CheckFlags& f) {
  auto doc = load(f.path);
  if (!doc) return 2;
  pft::CheckOptions co;
  co.choice_step5_prose = f.choice_step5 == "prose";
  pft::Report rep = pft::check_tree(doc->root.get(), co);
  std::vector<pft::Lint> lints = rep.lints;
  std::vector<pft::Lint> naming = pft::naming_lints(doc->root.get());
  lints.insert(lints.end(), naming.begin(), naming.end());
  bool ok = rep.valid() && !(f.strict_naming && !naming.empty());

  if (f.report == "machine") {
    ordered_json j;
    j["file"] = f.path;
    j["nodes"] = pft::pre_order(doc->root.get()).size();
    j["valid"] = ok;
    j["violations"] = ordered_json::array();
    for (const auto& v : rep.violations)
      j["violations"].push_back({{"node", label_or(v.node)},
                                 {"clause", v.clause},
                                 {"message", v.message}});
    j["lints"] = ordered_json::array();
    for (const auto& l : lints)
      j["lints"].push_back({{"node", label_or(l.node)},
                            {"clause", l.clause},
                            {"message", l.message}});
    j["assumptions"] = ordered_json::array();
    for (const pft::Node* a : rep.assumptions)
      j["assumptions"].push_back(label_or(a));
    j["contradictions"] = ordered_json::array();
    for (const auto& c : rep.contradictions)
      j["contradictions"].push_back({{"leaf", label_or(c.leaf)},
                                     {"first", label_or(c.first)},
                                     {"second", label_or(c.second)}});
    std::cout << j.dump(2) << "\n";
    return ok ? 0 : 1;
  }

  std::set<const pft::Node*> bad;
  for (const auto& v : rep.violations) bad.insert(v.node);
  std::map<const pft::Node*, const pft::ContradictionEntry*> marks;
  for (const auto& c : rep.contradictions) marks[c.leaf] = &c;
  for (const pft::Node* n : pft::pre_order(doc->root.get())) {
    std::cout << label_or(n) << (bad.count(n) ? " bad: " : " ok: ")
              << pft::render(n->content);
    if (auto it = marks.find(n); it != marks.end())
      std::cout << "  [contradictory: " << label_or(it->second->first)
                << " vs " << label_or(it->second->second) << "]";
    std::cout << "\n";
  }
  std::cout << "assumptions:";
  if (rep.assumptions.empty()) std::cout << " (none)";
  for (const pft::Node* a : rep.assumptions) std::cout << ' ' << label_or(a);
  std::cout << "\n";
  for (const auto& v : rep.violations)
    std::cout << "violation " << label_or(v.node) << ' ' << v.clause << ": "
              << v.message << "\n";
  for (const auto& l : lints)
    std::cout << "lint " << label_or(l.node) << ' ' << l.clause << ": "
              << l.message << "\n";
  std::cout << "verdict: " << (ok ? "valid" : "invalid") << "\n";
  return ok ? 0 : 1;
}

struct RenderFlags {
  std::string path;
  std::string format = "dot";
};

int run_render(const RenderFlags& f) {
  auto doc = load(f.path);
  if (!doc) return 2;
  if (f.format == "dot")
    std::cout << pft::render_dot(doc->root.get());
  else
    std::cout << pft::render_text(doc->root.get());
  return 0;
}

struct ProveFlags {
  std::string path;
  std::string from;
  std::string goal;
  int max_depth = 10;
  int max_new_letters = 3;
  std::size_t max_states = 200000;
  std::string rules;
};

int run_prove(const ProveFlags& f) {
  auto doc = load(f.path);
  if (!doc) return 2;
  auto it = doc->by_label.find(f.from);
  if (it == doc->by_label.end())
    return fail_usage("unknown node '" + f.from + "'");
  pft::StatementPtr goal;
  try {
    goal = pft::parse_statement(f.goal);
  } catch (const pft::ParseError& e) {
    std::cerr << "goal: " << e.what() << "\n";
    return 2;
  }
  pft::SearchOptions opt;
  opt.max_depth = f.max_depth;
  opt.max_new_letters = f.max_new_letters;
  opt.max_states = f.max_states;
  if (!f.rules.empty()) {
    opt.rules.clear();
    std::stringstream ss(f.rules);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto k = pft::rule_from_name(item);
      if (!k) return fail_usage("unknown rule '" + item + "'");
      opt.rules.insert(*k);
    }
  }
  try {
    pft::SearchResult r = pft::prove(it->second, goal, opt);
    if (r.found) {
      for (const std::string& l : r.lines) std::cout << l << "\n";
      return 0;
    }
    std::cerr << "goal not reached: " << r.states << " states searched, ";
    if (r.states_exhausted)
      std::cerr << "state budget spent\n";
    else
      std::cerr << "depth limit " << opt.max_depth << " reached\n";
    return 1;
  } catch (const pft::GoalNeverAdmissible& e) {
    std::cerr << "goal not reachable: " << e.what() << "\n";
    return 1;
  } catch (const pft::InvalidContext& e) {
    std::cerr << "invalid context: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    return fail_usage(e.what());
  }
}

struct FmtFlags {
  std::string path;
  bool check_only = false;
};

int run_fmt(const FmtFlags& f) {
  auto text = slurp(f.path);
  if (!text) return fail_usage("cannot read '" + f.path + "'");
  std::string formatted;
  try {
    formatted = pft::format_script(*text, f.path);
  } catch (const pft::ScriptError& e) {
    std::cerr << f.path << ": " << e.what() << "\n";
    return 2;
  }
  if (formatted == *text) return 0;
  if (f.check_only) {
    std::cerr << "would rewrite " << f.path << "\n";
    return 1;
  }
  std::ofstream out(f.path, std::ios::binary | std::ios::trunc);
  if (!out) return fail_usage("cannot write '" + f.path + "'");
  out << formatted;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"check, render, prove, and format derivation scripts"};
  app.require_subcommand(1);

  CheckFlags cf;
  auto* c = app.add_subcommand("check", "validate a script");
  c->add_option("path", cf.path, "script to validate")->required();
  c->add_option("--report", cf.report, "output style")
      ->check(CLI::IsMember({"text", "machine"}));
  c->add_flag("--strict-naming", cf.strict_naming,
              "treat naming lints as failures");
  c->add_option("--choice-step5", cf.choice_step5,
                "which recorded shape of the fifth selector step to accept")
      ->check(CLI::IsMember({"prose", "diagram"}));

  RenderFlags rf;
  auto* r = app.add_subcommand("render", "draw the tree");
  r->add_option("path", rf.path, "script to draw")->required();
  r->add_option("--format", rf.format, "output format")
      ->check(CLI::IsMember({"dot", "text"}));

  ProveFlags pf;
  auto* p = app.add_subcommand("prove", "search for an extension deducing a goal");
  p->add_option("path", pf.path, "script to extend")->required();
  p->add_option("--from", pf.from, "node the goal should be deduced at")
      ->required();
  p->add_option("--goal", pf.goal, "statement to reach")->required();
  p->add_option("--max-depth", pf.max_depth, "added nodes along one chain");
  p->add_option("--max-new-letters", pf.max_new_letters,
                "generated letters allowed");
  p->add_option("--max-states", pf.max_states, "search states allowed");
  p->add_option("--rules", pf.rules, "comma-separated rule allowlist");

  FmtFlags ff;
  auto* m = app.add_subcommand("fmt", "rewrite a script in canonical form");
  m->add_option("path", ff.path, "script to rewrite")->required();
  m->add_flag("--check", ff.check_only, "report instead of rewriting");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (c->parsed()) return run_check(cf);
  if (r->parsed()) return run_render(rf);
  if (p->parsed()) return run_prove(pf);
  return run_fmt(ff);
}
