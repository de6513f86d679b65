#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pft/rules.hpp"

namespace pft {

// Script format, one node per line:
//
//   root n1: a = a
//   assume a2 of n1: b != a
//   succ n3 of a2: b = b ; rule=elem_add
//   pairL n4 of n3: a != b ; rule=branch
//   pairR n5 of n3: a = b ; rule=branch
//
// A root is declared by `root` (reflexive start) or by a parentless `assume`.
// Successor, pairL, and pairR lines carry the justification after ';'.
// Lines may appear in any order that keeps parents before children; the
// serializer always emits the canonical order (couple first, successor last).

class ScriptError : public std::runtime_error {
 public:
  ScriptError(size_t line, const std::string& msg)
      : std::runtime_error(
            line ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}

  size_t line() const { return line_; }

 private:
  size_t line_;
};

struct ScriptDocument {
  std::string name;
  std::shared_ptr<Node> root;
  std::map<std::string, Node*> by_label;
};

namespace detail {

inline std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline bool valid_id(const std::string& s) {
  if (s.empty()) return false;
  for (unsigned char c : s)
    if (!(std::isalnum(c) || c == '_' || c >= 0x80)) return false;
  return true;
}

inline bool reserved_id(const std::string& s) {
  return s == "of" || s == "root" || s == "assume" || s == "succ" ||
         s == "pairL" || s == "pairR" || s == "rule";
}

// Gathered key=value pairs of one rule section, consumed by key.
class ParamReader {
 public:
  ParamReader(size_t lineno, const std::map<std::string, Node*>& labels,
              const std::vector<std::pair<std::string, std::string>>& kv)
      : lineno_(lineno), labels_(labels) {
    for (const auto& [k, v] : kv)
      if (!kv_.emplace(k, v).second)
        throw ScriptError(lineno_, "duplicate key '" + k + "'");
  }

  const Node* node_ref(const char* key, bool required) {
    auto v = take(key, required);
    if (!v) return nullptr;
    auto it = labels_.find(*v);
    if (it == labels_.end())
      throw ScriptError(lineno_, "unknown node '" + *v + "'");
    return it->second;
  }

  std::optional<Letter> letter(const char* key, bool required) {
    auto v = take(key, required);
    if (v && !valid_id(*v))
      throw ScriptError(lineno_, "'" + *v + "' is not a letter");
    return v;
  }

  std::optional<int> integer(const char* key, bool required) {
    auto v = take(key, required);
    if (!v) return std::nullopt;
    for (unsigned char c : *v)
      if (!std::isdigit(c))
        throw ScriptError(lineno_, "'" + *v + "' is not a number");
    if (v->empty() || v->size() > 6)
      throw ScriptError(lineno_, "'" + *v + "' is not a number");
    return std::stoi(*v);
  }

  std::optional<TermPtr> term(const char* key, bool required) {
    auto v = take(key, required);
    if (!v) return std::nullopt;
    try {
      return parse_term(*v);
    } catch (const ParseError& e) {
      throw ScriptError(lineno_, std::string(key) + ": " + e.what());
    }
  }

  void finish() {
    if (!kv_.empty())
      throw ScriptError(lineno_, "unknown key '" + kv_.begin()->first + "'");
  }

 private:
  std::optional<std::string> take(const char* key, bool required) {
    auto it = kv_.find(key);
    if (it == kv_.end()) {
      if (required)
        throw ScriptError(lineno_, std::string("missing key '") + key + "'");
      return std::nullopt;
    }
    std::string v = it->second;
    kv_.erase(it);
    return v;
  }

  size_t lineno_;
  const std::map<std::string, Node*>& labels_;
  std::map<std::string, std::string> kv_;
};

inline Justification read_params(RuleKind kind, ParamReader& r) {
  Justification j;
  j.kind = kind;
  switch (kind) {
    case RuleKind::RootAxiom:
    case RuleKind::Assume:
    case RuleKind::Branch:
      break;
    case RuleKind::ElemAdd:
      j.term = r.term("term", false);
      break;
    case RuleKind::ElemSubst:
      j.eq = r.node_ref("eq", true);
      j.src = r.node_ref("src", true);
      j.from = r.letter("from", true);
      j.to = r.letter("to", true);
      break;
    case RuleKind::FnSubst:
      j.eq = r.node_ref("eq", true);
      j.src = r.node_ref("src", true);
      j.letter = r.letter("letter", true);
      j.term = r.term("term", true);
      break;
    case RuleKind::Join:
      j.left = r.node_ref("left", true);
      j.right = r.node_ref("right", true);
      break;
    case RuleKind::Explode:
      j.dual1 = r.node_ref("d1", true);
      j.dual2 = r.node_ref("d2", true);
      break;
    case RuleKind::Definition:
      j.of = r.node_ref("of", true);
      j.step = r.integer("step", true);
      j.fresh = r.letter("new", false);
      break;
    case RuleKind::Deduction:
      j.of = r.node_ref("of", true);
      j.witness = r.node_ref("witness", true);
      j.let = r.letter("let", false);
      break;
    case RuleKind::PropertyIntro:
      j.of = r.node_ref("of", false);
      j.letter = r.letter("letter", false);
      j.term = r.term("term", false);
      break;
    case RuleKind::AbbrevSubst:
      j.stmt = r.node_ref("stmt", true);
      j.prop = r.node_ref("prop", true);
      if (auto at = r.integer("at", true)) j.at = static_cast<size_t>(*at);
      break;
    case RuleKind::Choice: {
      j.of = r.node_ref("of", true);
      j.step = r.integer("step", true);
      j.fresh = r.letter("new", true);
      const char* keys[] = {"d1", "d2", "d3", "d4", "d5"};
      for (const char* k : keys) j.ds.push_back(*r.letter(k, true));
      break;
    }
    case RuleKind::FnIdentity:
      j.of = r.node_ref("of", true);
      break;
    case RuleKind::Restrict:
      j.prop = r.node_ref("prop", true);
      j.g = r.letter("g", true);
      j.fresh = r.letter("new", true);
      j.step = r.integer("step", true);
      break;
  }
  r.finish();
  return j;
}

inline const std::string& label_of(const Node* n) {
  if (!n || n->label.empty())
    throw std::invalid_argument("justification references an unlabeled node");
  return n->label;
}

template <typename T>
inline const T& present(const std::optional<T>& v, const char* what) {
  if (!v)
    throw std::invalid_argument(std::string("justification misses ") + what);
  return *v;
}

inline void append_params(std::ostream& o, const Justification& j) {
  auto ref = [&](const char* key, const Node* n) {
    o << ' ' << key << '=' << label_of(n);
  };
  switch (j.kind) {
    case RuleKind::RootAxiom:
    case RuleKind::Assume:
    case RuleKind::Branch:
      break;
    case RuleKind::ElemAdd:
      if (j.term) o << " term=" << render_compact(*j.term);
      break;
    case RuleKind::ElemSubst:
      ref("eq", j.eq);
      ref("src", j.src);
      o << " from=" << present(j.from, "from") << " to=" << present(j.to, "to");
      break;
    case RuleKind::FnSubst:
      ref("eq", j.eq);
      ref("src", j.src);
      o << " letter=" << present(j.letter, "letter")
        << " term=" << render_compact(present(j.term, "term"));
      break;
    case RuleKind::Join:
      ref("left", j.left);
      ref("right", j.right);
      break;
    case RuleKind::Explode:
      ref("d1", j.dual1);
      ref("d2", j.dual2);
      break;
    case RuleKind::Definition:
      ref("of", j.of);
      o << " step=" << present(j.step, "step");
      if (j.fresh) o << " new=" << *j.fresh;
      break;
    case RuleKind::Deduction:
      ref("of", j.of);
      ref("witness", j.witness);
      if (j.let) o << " let=" << *j.let;
      break;
    case RuleKind::PropertyIntro:
      if (j.of) ref("of", j.of);
      if (j.letter) o << " letter=" << *j.letter;
      if (j.term) o << " term=" << render_compact(*j.term);
      break;
    case RuleKind::AbbrevSubst:
      ref("stmt", j.stmt);
      ref("prop", j.prop);
      o << " at=" << present(j.at, "at");
      break;
    case RuleKind::Choice: {
      ref("of", j.of);
      o << " step=" << present(j.step, "step")
        << " new=" << present(j.fresh, "new");
      if (j.ds.size() != 5)
        throw std::invalid_argument("choice justification needs five letters");
      for (size_t i = 0; i < 5; ++i) o << " d" << i + 1 << '=' << j.ds[i];
      break;
    }
    case RuleKind::FnIdentity:
      ref("of", j.of);
      break;
    case RuleKind::Restrict:
      ref("prop", j.prop);
      o << " g=" << present(j.g, "g") << " new=" << present(j.fresh, "new")
        << " step=" << present(j.step, "step");
      break;
  }
}

}  // namespace detail

inline ScriptDocument parse_script(std::string_view text,
                                   std::string name = "") {
  ScriptDocument doc;
  doc.name = std::move(name);
  struct Pending {
    size_t lineno;
    Node* node;
    std::string rule;
    std::vector<std::pair<std::string, std::string>> kv;
  };
  std::vector<Pending> pending;

  size_t lineno = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                      : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (detail::trim(line).empty()) continue;

    size_t colon = line.find(':');
    if (colon == std::string_view::npos)
      throw ScriptError(lineno, "missing ':' after the line header");
    std::istringstream hs{std::string(line.substr(0, colon))};
    std::string kind, id, ofkw, parent;
    hs >> kind >> id;
    if (kind != "root" && kind != "assume" && kind != "succ" &&
        kind != "pairL" && kind != "pairR")
      throw ScriptError(lineno, "unknown line kind '" + kind + "'");
    if (id.empty()) throw ScriptError(lineno, "missing node id");
    if (!detail::valid_id(id) || detail::reserved_id(id))
      throw ScriptError(lineno, "'" + id + "' is not a usable id");
    if (doc.by_label.count(id))
      throw ScriptError(lineno, "duplicate id '" + id + "'");
    bool has_parent = false;
    if (hs >> ofkw) {
      if (ofkw != "of")
        throw ScriptError(lineno, "expected 'of', found '" + ofkw + "'");
      if (!(hs >> parent)) throw ScriptError(lineno, "missing parent id");
      std::string extra;
      if (hs >> extra)
        throw ScriptError(lineno, "unexpected '" + extra + "' in the header");
      has_parent = true;
    }

    std::string rest{line.substr(colon + 1)};
    size_t semi = rest.find(';');
    std::string content_text =
        detail::trim(semi == std::string::npos ? rest : rest.substr(0, semi));
    std::optional<std::string> rule_text;
    if (semi != std::string::npos)
      rule_text = detail::trim(rest.substr(semi + 1));

    Content content = [&] {
      try {
        return parse_content(content_text);
      } catch (const ParseError& e) {
        throw ScriptError(lineno, e.what());
      }
    }();

    Node* node = nullptr;
    if (kind == "root" || (kind == "assume" && !has_parent)) {
      if (kind == "root" && has_parent)
        throw ScriptError(lineno, "a root line takes no parent");
      if (doc.root)
        throw ScriptError(lineno, "the root is already defined");
      if (rule_text)
        throw ScriptError(lineno, "this line takes no rule section");
      doc.root = make_root(std::move(content));
      node = doc.root.get();
      Justification j;
      j.kind = kind == "root" ? RuleKind::RootAxiom : RuleKind::Assume;
      set_justification(node, std::move(j));
    } else {
      if (!has_parent)
        throw ScriptError(lineno,
                          "'" + kind + "' line requires 'of <parent>'");
      auto it = doc.by_label.find(parent);
      if (it == doc.by_label.end())
        throw ScriptError(lineno, "unknown parent '" + parent + "'");
      try {
        if (kind == "pairL")
          node = attach_pair_left(it->second, std::move(content));
        else if (kind == "pairR")
          node = attach_pair_right(it->second, std::move(content));
        else
          node = attach_successor(it->second, std::move(content));
      } catch (const StructureError& e) {
        throw ScriptError(lineno, e.what());
      }
      if (kind == "assume") {
        if (rule_text)
          throw ScriptError(lineno, "this line takes no rule section");
        Justification j;
        j.kind = RuleKind::Assume;
        set_justification(node, std::move(j));
      } else {
        if (!rule_text || rule_text->empty())
          throw ScriptError(lineno, "missing rule section");
        std::istringstream rs(*rule_text);
        std::string tok;
        rs >> tok;
        if (tok.rfind("rule=", 0) != 0)
          throw ScriptError(lineno, "rule section must start with rule=");
        Pending p{lineno, node, tok.substr(5), {}};
        while (rs >> tok) {
          size_t eq = tok.find('=');
          if (eq == 0 || eq == std::string::npos || eq + 1 == tok.size())
            throw ScriptError(lineno, "malformed parameter '" + tok + "'");
          p.kv.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
        }
        pending.push_back(std::move(p));
      }
    }
    node->label = id;
    doc.by_label[id] = node;
  }

  if (!doc.root) throw ScriptError(0, "the script defines no root");

  for (auto& p : pending) {
    auto kind = rule_from_name(p.rule);
    if (!kind)
      throw ScriptError(p.lineno, "unknown rule '" + p.rule + "'");
    detail::ParamReader r(p.lineno, doc.by_label, p.kv);
    set_justification(p.node, detail::read_params(*kind, r));
  }
  return doc;
}

namespace detail {

// One canonical script line for the node, without the trailing newline.
inline std::string script_line(const Node* n) {
  if (n->label.empty())
    throw std::invalid_argument("cannot serialize an unlabeled node");
  const Justification* j = n->justification.get();
  if (!j) throw std::invalid_argument("cannot serialize an unjustified node");
  std::string kw;
  if (is_root(n)) {
    if (j->kind == RuleKind::RootAxiom)
      kw = "root";
    else if (j->kind == RuleKind::Assume)
      kw = "assume";
    else
      throw std::invalid_argument("root must start or assume");
  } else if (n == n->parent->pair_left.get()) {
    kw = "pairL";
  } else if (n == n->parent->pair_right.get()) {
    kw = "pairR";
  } else {
    kw = j->kind == RuleKind::Assume ? "assume" : "succ";
  }
  std::ostringstream out;
  out << kw << ' ' << n->label;
  if (!is_root(n)) out << " of " << n->parent->label;
  out << ": " << render(n->content);
  if (kw != "root" && kw != "assume") {
    out << " ; rule=" << rule_name(j->kind);
    append_params(out, *j);
  }
  return out.str();
}

}  // namespace detail

inline std::string serialize_tree(const Node* root) {
  std::ostringstream out;
  std::set<std::string> seen;
  for (const Node* n : pre_order(root)) {
    if (!n->label.empty() && !seen.insert(n->label).second)
      throw std::invalid_argument("duplicate label '" + n->label + "'");
    out << detail::script_line(n) << '\n';
  }
  return out.str();
}

inline std::string serialize_script(const ScriptDocument& doc) {
  return serialize_tree(doc.root.get());
}

inline std::string format_script(std::string_view text,
                                 const std::string& name = "") {
  return serialize_script(parse_script(text, name));
}

// ---------------------------------------------------------------------------
// Naming conventions: adjectives capitalized, definite letters latin
// lowercase, indefinite letters greek. Purely advisory.

namespace detail {

inline bool search_generated_name(const Letter& l) {
  if (l.size() < 3 || l[0] != '_' || l[1] != 'v') return false;
  for (size_t i = 2; i < l.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(l[i]))) return false;
  return true;
}

inline std::optional<Flavor> expected_flavor_from_name(const Letter& l) {
  static const std::set<std::string> greek = {
      "alpha", "beta",    "gamma", "delta", "epsilon", "zeta",
      "eta",   "theta",   "iota",  "kappa", "lambda",  "mu",
      "nu",    "xi",      "omicron", "pi",  "rho",     "sigma",
      "tau",   "upsilon", "phi",   "chi",   "psi",     "omega"};
  if (l.empty() || search_generated_name(l)) return std::nullopt;
  if (greek.count(l)) return Flavor::Indefinite;
  unsigned char c0 = l[0];
  if (c0 >= 0x80) {
    if (l.size() >= 2 && (c0 >> 5) == 0x6) {
      unsigned cp = ((c0 & 0x1Fu) << 6) | (static_cast<unsigned char>(l[1]) & 0x3Fu);
      if (cp >= 0x370 && cp <= 0x3FF) return Flavor::Indefinite;
    }
    return std::nullopt;
  }
  if (std::isupper(c0)) return Flavor::Adjective;
  if (std::islower(c0)) return Flavor::Definite;
  return std::nullopt;
}

}  // namespace detail

inline std::vector<Lint> naming_lints(const Node* root) {
  std::vector<Lint> out;
  std::set<Letter> seen;
  for (const Node* n : pre_order(root)) {
    for (const Letter& l : letters_of(n->content)) {
      if (!seen.insert(l).second) continue;
      auto want = detail::expected_flavor_from_name(l);
      if (!want) continue;
      Flavor have = flavor(l, n);
      if (have != *want)
        out.push_back({n, "naming",
                       "letter '" + l + "' is spelled " +
                           flavor_name(*want) + " but is " +
                           flavor_name(have) + " at its first use"});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Views.

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

inline std::string render_dot(const Node* root) {
  std::ostringstream o;
  o << "digraph derivation {\n"
    << "  rankdir=TB;\n"
    << "  node [shape=box fontname=\"monospace\"];\n";
  for (const Node* n : pre_order(root)) {
    o << "  \"" << detail::dot_escape(n->label) << "\" [label=\""
      << detail::dot_escape(n->label + ": " + render(n->content)) << "\"";
    if (is_contradictory(n)) o << " color=red fontcolor=red";
    o << "];\n";
  }
  for (const Node* n : pre_order(root)) {
    auto edge = [&](const Node* to, const char* attrs) {
      o << "  \"" << detail::dot_escape(n->label) << "\" -> \""
        << detail::dot_escape(to->label) << "\"" << attrs << ";\n";
    };
    if (n->pair_left) edge(n->pair_left.get(), " [style=dashed label=\"L\"]");
    if (n->pair_right)
      edge(n->pair_right.get(), " [style=dashed label=\"R\"]");
    if (n->successor) edge(n->successor.get(), "");
  }
  o << "}\n";
  return o.str();
}

namespace detail {

inline void render_text_node(const Node* n, int depth, std::ostringstream& o) {
  for (int i = 0; i < depth; ++i) o << "  ";
  if (is_pair_child(n))
    o << (n == n->parent->pair_left.get() ? "L " : "R ");
  o << (n->label.empty() ? "?" : n->label) << ": " << render(n->content);
  if (n->justification) {
    o << "  [" << rule_name(n->justification->kind);
    append_params(o, *n->justification);
    o << "]";
  }
  o << '\n';
  if (n->pair_left) render_text_node(n->pair_left.get(), depth + 1, o);
  if (n->pair_right) render_text_node(n->pair_right.get(), depth + 1, o);
  if (n->successor) render_text_node(n->successor.get(), depth, o);
}

}  // namespace detail

inline std::string render_text(const Node* root) {
  std::ostringstream o;
  detail::render_text_node(root, 0, o);
  return o.str();
}

}  // namespace pft
