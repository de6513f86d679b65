#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pft/syntax.hpp"

namespace pft {

struct Justification;  // defined by the rule layer

// A node owns its children. A node has at most one successor and at most one
// couple (pair_left + pair_right); a couple holds two statements, never
// properties.
struct Node {
  Content content;
  std::string label;  // script id when the node came from a script
  Node* parent = nullptr;
  std::shared_ptr<Node> successor;
  std::shared_ptr<Node> pair_left;
  std::shared_ptr<Node> pair_right;
  std::shared_ptr<const Justification> justification;
};

class StructureError : public std::runtime_error {
 public:
  explicit StructureError(const std::string& msg) : std::runtime_error(msg) {}
};

inline std::shared_ptr<Node> make_root(Content c) {
  auto n = std::make_shared<Node>();
  n->content = std::move(c);
  return n;
}

namespace detail {

inline std::shared_ptr<Node> make_child(Node* parent, Content c) {
  auto n = std::make_shared<Node>();
  n->content = std::move(c);
  n->parent = parent;
  return n;
}

}  // namespace detail

inline Node* attach_successor(Node* parent, Content c) {
  if (parent->successor)
    throw StructureError("node already has a successor");
  parent->successor = detail::make_child(parent, std::move(c));
  return parent->successor.get();
}

inline Node* attach_pair_left(Node* parent, Content c) {
  if (parent->pair_left) throw StructureError("node already has a couple");
  if (is_property(c))
    throw StructureError("couple members must be statements");
  parent->pair_left = detail::make_child(parent, std::move(c));
  return parent->pair_left.get();
}

inline Node* attach_pair_right(Node* parent, Content c) {
  if (!parent->pair_left)
    throw StructureError("right couple member requires a left one first");
  if (parent->pair_right)
    throw StructureError("node already has a complete couple");
  if (is_property(c))
    throw StructureError("couple members must be statements");
  parent->pair_right = detail::make_child(parent, std::move(c));
  return parent->pair_right.get();
}

inline bool is_root(const Node* n) { return n->parent == nullptr; }

inline bool is_pair_child(const Node* n) {
  return n->parent != nullptr && (n->parent->pair_left.get() == n ||
                                  n->parent->pair_right.get() == n);
}

inline const Node* root_of(const Node* n) {
  while (n->parent) n = n->parent;
  return n;
}

// Root first, n last. A node is its own ancestor.
inline std::vector<const Node*> ancestors(const Node* n) {
  std::vector<const Node*> out;
  for (const Node* a = n; a; a = a->parent) out.push_back(a);
  std::reverse(out.begin(), out.end());
  return out;
}

inline bool is_strict_ancestor(const Node* a, const Node* n) {
  for (const Node* p = n->parent; p; p = p->parent)
    if (p == a) return true;
  return false;
}

// n and the nodes reachable from n by following successors only.
inline std::vector<const Node*> successor_chain(const Node* n) {
  std::vector<const Node*> out;
  for (const Node* c = n; c; c = c->successor.get()) out.push_back(c);
  return out;
}

// Node, left couple subtree, right couple subtree, successor subtree.
inline void pre_order_visit(const Node* n,
                            const std::function<void(const Node*)>& f) {
  f(n);
  if (n->pair_left) pre_order_visit(n->pair_left.get(), f);
  if (n->pair_right) pre_order_visit(n->pair_right.get(), f);
  if (n->successor) pre_order_visit(n->successor.get(), f);
}

inline std::vector<const Node*> pre_order(const Node* root) {
  std::vector<const Node*> out;
  pre_order_visit(root, [&](const Node* n) { out.push_back(n); });
  return out;
}

inline const Node* find_incomplete_pair(const Node* root) {
  for (const Node* n : pre_order(root))
    if (n->pair_left && !n->pair_right) return n;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Letter flavors at a node, computed over the node's ancestry (inclusive).

enum class Flavor { Inactive, Adjective, Definite, Indefinite };

inline std::string flavor_name(Flavor f) {
  switch (f) {
    case Flavor::Inactive: return "inactive";
    case Flavor::Adjective: return "adjective";
    case Flavor::Definite: return "definite";
    case Flavor::Indefinite: return "indefinite";
  }
  return "?";
}

// adjective: the letter heads a property in the ancestry.
// definite: the letter occurs in an unquantified ancestor statement
//           (property contents never confer definiteness).
// indefinite: active but neither of the above.
inline Flavor flavor(const Letter& l, const Node* n) {
  bool active = false, adjective = false, definite = false;
  for (const Node* a = n; a; a = a->parent) {
    const Content& c = a->content;
    if (is_property(c)) {
      const Property& p = as_property(c);
      if (count_letter(p, l) > 0) active = true;
      if (p.abbreviation->head == l) adjective = true;
    } else {
      const StatementPtr& s = as_statement(c);
      if (count_letter(s, l) > 0) {
        active = true;
        if (s->kind != StatementKind::Quantified) definite = true;
      }
    }
  }
  if (!active) return Flavor::Inactive;
  if (adjective) return Flavor::Adjective;
  if (definite) return Flavor::Definite;
  return Flavor::Indefinite;
}

inline bool is_active(const Letter& l, const Node* n) {
  return flavor(l, n) != Flavor::Inactive;
}

// Admissibility checks sometimes force flavors (a placeholder letter treated
// as definite while checking the parts of a quantified statement).
using FlavorOverrides = std::map<Letter, Flavor>;

inline Flavor flavor_with(const Letter& l, const Node* n,
                          const FlavorOverrides& ov) {
  auto it = ov.find(l);
  if (it != ov.end()) return it->second;
  return flavor(l, n);
}

// A letter that may serve as the bound placeholder of a quantified statement
// or property: not yet pinned to a meaning.
inline bool placeholder_eligible(Flavor f) {
  return f == Flavor::Indefinite || f == Flavor::Inactive;
}

// ---------------------------------------------------------------------------
// Admissibility of content at a node (the would-be parent of the addition).

inline bool is_admissible(const StatementPtr& s, const Node* at,
                          const FlavorOverrides& ov = {});

inline bool is_admissible(const Property& p, const Node* at,
                          const FlavorOverrides& ov = {});

namespace detail {

inline bool quantified_admissible(const StatementPtr& s, const Node* at,
                                  const FlavorOverrides& ov) {
  // case 1: both parts admissible as they stand
  if (is_admissible(s->hypothesis, at, ov) &&
      is_admissible(s->conclusion, at, ov))
    return true;
  // case 2: an unquantified hypothesis introduces exactly one placeholder
  // letter, and both parts are admissible once that letter counts as definite
  if (s->hypothesis->kind == StatementKind::Quantified) return false;
  std::set<Letter> hyp_letters = letters_of(s->hypothesis);
  Letter placeholder;
  int eligible = 0;
  for (const Letter& l : hyp_letters) {
    if (placeholder_eligible(flavor_with(l, at, ov))) {
      placeholder = l;
      ++eligible;
    }
  }
  if (eligible != 1) return false;
  FlavorOverrides forced = ov;
  forced[placeholder] = Flavor::Definite;
  return is_admissible(s->hypothesis, at, forced) &&
         is_admissible(s->conclusion, at, forced);
}

}  // namespace detail

inline bool is_admissible(const StatementPtr& s, const Node* at,
                          const FlavorOverrides& ov) {
  switch (s->kind) {
    case StatementKind::Relation: {
      for (const Letter& l : letters_of(s))
        if (flavor_with(l, at, ov) != Flavor::Definite) return false;
      return true;
    }
    case StatementKind::Abbreviation: {
      if (flavor_with(s->head, at, ov) != Flavor::Adjective) return false;
      std::set<Letter> arg_letters;
      for (const auto& a : s->args) collect_letters(a, arg_letters);
      for (const Letter& l : arg_letters)
        if (flavor_with(l, at, ov) != Flavor::Definite) return false;
      return true;
    }
    case StatementKind::Quantified:
      return detail::quantified_admissible(s, at, ov);
  }
  return false;
}

inline bool is_admissible(const Property& p, const Node* at,
                          const FlavorOverrides& ov) {
  const Letter& head = p.abbreviation->head;
  if (count_letter(p, head) != 1) return false;
  Flavor head_flavor = flavor_with(head, at, ov);

  if (head_flavor == Flavor::Inactive) {
    // fresh property: bare, distinct placeholder arguments, each used in the
    // defining statement, which must be admissible with them made definite
    std::set<Letter> seen;
    FlavorOverrides forced = ov;
    for (const auto& a : p.abbreviation->args) {
      if (!a->is_letter()) return false;
      const Letter& l = a->letter;
      if (!placeholder_eligible(flavor_with(l, at, ov))) return false;
      if (!seen.insert(l).second) return false;
      if (count_letter(p.defining, l) == 0) return false;
      forced[l] = Flavor::Definite;
    }
    return is_admissible(p.defining, at, forced);
  }

  if (head_flavor != Flavor::Adjective) return false;
  // modified copy: some ancestor property with the same head, one indefinite
  // bare-letter argument replaced everywhere by a term over definite letters
  for (const Node* a = at; a; a = a->parent) {
    if (!is_property(a->content)) continue;
    const Property& base = as_property(a->content);
    if (base.abbreviation->head != head) continue;
    if (base.abbreviation->args.size() != p.abbreviation->args.size())
      continue;
    for (size_t i = 0; i < base.abbreviation->args.size(); ++i) {
      const TermPtr& pat = base.abbreviation->args[i];
      if (!pat->is_letter()) continue;
      const Letter& xi = pat->letter;
      if (flavor_with(xi, at, ov) != Flavor::Indefinite) continue;
      const TermPtr& candidate = p.abbreviation->args[i];
      bool definite_term = true;
      for (const Letter& l : letters_of(candidate))
        if (flavor_with(l, at, ov) != Flavor::Definite) {
          definite_term = false;
          break;
        }
      if (!definite_term) continue;
      try {
        if (equal(substitute_letter_with_term(base.abbreviation, xi, candidate),
                  p.abbreviation) &&
            equal(substitute_letter_with_term(base.defining, xi, candidate),
                  p.defining))
          return true;
      } catch (const SubstitutionError&) {
        // the placeholder heads an abbreviation inside the base property;
        // such a candidate cannot produce this copy
      }
    }
  }
  return false;
}

inline bool is_admissible(const Content& c, const Node* at,
                          const FlavorOverrides& ov = {}) {
  return is_property(c) ? is_admissible(as_property(c), at, ov)
                        : is_admissible(as_statement(c), at, ov);
}

// ---------------------------------------------------------------------------
// Contextual duality.

namespace detail {

// Instantiate a property's defining statement at the arguments of a use.
// Only properties whose abbreviation arguments are distinct bare letters can
// be unfolded this way.
inline std::optional<StatementPtr> unfold_abbreviation(
    const StatementPtr& use, const Property& prop) {
  const StatementPtr& pat = prop.abbreviation;
  if (pat->head != use->head || pat->args.size() != use->args.size())
    return std::nullopt;
  std::map<Letter, TermPtr> binding;
  for (size_t i = 0; i < pat->args.size(); ++i) {
    if (!pat->args[i]->is_letter()) return std::nullopt;
    if (!binding.emplace(pat->args[i]->letter, use->args[i]).second)
      return std::nullopt;
  }
  // simultaneous substitution via fresh staging names, so one placeholder's
  // replacement never feeds another's
  StatementPtr s = prop.defining;
  std::vector<std::pair<Letter, TermPtr>> staged;
  int k = 0;
  for (const auto& [from, to] : binding) {
    Letter stage = "__u" + std::to_string(k++);
    s = substitute_letter(s, from, stage);
    staged.emplace_back(stage, to);
  }
  try {
    for (const auto& [stage, to] : staged)
      s = substitute_letter_with_term(s, stage, to);
  } catch (const SubstitutionError&) {
    return std::nullopt;
  }
  return s;
}

inline bool are_dual_impl(const StatementPtr& a, const StatementPtr& b,
                          const Node* ctx,
                          std::set<std::pair<std::string, std::string>>& seen) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case StatementKind::Relation:
      return a->sign == flip(b->sign) && equal(a->lhs, b->lhs) &&
             equal(a->rhs, b->rhs);
    case StatementKind::Quantified:
      return a->quantifier == opposite(b->quantifier) &&
             equal(a->hypothesis, b->hypothesis) &&
             are_dual_impl(a->conclusion, b->conclusion, ctx, seen);
    case StatementKind::Abbreviation: {
      auto key = std::make_pair(render(a), render(b));
      if (!seen.insert(key).second) return false;
      for (const Node* pa = ctx; pa; pa = pa->parent) {
        if (!is_property(pa->content)) continue;
        auto ua = unfold_abbreviation(a, as_property(pa->content));
        if (!ua) continue;
        for (const Node* pb = ctx; pb; pb = pb->parent) {
          if (!is_property(pb->content)) continue;
          auto ub = unfold_abbreviation(b, as_property(pb->content));
          if (!ub) continue;
          if (are_dual_impl(*ua, *ub, ctx, seen)) return true;
        }
      }
      return false;
    }
  }
  return false;
}

}  // namespace detail

// Dual statements assert opposites: same terms, flipped sign, behind the same
// hypotheses under opposite quantifiers. Abbreviations are dual when they
// abbreviate dual statements via properties visible from ctx.
inline bool are_dual(const StatementPtr& a, const StatementPtr& b,
                     const Node* ctx) {
  std::set<std::pair<std::string, std::string>> seen;
  return detail::are_dual_impl(a, b, ctx, seen);
}

// First pair of dual statements in the ancestry of n, scanning shallow-first.
inline std::optional<std::pair<const Node*, const Node*>> is_contradictory(
    const Node* n) {
  std::vector<const Node*> chain = ancestors(n);
  for (size_t i = 0; i < chain.size(); ++i) {
    if (is_property(chain[i]->content)) continue;
    for (size_t j = i + 1; j < chain.size(); ++j) {
      if (is_property(chain[j]->content)) continue;
      if (are_dual(as_statement(chain[i]->content),
                   as_statement(chain[j]->content), n))
        return std::make_pair(chain[i], chain[j]);
    }
  }
  return std::nullopt;
}

}  // namespace pft
