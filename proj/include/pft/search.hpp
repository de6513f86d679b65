#pragma once

// Bounded proof search over derivation trees.  prove() tries to extend the
// tree so that a goal statement becomes deduced at a given node; refute()
// tries to extend it into a visible contradiction.  Both work by iterative
// deepening over a fixed move set, undo their dead ends, and report the
// surviving extension as script lines.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pft/script.hpp"

namespace pft {

class SearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The surrounding tree fails validation, so no extension can be trusted.
class InvalidContext : public SearchError {
 public:
  using SearchError::SearchError;
};

// No reachable extension can make the goal admissible where it is wanted.
class GoalNeverAdmissible : public SearchError {
 public:
  using SearchError::SearchError;
};

struct SearchOptions {
  int max_depth = 10;        // nodes along one added chain
  int max_new_letters = 3;   // generated letters (_v1, _v2, ...)
  std::set<RuleKind> rules = {RuleKind::ElemAdd,   RuleKind::ElemSubst,
                              RuleKind::Branch,    RuleKind::Join,
                              RuleKind::Explode,   RuleKind::Definition,
                              RuleKind::Deduction};
  std::size_t max_states = 200000;
};

struct SearchResult {
  bool found = false;
  std::vector<std::string> lines;  // script lines for the added nodes
  std::size_t added = 0;
  int depth = 0;  // deepening bound at which the search succeeded
  std::size_t states = 0;
  bool states_exhausted = false;
};

namespace detail {

inline std::optional<int> generated_letter_index(const Letter& l) {
  if (l.size() < 3 || l.size() > 9 || l[0] != '_' || l[1] != 'v') return {};
  int v = 0;
  for (std::size_t i = 2; i < l.size(); ++i) {
    if (l[i] < '0' || l[i] > '9') return {};
    v = v * 10 + (l[i] - '0');
  }
  return v;
}

class Searcher {
 public:
  Searcher(const Node* root, const SearchOptions& opt) : opt_(opt) {
    int seen = 0;
    for (const Node* n : pre_order(root))
      for (const Letter& l : letters_of(n->content))
        if (auto k = generated_letter_index(l)) seen = std::max(seen, *k);
    fresh_base_ = seen + 1;
    fresh_next_ = fresh_base_;
  }

  bool reach_goal(Node* from, const StatementPtr& goal, int budget) {
    return reach(from, chain_end(from), goal, budget);
  }

  bool contradict_from(Node* from, int budget) {
    return contradict(chain_end(from), budget, /*allow_branch=*/true);
  }

  void new_iteration() { visited_.clear(); }

  const std::vector<Node*>& added() const { return log_; }
  std::size_t states() const { return states_; }
  bool states_exhausted() const { return states_hit_; }

 private:
  const SearchOptions& opt_;
  std::vector<Node*> log_;  // attach order, for rollback and reporting
  std::map<std::string, int> visited_;
  int fresh_base_ = 1;
  int fresh_next_ = 1;
  std::size_t states_ = 0;
  bool states_hit_ = false;

  bool enabled(RuleKind k) const { return opt_.rules.count(k) != 0; }

  struct Mark {
    std::size_t log;
    int fresh;
  };
  Mark mark() const { return {log_.size(), fresh_next_}; }

  void rollback(const Mark& m) {
    while (log_.size() > m.log) {
      Node* n = log_.back();
      log_.pop_back();
      Node* p = n->parent;
      if (p->successor.get() == n)
        p->successor.reset();
      else if (p->pair_right.get() == n)
        p->pair_right.reset();
      else
        p->pair_left.reset();
    }
    fresh_next_ = m.fresh;
  }

  Node* track(Node* n) {
    log_.push_back(n);
    return n;
  }

  bool charge_state() {
    if (states_ >= opt_.max_states) {
      states_hit_ = true;
      return false;
    }
    ++states_;
    return true;
  }

  bool fresh_available() const {
    return fresh_next_ - fresh_base_ < opt_.max_new_letters;
  }
  Letter fresh_name() const { return "_v" + std::to_string(fresh_next_); }

  static Node* chain_end(Node* n) {
    while (n->successor) n = n->successor.get();
    return n;
  }

  static bool statement_in_ancestry(const Node* leaf, const StatementPtr& s) {
    for (const Node* a = leaf; a; a = a->parent)
      if (!is_property(a->content) && equal(as_statement(a->content), s))
        return true;
    return false;
  }

  // Deepest ancestor (leaf first) carrying exactly this statement.
  static const Node* witness_for(const Node* leaf, const StatementPtr& s) {
    for (const Node* a = leaf; a; a = a->parent)
      if (!is_property(a->content) && equal(as_statement(a->content), s))
        return a;
    return nullptr;
  }

  static std::vector<const Node*> statement_ancestors(const Node* leaf) {
    std::vector<const Node*> out;
    for (const Node* a = leaf; a; a = a->parent)
      if (!is_property(a->content)) out.push_back(a);
    return out;
  }

  static std::set<Letter> active_definite_letters(const Node* leaf) {
    std::set<Letter> out;
    for (const Node* a = leaf; a; a = a->parent)
      for (const Letter& l : letters_of(a->content))
        if (flavor(l, leaf) == Flavor::Definite) out.insert(l);
    return out;
  }

  std::string state_key(const Node* leaf, char tag,
                        const std::string& extra) const {
    std::vector<std::string> rs;
    for (const Node* a = leaf; a; a = a->parent)
      rs.push_back(render(a->content));
    std::sort(rs.begin(), rs.end());
    std::string key;
    key += tag;
    key += std::to_string(fresh_next_);
    key += '|';
    key += extra;
    for (const std::string& r : rs) {
      key += '\x1f';
      key += r;
    }
    return key;
  }

  // False when this position was already searched with at least this budget.
  bool first_visit(const std::string& key, int budget) {
    auto it = visited_.find(key);
    if (it != visited_.end() && it->second >= budget) return false;
    visited_[key] = budget;
    return true;
  }

  // Does the statement fit one of the letter-introduction variants here?
  bool addable_here(const StatementPtr& s, const Node* leaf) const {
    if (s->kind != StatementKind::Relation) return false;
    auto definite_term = [&](const TermPtr& t) {
      for (const Letter& l : letters_of(t))
        if (flavor(l, leaf) != Flavor::Definite) return false;
      return true;
    };
    auto fresh_against = [&](const TermPtr& fresh_side, const TermPtr& other) {
      return fresh_side->is_letter() &&
             flavor(fresh_side->letter, leaf) == Flavor::Inactive &&
             definite_term(other);
    };
    if (is_reflexive_elementary_equality(s)) {
      Flavor f = flavor(s->lhs->letter, leaf);
      return f == Flavor::Definite || f == Flavor::Inactive;
    }
    return fresh_against(s->lhs, s->rhs) || fresh_against(s->rhs, s->lhs);
  }

  // --- goal-directed extension ---------------------------------------------

  bool reach(Node* anchor, Node* leaf, const StatementPtr& goal, int budget) {
    if (deduces(anchor, goal)) return true;
    if (budget <= 0) return false;
    if (!charge_state()) return false;
    if (!first_visit(state_key(leaf, 'R', render(goal)), budget)) return false;

    bool goal_ok_here = is_admissible(goal, leaf);

    if (enabled(RuleKind::Explode) && goal_ok_here) {
      if (auto pr = is_contradictory(leaf)) {
        track(apply_explode(leaf, pr->first, pr->second, goal));
        return true;
      }
    }

    if (complete_directly(leaf, goal, budget)) return true;

    if (enabled(RuleKind::Explode) && goal_ok_here && budget >= 2) {
      Mark m = mark();
      if (contradict(leaf, budget - 1, /*allow_branch=*/false)) {
        Node* end = chain_end(leaf);
        auto pr = is_contradictory(end);
        track(apply_explode(end, pr->first, pr->second, goal));
        return true;
      }
      rollback(m);
    }

    if (enabled(RuleKind::Branch) && enabled(RuleKind::Join) && budget >= 3 &&
        goal_ok_here && has_structural_dual(goal) && !leaf->pair_left) {
      StatementPtr dual = dual_structural(goal);
      if (is_admissible(dual, leaf)) {
        Mark m = mark();
        auto [ln, rn] = apply_branch(leaf, goal, dual);
        track(ln);
        track(rn);
        if (reach(rn, rn, goal, budget - 2)) {
          track(apply_join(leaf, goal));
          return true;
        }
        rollback(m);
      }
    }
    return false;
  }

  // One-shot completions: a single rule application (or a definition pair)
  // whose result is exactly the goal.  Nodes stay attached on success.
  bool complete_directly(Node* leaf, const StatementPtr& goal, int budget) {
    std::vector<const Node*> anc = statement_ancestors(leaf);

    if (enabled(RuleKind::Deduction)) {
      for (const Node* u : anc) {
        const StatementPtr& s = as_statement(u->content);
        if (s->kind != StatementKind::Quantified ||
            s->quantifier != Quantifier::Universal)
          continue;
        const StatementPtr& h = s->hypothesis;
        const StatementPtr& c = s->conclusion;
        if (is_admissible(h, leaf)) {
          if (!equal(c, goal)) continue;
          if (const Node* w = witness_for(leaf, h)) {
            track(apply_deduction(leaf, u, w));
            return true;
          }
        } else if (auto ph = unique_placeholder(h, leaf)) {
          for (const Letter& let : active_definite_letters(leaf)) {
            if (!equal(substitute_letter(c, *ph, let), goal)) continue;
            if (const Node* w =
                    witness_for(leaf, substitute_letter(h, *ph, let))) {
              track(apply_deduction(leaf, u, w, let));
              return true;
            }
          }
        }
      }
    }

    if (enabled(RuleKind::Definition)) {
      for (const Node* e : anc) {
        const StatementPtr& s = as_statement(e->content);
        if (s->kind != StatementKind::Quantified ||
            s->quantifier != Quantifier::Existential)
          continue;
        const StatementPtr& h = s->hypothesis;
        const StatementPtr& c = s->conclusion;
        if (is_admissible(h, leaf)) {
          if (equal(h, goal)) {
            track(apply_definition(leaf, e, 1));
            return true;
          }
          if (budget >= 2 && equal(c, goal)) {
            Node* n1 = track(apply_definition(leaf, e, 1));
            track(apply_definition(n1, e, 2));
            return true;
          }
        } else if (auto ph = unique_placeholder(h, leaf)) {
          for (const Letter& f : letters_of(goal)) {
            if (flavor(f, leaf) != Flavor::Inactive) continue;
            if (equal(substitute_letter(h, *ph, f), goal)) {
              track(apply_definition(leaf, e, 1, f));
              return true;
            }
            if (budget >= 2 && equal(substitute_letter(c, *ph, f), goal)) {
              Node* n1 = track(apply_definition(leaf, e, 1, f));
              track(apply_definition(n1, e, 2, f));
              return true;
            }
          }
        }
      }
    }

    if (enabled(RuleKind::ElemSubst)) {
      for (const Node* eq : anc) {
        const StatementPtr& es = as_statement(eq->content);
        if (!is_elementary(es) || es->sign != Sign::Eq) continue;
        Letter x = es->lhs->letter, y = es->rhs->letter;
        if (x == y) continue;
        for (int dir = 0; dir < 2; ++dir) {
          const Letter& from = dir == 0 ? x : y;
          const Letter& to = dir == 0 ? y : x;
          for (const Node* src : anc) {
            const StatementPtr& ss = as_statement(src->content);
            if (!contains_letter(ss, from)) continue;
            if (!equal(substitute_letter(ss, from, to), goal)) continue;
            track(apply_elem_subst(leaf, eq, src, from, to));
            return true;
          }
        }
      }
    }

    if (enabled(RuleKind::ElemAdd) && addable_here(goal, leaf) &&
        !statement_in_ancestry(leaf, goal)) {
      track(apply_elem_add(leaf, goal));
      return true;
    }
    return false;
  }

  // --- contradiction search -------------------------------------------------

  bool contradict(Node* leaf, int budget, bool allow_branch) {
    if (is_contradictory(leaf)) return true;
    if (budget <= 0) return false;
    if (!charge_state()) return false;
    if (!first_visit(state_key(leaf, allow_branch ? 'T' : 'C', ""), budget))
      return false;

    auto follow = [&](Node* n) {
      if (is_contradictory(n)) return true;
      return contradict(n, budget - 1, allow_branch);
    };

    std::vector<const Node*> anc = statement_ancestors(leaf);
    std::set<Letter> definite = active_definite_letters(leaf);

    if (enabled(RuleKind::Deduction)) {
      for (const Node* u : anc) {
        const StatementPtr& s = as_statement(u->content);
        if (s->kind != StatementKind::Quantified ||
            s->quantifier != Quantifier::Universal)
          continue;
        const StatementPtr& h = s->hypothesis;
        const StatementPtr& c = s->conclusion;
        if (is_admissible(h, leaf)) {
          const Node* w = witness_for(leaf, h);
          if (!w || statement_in_ancestry(leaf, c)) continue;
          Mark m = mark();
          if (follow(track(apply_deduction(leaf, u, w)))) return true;
          rollback(m);
        } else if (auto ph = unique_placeholder(h, leaf)) {
          for (const Letter& let : definite) {
            const Node* w =
                witness_for(leaf, substitute_letter(h, *ph, let));
            if (!w) continue;
            if (statement_in_ancestry(leaf, substitute_letter(c, *ph, let)))
              continue;
            Mark m = mark();
            if (follow(track(apply_deduction(leaf, u, w, let)))) return true;
            rollback(m);
          }
        }
      }
    }

    if (enabled(RuleKind::Definition)) {
      for (const Node* e : anc) {
        const StatementPtr& s = as_statement(e->content);
        if (s->kind != StatementKind::Quantified ||
            s->quantifier != Quantifier::Existential)
          continue;
        const StatementPtr& h = s->hypothesis;
        const StatementPtr& c = s->conclusion;
        std::optional<Letter> fresh;
        StatementPtr s1, s2;
        if (is_admissible(h, leaf)) {
          s1 = h;
          s2 = c;
        } else if (auto ph = unique_placeholder(h, leaf)) {
          if (!fresh_available()) continue;
          fresh = fresh_name();
          s1 = substitute_letter(h, *ph, *fresh);
          s2 = substitute_letter(c, *ph, *fresh);
        } else {
          continue;
        }
        if (statement_in_ancestry(leaf, s1) && statement_in_ancestry(leaf, s2))
          continue;
        Mark m = mark();
        if (fresh) ++fresh_next_;
        Node* n1 = track(apply_definition(leaf, e, 1, fresh));
        if (is_contradictory(n1)) return true;
        if (budget >= 2) {
          Node* n2 = track(apply_definition(n1, e, 2, fresh));
          if (is_contradictory(n2)) return true;
          if (contradict(n2, budget - 2, allow_branch)) return true;
        }
        rollback(m);
      }
    }

    if (enabled(RuleKind::ElemSubst)) {
      for (const Node* eq : anc) {
        const StatementPtr& es = as_statement(eq->content);
        if (!is_elementary(es) || es->sign != Sign::Eq) continue;
        Letter x = es->lhs->letter, y = es->rhs->letter;
        if (x == y) continue;
        for (int dir = 0; dir < 2; ++dir) {
          const Letter& from = dir == 0 ? x : y;
          const Letter& to = dir == 0 ? y : x;
          for (const Node* src : anc) {
            const StatementPtr& ss = as_statement(src->content);
            if (!contains_letter(ss, from)) continue;
            StatementPtr out = substitute_letter(ss, from, to);
            if (equal(out, ss) || statement_in_ancestry(leaf, out)) continue;
            Mark m = mark();
            if (follow(track(apply_elem_subst(leaf, eq, src, from, to))))
              return true;
            rollback(m);
          }
        }
      }
    }

    // A generated letter measured against letters that figure in quantified
    // ancestors; the only way a statement about an unnamed object enters.
    if (enabled(RuleKind::ElemAdd) && fresh_available()) {
      std::set<Letter> targets;
      for (const Node* a : anc) {
        const StatementPtr& s = as_statement(a->content);
        if (s->kind != StatementKind::Quantified) continue;
        for (const Letter& l : letters_of(s))
          if (definite.count(l)) targets.insert(l);
      }
      TermPtr f = make_letter(fresh_name());
      for (const Letter& d : targets) {
        TermPtr dt = make_letter(d);
        StatementPtr forms[4] = {make_relation(f, Sign::Neq, dt),
                                 make_relation(dt, Sign::Neq, f),
                                 make_relation(f, Sign::Eq, dt),
                                 make_relation(dt, Sign::Eq, f)};
        for (const StatementPtr& s : forms) {
          Mark m = mark();
          ++fresh_next_;
          if (follow(track(apply_elem_add(leaf, s)))) return true;
          rollback(m);
        }
      }
    }

    if (enabled(RuleKind::ElemAdd)) {
      for (const Letter& d : definite) {
        StatementPtr s =
            make_relation(make_letter(d), Sign::Eq, make_letter(d));
        if (statement_in_ancestry(leaf, s)) continue;
        Mark m = mark();
        if (follow(track(apply_elem_add(leaf, s)))) return true;
        rollback(m);
      }
    }

    if (allow_branch && enabled(RuleKind::Branch) && !leaf->pair_left &&
        budget >= 2) {
      std::set<std::string> tried;
      for (const Node* a : anc) {
        for (const auto& [path, part] : constituents(as_statement(a->content))) {
          if (part->kind != StatementKind::Relation) continue;
          if (!is_admissible(part, leaf)) continue;
          StatementPtr l = part, r = dual_structural(part);
          if (render(r) < render(l)) std::swap(l, r);
          if (!tried.insert(render(l)).second) continue;
          if (statement_in_ancestry(leaf, l) || statement_in_ancestry(leaf, r))
            continue;
          Mark m = mark();
          auto [ln, rn] = apply_branch(leaf, l, r);
          track(ln);
          track(rn);
          if (follow(ln) && follow(rn)) return true;
          rollback(m);
        }
      }
    }
    return false;
  }
};

// Labels every unlabeled node that reporting needs, then renders the added
// nodes as script lines in attach order.
inline std::vector<std::string> extension_lines(const Node* root,
                                                const std::vector<Node*>& added) {
  std::set<std::string> used;
  for (const Node* n : pre_order(root))
    if (!n->label.empty()) used.insert(n->label);
  int k = 1;
  auto next_label = [&] {
    std::string name;
    do {
      name = "g" + std::to_string(k++);
    } while (used.count(name));
    used.insert(name);
    return name;
  };
  for (Node* n : added) {
    if (n->parent && n->parent->label.empty()) n->parent->label = next_label();
    if (n->label.empty()) n->label = next_label();
  }
  std::vector<std::string> lines;
  lines.reserve(added.size());
  for (const Node* n : added) lines.push_back(script_line(n));
  return lines;
}

inline void check_search_options(const SearchOptions& opt) {
  if (opt.max_depth < 1 || opt.max_new_letters < 0 || opt.max_states < 1)
    throw std::invalid_argument("search bounds must be positive");
}

inline void check_search_context(Node* from) {
  if (!from) throw InvalidContext("no start node");
  if (!check_tree(root_of(from)).valid())
    throw InvalidContext("the surrounding tree does not check");
}

}  // namespace detail

// Extends the tree below `from` until the goal is deduced there, or gives up.
// On success the added nodes stay attached and come back as script lines.
inline SearchResult prove(Node* from, const StatementPtr& goal,
                          const SearchOptions& opt = {}) {
  detail::check_search_options(opt);
  detail::check_search_context(from);
  const Node* root = root_of(from);

  SearchResult res;
  if (deduces(from, goal)) {
    res.found = true;
    return res;
  }

  Node* leaf = from;
  while (leaf->successor) leaf = leaf->successor.get();
  FlavorOverrides best;
  for (const Letter& l : letters_of(goal)) {
    Flavor f = flavor(l, leaf);
    if (f != Flavor::Definite && f != Flavor::Adjective)
      best[l] = Flavor::Definite;
  }
  if (!is_admissible(goal, leaf, best))
    throw GoalNeverAdmissible("the goal cannot become admissible here");

  detail::Searcher sr(root, opt);
  for (int d = 1; d <= opt.max_depth; ++d) {
    sr.new_iteration();
    if (sr.reach_goal(from, goal, d)) {
      res.found = true;
      res.depth = d;
      break;
    }
    if (sr.states_exhausted()) break;
  }
  res.states = sr.states();
  res.states_exhausted = sr.states_exhausted();
  if (res.found) {
    res.lines = detail::extension_lines(root, sr.added());
    res.added = sr.added().size();
    if (!check_tree(root).valid())
      throw std::logic_error("search produced an invalid extension");
  }
  return res;
}

// Extends the tree below `from` until some added leaf carries statements dual
// to one another.  Same reporting contract as prove().
inline SearchResult refute(Node* from, const SearchOptions& opt = {}) {
  detail::check_search_options(opt);
  detail::check_search_context(from);
  const Node* root = root_of(from);

  SearchResult res;
  for (const Node* n : successor_chain(from))
    if (is_contradictory(n)) {
      res.found = true;
      return res;
    }

  detail::Searcher sr(root, opt);
  for (int d = 1; d <= opt.max_depth; ++d) {
    sr.new_iteration();
    if (sr.contradict_from(from, d)) {
      res.found = true;
      res.depth = d;
      break;
    }
    if (sr.states_exhausted()) break;
  }
  res.states = sr.states();
  res.states_exhausted = sr.states_exhausted();
  if (res.found) {
    res.lines = detail::extension_lines(root, sr.added());
    res.added = sr.added().size();
    if (!check_tree(root).valid())
      throw std::logic_error("search produced an invalid extension");
  }
  return res;
}

}  // namespace pft
