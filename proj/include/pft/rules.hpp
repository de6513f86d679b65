#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pft/tree.hpp"

namespace pft {

enum class RuleKind {
  RootAxiom,
  Assume,
  ElemAdd,
  ElemSubst,
  FnSubst,
  Branch,
  Join,
  Explode,
  Definition,
  Deduction,
  PropertyIntro,
  AbbrevSubst,
  Choice,
  FnIdentity,
  Restrict,
};

inline std::string rule_name(RuleKind k) {
  switch (k) {
    case RuleKind::RootAxiom: return "root_axiom";
    case RuleKind::Assume: return "assume";
    case RuleKind::ElemAdd: return "elem_add";
    case RuleKind::ElemSubst: return "elem_subst";
    case RuleKind::FnSubst: return "fn_subst";
    case RuleKind::Branch: return "branch";
    case RuleKind::Join: return "join";
    case RuleKind::Explode: return "explode";
    case RuleKind::Definition: return "definition";
    case RuleKind::Deduction: return "deduction";
    case RuleKind::PropertyIntro: return "property";
    case RuleKind::AbbrevSubst: return "abbrev_subst";
    case RuleKind::Choice: return "choice";
    case RuleKind::FnIdentity: return "fn_identity";
    case RuleKind::Restrict: return "restrict";
  }
  return "?";
}

inline std::optional<RuleKind> rule_from_name(const std::string& s) {
  static const std::pair<const char*, RuleKind> table[] = {
      {"root_axiom", RuleKind::RootAxiom},
      {"assume", RuleKind::Assume},
      {"elem_add", RuleKind::ElemAdd},
      {"elem_subst", RuleKind::ElemSubst},
      {"fn_subst", RuleKind::FnSubst},
      {"branch", RuleKind::Branch},
      {"join", RuleKind::Join},
      {"explode", RuleKind::Explode},
      {"definition", RuleKind::Definition},
      {"deduction", RuleKind::Deduction},
      {"property", RuleKind::PropertyIntro},
      {"abbrev_subst", RuleKind::AbbrevSubst},
      {"choice", RuleKind::Choice},
      {"fn_identity", RuleKind::FnIdentity},
      {"restrict", RuleKind::Restrict},
  };
  for (const auto& [name, kind] : table)
    if (s == name) return kind;
  return std::nullopt;
}

// One record covers every rule; unused fields stay empty. Node references
// point at strict ancestors, except Join's left/right which name the parent's
// couple members.
struct Justification {
  RuleKind kind = RuleKind::RootAxiom;
  const Node* of = nullptr;       // definition/deduction/choice/fn_identity,
                                  // property origin for modified copies
  const Node* eq = nullptr;       // elem_subst/fn_subst equality
  const Node* src = nullptr;      // elem_subst/fn_subst source statement
  const Node* witness = nullptr;  // deduction
  const Node* left = nullptr;     // join
  const Node* right = nullptr;    // join
  const Node* dual1 = nullptr;    // explode
  const Node* dual2 = nullptr;    // explode
  const Node* prop = nullptr;     // abbrev_subst/restrict property
  const Node* stmt = nullptr;     // abbrev_subst host statement
  std::optional<int> step;        // definition 1-2, choice 1-6, restrict 1-4
  std::optional<size_t> at;       // abbrev_subst occurrence index
  std::optional<Letter> from;     // elem_subst
  std::optional<Letter> to;       // elem_subst
  std::optional<Letter> letter;   // fn_subst, property modified copy
  std::optional<Letter> let;      // deduction instantiation
  std::optional<Letter> fresh;    // definition/choice/restrict new letter
  std::optional<Letter> g;        // restrict bounding letter
  std::optional<TermPtr> term;    // elem_add pin, fn_subst, property copy
  std::vector<Letter> ds;         // choice d1..d5
};

inline void set_justification(Node* n, Justification j) {
  n->justification = std::make_shared<const Justification>(std::move(j));
}

// ---------------------------------------------------------------------------
// Rule shapes shared by the validator and the constructors.

namespace detail {

struct ChoiceShape {
  Letter xi, eta;
  StatementPtr sub_conclusion;
};

// < xi = xi > [ eta = eta ] C with distinct xi, eta
inline std::optional<ChoiceShape> choice_shape(const StatementPtr& u) {
  if (u->kind != StatementKind::Quantified ||
      u->quantifier != Quantifier::Universal)
    return std::nullopt;
  if (!is_reflexive_elementary_equality(u->hypothesis)) return std::nullopt;
  const StatementPtr& inner = u->conclusion;
  if (inner->kind != StatementKind::Quantified ||
      inner->quantifier != Quantifier::Existential)
    return std::nullopt;
  if (!is_reflexive_elementary_equality(inner->hypothesis))
    return std::nullopt;
  ChoiceShape sh;
  sh.xi = u->hypothesis->lhs->letter;
  sh.eta = inner->hypothesis->lhs->letter;
  if (sh.xi == sh.eta) return std::nullopt;
  sh.sub_conclusion = inner->conclusion;
  return sh;
}

inline StatementPtr choice_step_content(int step, const ChoiceShape& sh,
                                        const Letter& f,
                                        const std::vector<Letter>& ds,
                                        bool prose_step5) {
  auto L = [](const Letter& l) { return make_letter(l); };
  auto app = [&](const Letter& fn, TermPtr x) {
    return make_application(L(fn), std::move(x));
  };
  auto rel = [](TermPtr a, Sign s, TermPtr b) {
    return make_relation(std::move(a), s, std::move(b));
  };
  auto uni = [](StatementPtr h, StatementPtr c) {
    return make_quantified(Quantifier::Universal, std::move(h), std::move(c));
  };
  auto exi = [](StatementPtr h, StatementPtr c) {
    return make_quantified(Quantifier::Existential, std::move(h),
                           std::move(c));
  };
  const Letter& xi = sh.xi;
  const Letter& eta = sh.eta;
  switch (step) {
    case 1:
      return rel(app(f, L(ds[0])), Sign::Neq, L(f));
    case 2:
      return uni(rel(app(ds[1], L(xi)), Sign::Neq, L(ds[1])),
                 rel(app(f, L(xi)), Sign::Neq, L(f)));
    case 3:
      return uni(rel(app(ds[2], L(xi)), Sign::Neq, L(ds[2])),
                 uni(rel(app(xi, L(eta)), Sign::Neq, L(xi)),
                     rel(app(f, L(eta)), Sign::Neq, L(f))));
    case 4:
      return uni(rel(app(f, L(xi)), Sign::Neq, L(f)),
                 rel(app(f, app(f, L(xi))), Sign::Neq, L(f)));
    case 5:
      return uni(
          rel(app(f, L(xi)), Sign::Eq, L(f)),
          exi(rel(app(xi, L(eta)), Sign::Neq, L(xi)),
              uni(rel(app(ds[3], L(eta)), Sign::Neq, L(ds[3])),
                  rel(app(ds[4], app(xi, L(eta))),
                      prose_step5 ? Sign::Neq : Sign::Eq, L(ds[4])))));
    case 6:
      return uni(rel(app(f, L(xi)), Sign::Neq, L(f)),
                 substitute_letter_with_term(sh.sub_conclusion, eta,
                                             app(f, L(xi))));
  }
  throw std::invalid_argument("choice step out of range");
}

struct RestrictShape {
  Letter xi;
  StatementPtr abbrev;  // the property's abbreviation, head + one letter
};

inline std::optional<RestrictShape> restrict_shape(const Property& pr) {
  const StatementPtr& a = pr.abbreviation;
  if (a->args.size() != 1 || !a->args[0]->is_letter()) return std::nullopt;
  return RestrictShape{a->args[0]->letter, a};
}

inline StatementPtr restrict_step_content(int step, const RestrictShape& sh,
                                          const Letter& g, const Letter& f) {
  auto L = [](const Letter& l) { return make_letter(l); };
  auto app = [&](const Letter& fn, TermPtr x) {
    return make_application(L(fn), std::move(x));
  };
  auto rel = [](TermPtr a, Sign s, TermPtr b) {
    return make_relation(std::move(a), s, std::move(b));
  };
  auto uni = [](StatementPtr h, StatementPtr c) {
    return make_quantified(Quantifier::Universal, std::move(h), std::move(c));
  };
  const Letter& xi = sh.xi;
  switch (step) {
    case 1:
      return rel(L(f), Sign::Eq, L(f));
    case 2:
      return uni(rel(app(f, L(xi)), Sign::Neq, L(f)),
                 rel(app(f, L(xi)), Sign::Eq, app(g, L(xi))));
    case 3:
      return uni(rel(app(g, L(xi)), Sign::Neq, L(g)),
                 uni(sh.abbrev, rel(app(f, L(xi)), Sign::Neq, L(f))));
    case 4:
      return uni(rel(app(f, L(xi)), Sign::Neq, L(f)),
                 make_quantified(Quantifier::Existential,
                                 rel(app(g, L(xi)), Sign::Neq, L(g)),
                                 sh.abbrev));
  }
  throw std::invalid_argument("restrict step out of range");
}

struct FnIdentityShape {
  Letter p, q, xi;
};

// < p ( xi ) != q ( xi ) > [ p ( xi ) = p ] q ( xi ) = q
inline std::optional<FnIdentityShape> fn_identity_shape(const StatementPtr& s) {
  auto letter_app = [](const TermPtr& t, Letter& fn,
                       Letter& arg) -> bool {
    if (t->is_letter() || !t->function->is_letter() ||
        !t->argument->is_letter())
      return false;
    fn = t->function->letter;
    arg = t->argument->letter;
    return true;
  };
  if (s->kind != StatementKind::Quantified ||
      s->quantifier != Quantifier::Universal)
    return std::nullopt;
  const StatementPtr& h = s->hypothesis;
  if (h->kind != StatementKind::Relation || h->sign != Sign::Neq)
    return std::nullopt;
  FnIdentityShape sh;
  Letter x1, x2;
  if (!letter_app(h->lhs, sh.p, x1) || !letter_app(h->rhs, sh.q, x2))
    return std::nullopt;
  if (x1 != x2) return std::nullopt;
  sh.xi = x1;
  const StatementPtr& c = s->conclusion;
  if (c->kind != StatementKind::Quantified ||
      c->quantifier != Quantifier::Existential)
    return std::nullopt;
  auto check_part = [&](const StatementPtr& part, const Letter& fn) {
    if (part->kind != StatementKind::Relation || part->sign != Sign::Eq)
      return false;
    Letter f2, a2;
    if (!letter_app(part->lhs, f2, a2)) return false;
    return f2 == fn && a2 == sh.xi && part->rhs->is_letter() &&
           part->rhs->letter == fn;
  };
  if (!check_part(c->hypothesis, sh.p) || !check_part(c->conclusion, sh.q))
    return std::nullopt;
  return sh;
}

// The single letter an inadmissible unquantified hypothesis may bind.
inline std::optional<Letter> unique_placeholder(const StatementPtr& hyp,
                                                const Node* at) {
  if (hyp->kind == StatementKind::Quantified) return std::nullopt;
  std::optional<Letter> found;
  for (const Letter& l : letters_of(hyp)) {
    if (placeholder_eligible(flavor(l, at))) {
      if (found) return std::nullopt;
      found = l;
    }
  }
  return found;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Whole-tree checking.

struct Violation {
  const Node* node;
  std::string clause;
  std::string message;
};

struct Lint {
  const Node* node;
  std::string clause;
  std::string message;
};

struct ContradictionEntry {
  const Node* leaf;
  const Node* first;
  const Node* second;
};

struct CheckOptions {
  bool choice_step5_prose = false;
};

struct Report {
  std::vector<Violation> violations;
  std::vector<Lint> lints;
  std::vector<const Node*> assumptions;
  std::vector<ContradictionEntry> contradictions;

  bool valid() const { return violations.empty(); }
};

// Statement reachable from n along successors alone.
inline bool deduces(const Node* n, const StatementPtr& goal) {
  for (const Node* m : successor_chain(n))
    if (!is_property(m->content) && equal(as_statement(m->content), goal))
      return true;
  return false;
}

namespace detail {

class Checker {
 public:
  Checker(const Node* root, const CheckOptions& opt)
      : root_(root), opt_(opt) {}

  Report run() {
    for (const Node* n : pre_order(root_)) check_node(n);
    collect_lints();
    for (const Node* n : pre_order(root_)) {
      if (n->justification && n->justification->kind == RuleKind::Assume)
        report_.assumptions.push_back(n);
      if (!n->successor && !n->pair_left) {
        if (auto hit = is_contradictory(n))
          report_.contradictions.push_back({n, hit->first, hit->second});
      }
    }
    return std::move(report_);
  }

 private:
  const Node* root_;
  CheckOptions opt_;
  Report report_;

  void add(const Node* n, const char* clause, std::string msg) {
    report_.violations.push_back({n, clause, std::move(msg)});
  }

  void lint(const Node* n, const char* clause, std::string msg) {
    report_.lints.push_back({n, clause, std::move(msg)});
  }

  const StatementPtr* stmt_or_violation(const Node* n, const Node* target,
                                        const char* clause,
                                        const char* what) {
    if (is_property(target->content)) {
      add(n, clause, std::string(what) + " must hold a statement");
      return nullptr;
    }
    return &as_statement(target->content);
  }

  bool ref_ok(const Node* n, const Node* ref, const char* clause,
              const char* what) {
    if (!ref) {
      add(n, clause, std::string(what) + " reference missing");
      return false;
    }
    if (!is_strict_ancestor(ref, n)) {
      add(n, clause, std::string(what) + " must reference a strict ancestor");
      return false;
    }
    return true;
  }

  void check_node(const Node* n) {
    if (!n->justification) {
      add(n, "justification.missing", "node carries no justification");
      return;
    }
    const Justification& j = *n->justification;
    bool at_root = is_root(n);
    bool pair_child = is_pair_child(n);

    if (at_root && j.kind != RuleKind::RootAxiom &&
        j.kind != RuleKind::Assume) {
      add(n, "root.justification",
          "root must be a reflexive start or an assumption");
      return;
    }
    if (!at_root && j.kind == RuleKind::RootAxiom) {
      add(n, "root.misplaced", "reflexive start is only allowed at the root");
      return;
    }
    if (pair_child && j.kind != RuleKind::Branch) {
      add(n, "branch.required",
          "couple members must be justified by branching");
      return;
    }
    if (!pair_child && j.kind == RuleKind::Branch) {
      add(n, "branch.misplaced", "branching justifies only couple members");
      return;
    }
    if (n->pair_left && !n->pair_right)
      add(n, "branch.incomplete", "couple has no right member");

    switch (j.kind) {
      case RuleKind::RootAxiom: check_root_axiom(n); break;
      case RuleKind::Assume: check_assume(n); break;
      case RuleKind::ElemAdd: check_elem_add(n, j); break;
      case RuleKind::ElemSubst: check_elem_subst(n, j); break;
      case RuleKind::FnSubst: check_fn_subst(n, j); break;
      case RuleKind::Branch: check_branch(n); break;
      case RuleKind::Join: check_join(n, j); break;
      case RuleKind::Explode: check_explode(n, j); break;
      case RuleKind::Definition: check_definition(n, j); break;
      case RuleKind::Deduction: check_deduction(n, j); break;
      case RuleKind::PropertyIntro: check_property(n, j); break;
      case RuleKind::AbbrevSubst: check_abbrev_subst(n, j); break;
      case RuleKind::Choice: check_choice(n, j); break;
      case RuleKind::FnIdentity: check_fn_identity(n, j); break;
      case RuleKind::Restrict: check_restrict(n, j); break;
    }
  }

  void check_root_axiom(const Node* n) {
    if (is_property(n->content) ||
        !is_reflexive_elementary_equality(as_statement(n->content)))
      add(n, "root.shape", "root statement must be a reflexive equality");
  }

  void check_assume(const Node* n) {
    if (is_root(n)) return;
    const Node* p = n->parent;
    bool in_preamble = p->justification &&
                       p->justification->kind == RuleKind::Assume &&
                       p->successor.get() == n;
    if (!in_preamble)
      add(n, "assume.position",
          "assumptions form an initial run of successors from the root");
  }

  void check_elem_add(const Node* n, const Justification& j) {
    const StatementPtr* sp =
        stmt_or_violation(n, n, "elem_add.shape", "introduced node");
    if (!sp) return;
    const StatementPtr& s = *sp;
    const Node* p = n->parent;

    auto definite_term = [&](const TermPtr& t) {
      for (const Letter& l : letters_of(t))
        if (flavor(l, p) != Flavor::Definite) return false;
      return true;
    };
    // relation one side of which is a new bare letter, the other a term over
    // definite letters
    auto fresh_against_term = [&](const TermPtr& fresh_side,
                                  const TermPtr& term_side) {
      return fresh_side->is_letter() &&
             flavor(fresh_side->letter, p) == Flavor::Inactive &&
             definite_term(term_side);
    };

    if (j.term) {
      bool ok = s->kind == StatementKind::Relation &&
                ((fresh_against_term(s->lhs, s->rhs) && equal(s->rhs, *j.term)) ||
                 (fresh_against_term(s->rhs, s->lhs) && equal(s->lhs, *j.term)));
      if (!ok)
        add(n, "elem_add.term-mismatch",
            "statement does not introduce a new letter against the given term");
      return;
    }

    if (is_reflexive_elementary_equality(s)) {
      Flavor f = flavor(s->lhs->letter, p);
      if (f == Flavor::Definite || f == Flavor::Inactive) return;
      add(n, "elem_add.shape",
          "reflexive introduction needs a definite or new letter");
      return;
    }
    if (s->kind == StatementKind::Relation &&
        (fresh_against_term(s->lhs, s->rhs) ||
         fresh_against_term(s->rhs, s->lhs)))
      return;
    add(n, "elem_add.shape", "no introduction variant matches the statement");
  }

  void check_elem_subst(const Node* n, const Justification& j) {
    bool ok = ref_ok(n, j.eq, "elem_subst.ref", "equality");
    ok &= ref_ok(n, j.src, "elem_subst.ref", "source");
    if (!ok) return;
    if (!j.from || !j.to) {
      add(n, "elem_subst.eq-shape", "substitution letters missing");
      return;
    }
    const StatementPtr* eq =
        stmt_or_violation(n, j.eq, "elem_subst.eq-shape", "equality node");
    if (!eq) return;
    const StatementPtr& e = *eq;
    bool shape = is_elementary(e) && e->sign == Sign::Eq &&
                 *j.from != *j.to &&
                 ((e->lhs->letter == *j.from && e->rhs->letter == *j.to) ||
                  (e->lhs->letter == *j.to && e->rhs->letter == *j.from));
    if (!shape) {
      add(n, "elem_subst.eq-shape",
          "equality node must equate the two exchanged letters");
      return;
    }
    const StatementPtr* src =
        stmt_or_violation(n, j.src, "elem_subst.ref", "source node");
    const StatementPtr* own =
        stmt_or_violation(n, n, "elem_subst.result-mismatch", "result node");
    if (!src || !own) return;
    if (!equal(*own, substitute_letter(*src, *j.from, *j.to)))
      add(n, "elem_subst.result-mismatch",
          "statement is not the source with the letters exchanged");
  }

  void check_fn_subst(const Node* n, const Justification& j) {
    bool ok = ref_ok(n, j.eq, "fn_subst.ref", "equality");
    ok &= ref_ok(n, j.src, "fn_subst.ref", "source");
    if (!ok) return;
    if (!j.letter || !j.term) {
      add(n, "fn_subst.eq-shape", "substitution letter or term missing");
      return;
    }
    const StatementPtr* eq =
        stmt_or_violation(n, j.eq, "fn_subst.eq-shape", "equality node");
    if (!eq) return;
    const StatementPtr& e = *eq;
    auto matches = [&](const TermPtr& a, const TermPtr& b) {
      return a->is_letter() && a->letter == *j.letter && equal(b, *j.term);
    };
    if (e->kind != StatementKind::Relation || e->sign != Sign::Eq ||
        !(matches(e->lhs, e->rhs) || matches(e->rhs, e->lhs))) {
      add(n, "fn_subst.eq-shape",
          "equality node must equate the letter with the term");
      return;
    }
    const Node* p = n->parent;
    if (flavor(*j.letter, p) != Flavor::Definite)
      add(n, "fn_subst.letter-flavor", "substituted letter must be definite");
    const StatementPtr* own =
        stmt_or_violation(n, n, "fn_subst.result-mismatch", "result node");
    const StatementPtr* src =
        stmt_or_violation(n, j.src, "fn_subst.ref", "source node");
    if (!own || !src) return;
    if (!is_admissible(*own, p))
      add(n, "fn_subst.inadmissible", "statement is not admissible here");
    try {
      if (!equal(substitute_letter_with_term(*own, *j.letter, *j.term), *src))
        add(n, "fn_subst.result-mismatch",
            "replacing the letter by the term does not give the source");
    } catch (const SubstitutionError&) {
      add(n, "fn_subst.result-mismatch",
          "the letter heads an abbreviation, so the term cannot replace it");
    }
  }

  void check_branch(const Node* n) {
    const Node* p = n->parent;
    const StatementPtr& s = as_statement(n->content);
    if (!is_admissible(s, p))
      add(n, "branch.inadmissible", "couple member is not admissible here");
    if (n == p->pair_left.get()) {
      if (p->pair_right) {
        if (!are_dual(s, as_statement(p->pair_right->content), p))
          add(n, "branch.not-dual", "couple members are not dual");
      } else {
        add(n, "branch.incomplete", "couple has no right member");
      }
    }
  }

  void check_join(const Node* n, const Justification& j) {
    const Node* p = n->parent;
    if (!p->pair_left || !p->pair_right) {
      add(n, "join.couple", "join requires a completed couple on the parent");
      return;
    }
    if (j.left != p->pair_left.get() || j.right != p->pair_right.get()) {
      add(n, "join.children-mismatch",
          "join must name the parent's couple members");
      return;
    }
    const StatementPtr* own =
        stmt_or_violation(n, n, "join.inadmissible", "joined node");
    if (!own) return;
    if (!is_admissible(*own, p))
      add(n, "join.inadmissible", "joined statement is not admissible here");
    for (const Node* side : {j.left, j.right}) {
      bool found = false;
      for (const Node* m : successor_chain(side))
        if (!is_property(m->content) &&
            equal(as_statement(m->content), *own)) {
          found = true;
          break;
        }
      if (!found)
        add(n, "join.not-on-branch",
            std::string("joined statement does not appear under the ") +
                (side == j.left ? "left" : "right") + " couple member");
    }
  }

  void check_explode(const Node* n, const Justification& j) {
    bool ok = ref_ok(n, j.dual1, "explode.ref", "first dual");
    ok &= ref_ok(n, j.dual2, "explode.ref", "second dual");
    if (!ok) return;
    const StatementPtr* s1 =
        stmt_or_violation(n, j.dual1, "explode.ref", "first dual node");
    const StatementPtr* s2 =
        stmt_or_violation(n, j.dual2, "explode.ref", "second dual node");
    if (!s1 || !s2) return;
    const Node* p = n->parent;
    if (!are_dual(*s1, *s2, p))
      add(n, "explode.not-dual", "referenced statements are not dual");
    const StatementPtr* own =
        stmt_or_violation(n, n, "explode.inadmissible", "added node");
    if (!own) return;
    if (!is_admissible(*own, p))
      add(n, "explode.inadmissible", "statement is not admissible here");
  }

  void check_definition(const Node* n, const Justification& j) {
    if (!ref_ok(n, j.of, "definition.ref", "origin")) return;
    const StatementPtr* of =
        stmt_or_violation(n, j.of, "definition.of-shape", "origin node");
    if (!of) return;
    const StatementPtr& e = *of;
    if (e->kind != StatementKind::Quantified ||
        e->quantifier != Quantifier::Existential) {
      add(n, "definition.of-shape", "origin must be existential");
      return;
    }
    if (!j.step || (*j.step != 1 && *j.step != 2)) {
      add(n, "definition.step", "definition proceeds in steps 1 and 2");
      return;
    }
    const Node* p1 = n->parent;
    if (*j.step == 2) {
      const Node* pr = n->parent;
      const Justification* pj = pr->justification.get();
      bool chained = pj && pj->kind == RuleKind::Definition && pj->step &&
                     *pj->step == 1 && pj->of == j.of && pj->fresh == j.fresh;
      if (!chained) {
        add(n, "definition.step-order",
            "second step must directly follow a first step with the same "
            "parameters");
        return;
      }
      p1 = pr->parent;
    }
    const StatementPtr& h = e->hypothesis;
    const StatementPtr& c = e->conclusion;
    StatementPtr expected;
    if (is_admissible(h, p1)) {
      if (j.fresh) {
        add(n, "definition.params",
            "no letter is introduced when the hypothesis is admissible");
        return;
      }
      expected = *j.step == 1 ? h : c;
    } else {
      auto ph = unique_placeholder(h, p1);
      if (!ph) {
        add(n, "definition.case",
            "inadmissible hypothesis must bind exactly one placeholder "
            "letter");
        return;
      }
      if (!j.fresh) {
        add(n, "definition.params", "introduced letter missing");
        return;
      }
      if (flavor(*j.fresh, p1) != Flavor::Inactive) {
        add(n, "definition.params", "introduced letter must be new");
        return;
      }
      expected = substitute_letter(*j.step == 1 ? h : c, *ph, *j.fresh);
    }
    const StatementPtr* own =
        stmt_or_violation(n, n, "definition.result-mismatch", "step node");
    if (!own) return;
    if (!equal(*own, expected))
      add(n, "definition.result-mismatch",
          "statement is not the expected step of the origin");
  }

  void check_deduction(const Node* n, const Justification& j) {
    bool ok = ref_ok(n, j.of, "deduction.ref", "origin");
    ok &= ref_ok(n, j.witness, "deduction.ref", "witness");
    if (!ok) return;
    const StatementPtr* of =
        stmt_or_violation(n, j.of, "deduction.of-shape", "origin node");
    if (!of) return;
    const StatementPtr& u = *of;
    if (u->kind != StatementKind::Quantified ||
        u->quantifier != Quantifier::Universal) {
      add(n, "deduction.of-shape", "origin must be universal");
      return;
    }
    const StatementPtr* w =
        stmt_or_violation(n, j.witness, "deduction.ref", "witness node");
    if (!w) return;
    const Node* p = n->parent;
    const StatementPtr& h = u->hypothesis;
    const StatementPtr& c = u->conclusion;
    StatementPtr expected_witness, expected;
    if (is_admissible(h, p)) {
      if (j.let) {
        add(n, "deduction.params",
            "no letter is instantiated when the hypothesis is admissible");
        return;
      }
      expected_witness = h;
      expected = c;
    } else {
      auto ph = unique_placeholder(h, p);
      if (!ph) {
        add(n, "deduction.case",
            "inadmissible hypothesis must bind exactly one placeholder "
            "letter");
        return;
      }
      if (!j.let) {
        add(n, "deduction.params", "instantiating letter missing");
        return;
      }
      if (flavor(*j.let, p) != Flavor::Definite) {
        add(n, "deduction.params", "instantiating letter must be definite");
        return;
      }
      expected_witness = substitute_letter(h, *ph, *j.let);
      expected = substitute_letter(c, *ph, *j.let);
    }
    if (!equal(*w, expected_witness))
      add(n, "deduction.witness-mismatch",
          "witness does not match the instantiated hypothesis");
    const StatementPtr* own =
        stmt_or_violation(n, n, "deduction.result-mismatch", "deduced node");
    if (!own) return;
    if (!equal(*own, expected))
      add(n, "deduction.result-mismatch",
          "statement does not match the instantiated conclusion");
  }

  void check_property(const Node* n, const Justification& j) {
    if (!is_property(n->content)) {
      add(n, "property.content", "node must hold a property");
      return;
    }
    const Property& p = as_property(n->content);
    const Node* parent = n->parent;
    if (!is_admissible(p, parent))
      add(n, "property.inadmissible", "property is not admissible here");
    Flavor hf = flavor(p.abbreviation->head, parent);
    if (hf == Flavor::Adjective) {
      if (!j.of || !j.letter || !j.term) {
        add(n, "property.params",
            "modified copy requires origin, letter, and term");
        return;
      }
      if (!ref_ok(n, j.of, "property.params", "origin")) return;
      if (!is_property(j.of->content)) {
        add(n, "property.params", "origin must hold a property");
        return;
      }
      const Property& base = as_property(j.of->content);
      if (flavor(*j.letter, parent) != Flavor::Indefinite) {
        add(n, "property.params", "replaced letter must be indefinite");
        return;
      }
      for (const Letter& l : letters_of(*j.term))
        if (flavor(l, parent) != Flavor::Definite) {
          add(n, "property.params",
              "replacement term must use definite letters");
          return;
        }
      try {
        bool reproduces =
            equal(substitute_letter_with_term(base.abbreviation, *j.letter,
                                              *j.term),
                  p.abbreviation) &&
            equal(substitute_letter_with_term(base.defining, *j.letter,
                                              *j.term),
                  p.defining);
        if (!reproduces)
          add(n, "property.params",
              "parameters do not reproduce the property from its origin");
      } catch (const SubstitutionError&) {
        add(n, "property.params",
            "parameters do not reproduce the property from its origin");
      }
    } else {
      if (j.of || j.letter || j.term)
        add(n, "property.params", "fresh property takes no parameters");
    }
  }

  void check_abbrev_subst(const Node* n, const Justification& j) {
    bool ok = ref_ok(n, j.stmt, "abbrev_subst.ref", "host");
    ok &= ref_ok(n, j.prop, "abbrev_subst.ref", "property");
    if (!ok) return;
    const StatementPtr* host =
        stmt_or_violation(n, j.stmt, "abbrev_subst.content", "host node");
    if (!host) return;
    if (!is_property(j.prop->content)) {
      add(n, "abbrev_subst.content", "property node must hold a property");
      return;
    }
    const Property& pr = as_property(j.prop->content);
    auto occs = find_constituent_occurrences(*host, pr.defining);
    if (!j.at || *j.at >= occs.size()) {
      add(n, "abbrev_subst.occurrence",
          "occurrence index does not select a constituent equal to the "
          "defining statement");
      return;
    }
    const StatementPtr* own = stmt_or_violation(
        n, n, "abbrev_subst.result-mismatch", "abbreviated node");
    if (!own) return;
    StatementPtr expected =
        replace_constituent(*host, occs[*j.at], pr.abbreviation);
    if (!equal(*own, expected))
      add(n, "abbrev_subst.result-mismatch",
          "statement is not the host with the occurrence abbreviated");
  }

  void check_choice(const Node* n, const Justification& j) {
    if (!ref_ok(n, j.of, "choice.ref", "origin")) return;
    const StatementPtr* of =
        stmt_or_violation(n, j.of, "choice.of-shape", "origin node");
    if (!of) return;
    auto shape = detail::choice_shape(*of);
    if (!shape) {
      add(n, "choice.of-shape",
          "origin must be universal over an existential with reflexive "
          "hypotheses on two distinct letters");
      return;
    }
    if (!j.step || *j.step < 1 || *j.step > 6) {
      add(n, "choice.step", "choice proceeds in steps 1 through 6");
      return;
    }
    if (!j.fresh || j.ds.size() != 5) {
      add(n, "choice.params",
          "choice requires a new letter and five definite letters");
      return;
    }
    const Node* p1 = n->parent;
    if (*j.step > 1) {
      const Justification* pj = n->parent->justification.get();
      bool chained = pj && pj->kind == RuleKind::Choice && pj->step &&
                     *pj->step == *j.step - 1 && pj->of == j.of &&
                     pj->fresh == j.fresh && pj->ds == j.ds;
      if (!chained) {
        add(n, "choice.step-order",
            "step must directly follow the previous step with the same "
            "parameters");
        return;
      }
      for (int i = 1; i < *j.step && p1; ++i) p1 = p1->parent;
      if (!p1) return;
    }
    if (flavor(shape->xi, p1) != Flavor::Indefinite ||
        flavor(shape->eta, p1) != Flavor::Indefinite)
      add(n, "choice.of-shape", "origin letters must be indefinite");
    if (flavor(*j.fresh, p1) != Flavor::Inactive)
      add(n, "choice.params", "chosen function letter must be new");
    for (const Letter& d : j.ds)
      if (flavor(d, p1) != Flavor::Definite) {
        add(n, "choice.params", "auxiliary letters must be definite");
        break;
      }
    const StatementPtr* own =
        stmt_or_violation(n, n, "choice.result-mismatch", "step node");
    if (!own) return;
    try {
      StatementPtr expected = detail::choice_step_content(
          *j.step, *shape, *j.fresh, j.ds, opt_.choice_step5_prose);
      if (!equal(*own, expected))
        add(n, "choice.result-mismatch",
            "statement is not the expected step for the origin");
    } catch (const SubstitutionError&) {
      add(n, "choice.result-mismatch",
          "the origin conclusion cannot take the chosen function");
    }
  }

  void check_fn_identity(const Node* n, const Justification& j) {
    if (!ref_ok(n, j.of, "fn_identity.ref", "origin")) return;
    const StatementPtr* of =
        stmt_or_violation(n, j.of, "fn_identity.of-shape", "origin node");
    if (!of) return;
    auto shape = detail::fn_identity_shape(*of);
    if (!shape) {
      add(n, "fn_identity.of-shape",
          "origin must relate two applications of definite letters to one "
          "indefinite letter");
      return;
    }
    const Node* p = n->parent;
    if (flavor(shape->p, p) != Flavor::Definite ||
        flavor(shape->q, p) != Flavor::Definite ||
        flavor(shape->xi, p) != Flavor::Indefinite) {
      add(n, "fn_identity.of-shape",
          "origin letters must be definite functions over an indefinite "
          "argument");
      return;
    }
    const StatementPtr* own = stmt_or_violation(
        n, n, "fn_identity.result-mismatch", "identity node");
    if (!own) return;
    StatementPtr expected = make_relation(make_letter(shape->p), Sign::Eq,
                                          make_letter(shape->q));
    if (!equal(*own, expected))
      add(n, "fn_identity.result-mismatch",
          "statement must equate the two function letters");
  }

  void check_restrict(const Node* n, const Justification& j) {
    if (!ref_ok(n, j.prop, "restrict.ref", "property")) return;
    if (!is_property(j.prop->content)) {
      add(n, "restrict.prop-shape", "reference must hold a property");
      return;
    }
    const Property& pr = as_property(j.prop->content);
    auto shape = detail::restrict_shape(pr);
    if (!shape) {
      add(n, "restrict.prop-shape",
          "property must abbreviate through a single letter argument");
      return;
    }
    if (!j.step || *j.step < 1 || *j.step > 4) {
      add(n, "restrict.step", "restriction proceeds in steps 1 through 4");
      return;
    }
    if (!j.fresh || !j.g) {
      add(n, "restrict.params",
          "restriction requires a new letter and a bounding letter");
      return;
    }
    const Node* p1 = n->parent;
    if (*j.step > 1) {
      const Justification* pj = n->parent->justification.get();
      bool chained = pj && pj->kind == RuleKind::Restrict && pj->step &&
                     *pj->step == *j.step - 1 && pj->prop == j.prop &&
                     pj->fresh == j.fresh && pj->g == j.g;
      if (!chained) {
        add(n, "restrict.step-order",
            "step must directly follow the previous step with the same "
            "parameters");
        return;
      }
      for (int i = 1; i < *j.step && p1; ++i) p1 = p1->parent;
      if (!p1) return;
    }
    if (flavor(shape->xi, p1) != Flavor::Indefinite)
      add(n, "restrict.prop-shape",
          "property argument letter must be indefinite");
    if (flavor(*j.g, p1) != Flavor::Definite)
      add(n, "restrict.params", "bounding letter must be definite");
    if (flavor(*j.fresh, p1) != Flavor::Inactive)
      add(n, "restrict.params", "restricted function letter must be new");
    const StatementPtr* own =
        stmt_or_violation(n, n, "restrict.result-mismatch", "step node");
    if (!own) return;
    StatementPtr expected =
        detail::restrict_step_content(*j.step, *shape, *j.g, *j.fresh);
    if (!equal(*own, expected))
      add(n, "restrict.result-mismatch",
          "statement is not the expected step for the property");
  }

  void collect_lints() {
    for (const Node* p : pre_order(root_)) {
      std::set<Letter> active;
      for (const Node* a = p; a; a = a->parent) {
        auto ls = letters_of(a->content);
        active.insert(ls.begin(), ls.end());
      }
      const Node* kids[] = {p->pair_left.get(), p->pair_right.get(),
                            p->successor.get()};
      for (const Node* c : kids) {
        if (!c) continue;
        for (const Letter& l : active) {
          Flavor fp = flavor(l, p), fc = flavor(l, c);
          if (fp != fc)
            lint(c, "flavor-persistence",
                 "letter '" + l + "' changes from " + flavor_name(fp) +
                     " to " + flavor_name(fc));
        }
      }
    }
  }
};

}  // namespace detail

inline Report check_tree(const Node* root, const CheckOptions& opt = {}) {
  return detail::Checker(root, opt).run();
}

// ---------------------------------------------------------------------------
// Constructors. These compute what the rules determine mechanically and
// attach the node; they throw only when no content can be computed at all.
// Full legality is the validator's business.

class RuleApplyError : public std::runtime_error {
 public:
  explicit RuleApplyError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

inline const StatementPtr& statement_or_throw(const Node* n,
                                              const char* what) {
  if (is_property(n->content))
    throw RuleApplyError(std::string(what) + " must hold a statement");
  return as_statement(n->content);
}

}  // namespace detail

inline std::shared_ptr<Node> apply_root_axiom(const Letter& a) {
  auto root = make_root(
      make_relation(make_letter(a), Sign::Eq, make_letter(a)));
  Justification j;
  j.kind = RuleKind::RootAxiom;
  set_justification(root.get(), std::move(j));
  return root;
}

inline Node* apply_assume(Node* leaf, Content c) {
  Node* n = attach_successor(leaf, std::move(c));
  Justification j;
  j.kind = RuleKind::Assume;
  set_justification(n, std::move(j));
  return n;
}

inline std::shared_ptr<Node> make_assumed_root(Content c) {
  auto root = make_root(std::move(c));
  Justification j;
  j.kind = RuleKind::Assume;
  set_justification(root.get(), std::move(j));
  return root;
}

inline Node* apply_elem_add(Node* leaf, StatementPtr stmt,
                            std::optional<TermPtr> term = {}) {
  Node* n = attach_successor(leaf, std::move(stmt));
  Justification j;
  j.kind = RuleKind::ElemAdd;
  j.term = std::move(term);
  set_justification(n, std::move(j));
  return n;
}

inline Node* apply_elem_subst(Node* leaf, const Node* eq, const Node* src,
                              Letter from, Letter to) {
  const StatementPtr& s = detail::statement_or_throw(src, "source");
  StatementPtr content = substitute_letter(s, from, to);
  Node* n = attach_successor(leaf, std::move(content));
  Justification j;
  j.kind = RuleKind::ElemSubst;
  j.eq = eq;
  j.src = src;
  j.from = std::move(from);
  j.to = std::move(to);
  set_justification(n, std::move(j));
  return n;
}

inline Node* apply_fn_subst(Node* leaf, const Node* eq, const Node* src,
                            Letter letter, TermPtr term,
                            StatementPtr content) {
  Node* n = attach_successor(leaf, std::move(content));
  Justification j;
  j.kind = RuleKind::FnSubst;
  j.eq = eq;
  j.src = src;
  j.letter = std::move(letter);
  j.term = std::move(term);
  set_justification(n, std::move(j));
  return n;
}

inline std::pair<Node*, Node*> apply_branch(Node* leaf, StatementPtr left,
                                            StatementPtr right) {
  Node* l = attach_pair_left(leaf, std::move(left));
  Node* r = attach_pair_right(leaf, std::move(right));
  Justification jl, jr;
  jl.kind = RuleKind::Branch;
  jr.kind = RuleKind::Branch;
  set_justification(l, std::move(jl));
  set_justification(r, std::move(jr));
  return {l, r};
}

inline Node* apply_join(Node* leaf, StatementPtr stmt) {
  if (!leaf->pair_left || !leaf->pair_right)
    throw RuleApplyError("join requires a completed couple");
  Justification j;
  j.kind = RuleKind::Join;
  j.left = leaf->pair_left.get();
  j.right = leaf->pair_right.get();
  Node* n = attach_successor(leaf, std::move(stmt));
  set_justification(n, std::move(j));
  return n;
}

inline Node* apply_explode(Node* leaf, const Node* d1, const Node* d2,
                           StatementPtr stmt) {
  Node* n = attach_successor(leaf, std::move(stmt));
  Justification j;
  j.kind = RuleKind::Explode;
  j.dual1 = d1;
  j.dual2 = d2;
  set_justification(n, std::move(j));
  return n;
}

inline Node* apply_definition(Node* leaf, const Node* of, int step,
                              std::optional<Letter> fresh = {}) {
  const StatementPtr& e = detail::statement_or_throw(of, "origin");
  if (e->kind != StatementKind::Quantified ||
      e->quantifier != Quantifier::Existential)
    throw RuleApplyError("origin must be existential");
  if (step != 1 && step != 2)
    throw RuleApplyError("definition proceeds in steps 1 and 2");
  const Node* p1 = step == 1 ? leaf : leaf->parent;
  if (!p1) throw RuleApplyError("second step has no first step to follow");
  const StatementPtr& part = step == 1 ? e->hypothesis : e->conclusion;
  StatementPtr content;
  if (is_admissible(e->hypothesis, p1)) {
    content = part;
  } else {
    auto ph = detail::unique_placeholder(e->hypothesis, p1);
    if (!ph)
      throw RuleApplyError(
          "inadmissible hypothesis binds no unique placeholder");
    if (!fresh) throw RuleApplyError("introduced letter missing");
    content = substitute_letter(part, *ph, *fresh);
  }
  Node* n = attach_successor(leaf, std::move(content));
  Justification j;
  j.kind = RuleKind::Definition;
  j.of = of;
  j.step = step;
  j.fresh = std::move(fresh);
  set_justification(n, std::move(j));
  return n;
}

inline Node* apply_deduction(Node* leaf, const Node* of, const Node* witness,
                             std::optional<Letter> let = {}) {
  const StatementPtr& u = detail::statement_or_throw(of, "origin");
  if (u->kind != StatementKind::Quantified ||
      u->quantifier != Quantifier::Universal)
    throw RuleApplyError("origin must be universal");
  StatementPtr content;
  if (is_admissible(u->hypothesis, leaf)) {
    content = u->conclusion;
  } else {
    auto ph = detail::unique_placeholder(u->hypothesis, leaf);
    if (!ph)
      throw RuleApplyError(
          "inadmissible hypothesis binds no unique placeholder");
    if (!let) throw RuleApplyError("instantiating letter missing");
    content = substitute_letter(u->conclusion, *ph, *let);
  }
  Node* n = attach_successor(leaf, std::move(content));
  Justification j;
  j.kind = RuleKind::Deduction;
  j.of = of;
  j.witness = witness;
  j.let = std::move(let);
  set_justification(n, std::move(j));
  return n;
}

inline Node* apply_property(Node* leaf, Property p, const Node* of = nullptr,
                            std::optional<Letter> letter = {},
                            std::optional<TermPtr> term = {}) {
  Node* n = attach_successor(leaf, std::move(p));
  Justification j;
  j.kind = RuleKind::PropertyIntro;
  j.of = of;
  j.letter = std::move(letter);
  j.term = std::move(term);
  set_justification(n, std::move(j));
  return n;
}

inline Node* apply_abbrev_subst(Node* leaf, const Node* stmt_node,
                                const Node* prop_node, size_t at) {
  const StatementPtr& host = detail::statement_or_throw(stmt_node, "host");
  if (!is_property(prop_node->content))
    throw RuleApplyError("property reference must hold a property");
  const Property& pr = as_property(prop_node->content);
  auto occs = find_constituent_occurrences(host, pr.defining);
  if (at >= occs.size())
    throw RuleApplyError("occurrence index out of range");
  StatementPtr content = replace_constituent(host, occs[at], pr.abbreviation);
  Node* n = attach_successor(leaf, std::move(content));
  Justification j;
  j.kind = RuleKind::AbbrevSubst;
  j.stmt = stmt_node;
  j.prop = prop_node;
  j.at = at;
  set_justification(n, std::move(j));
  return n;
}

inline Node* apply_choice(Node* leaf, const Node* of, int step, Letter fresh,
                          std::vector<Letter> ds,
                          bool choice_step5_prose = false) {
  const StatementPtr& u = detail::statement_or_throw(of, "origin");
  auto shape = detail::choice_shape(u);
  if (!shape) throw RuleApplyError("origin does not fit the choice shape");
  if (step < 1 || step > 6)
    throw RuleApplyError("choice proceeds in steps 1 through 6");
  if (ds.size() != 5) throw RuleApplyError("choice requires five letters");
  StatementPtr content;
  try {
    content =
        detail::choice_step_content(step, *shape, fresh, ds, choice_step5_prose);
  } catch (const SubstitutionError&) {
    throw RuleApplyError("origin conclusion cannot take the chosen function");
  }
  Node* n = attach_successor(leaf, std::move(content));
  Justification j;
  j.kind = RuleKind::Choice;
  j.of = of;
  j.step = step;
  j.fresh = std::move(fresh);
  j.ds = std::move(ds);
  set_justification(n, std::move(j));
  return n;
}

inline Node* apply_fn_identity(Node* leaf, const Node* of) {
  const StatementPtr& s = detail::statement_or_throw(of, "origin");
  auto shape = detail::fn_identity_shape(s);
  if (!shape)
    throw RuleApplyError("origin does not fit the identity shape");
  Node* n = attach_successor(
      leaf,
      make_relation(make_letter(shape->p), Sign::Eq, make_letter(shape->q)));
  Justification j;
  j.kind = RuleKind::FnIdentity;
  j.of = of;
  set_justification(n, std::move(j));
  return n;
}

inline Node* apply_restrict(Node* leaf, const Node* prop, Letter g,
                            Letter fresh, int step) {
  if (!is_property(prop->content))
    throw RuleApplyError("property reference must hold a property");
  auto shape = detail::restrict_shape(as_property(prop->content));
  if (!shape)
    throw RuleApplyError("property does not fit the restriction shape");
  if (step < 1 || step > 4)
    throw RuleApplyError("restriction proceeds in steps 1 through 4");
  StatementPtr content = detail::restrict_step_content(step, *shape, g, fresh);
  Node* n = attach_successor(leaf, std::move(content));
  Justification j;
  j.kind = RuleKind::Restrict;
  j.prop = prop;
  j.g = std::move(g);
  j.fresh = std::move(fresh);
  j.step = step;
  set_justification(n, std::move(j));
  return n;
}

}  // namespace pft
