#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pft/rules.hpp"

// Hand-built derivations exercising every rule. The same trees exist as
// script files in the corpus; these builders are the in-memory reference.
namespace fixtures {

using namespace pft;

struct Fixture {
  std::shared_ptr<Node> root;
  std::map<std::string, Node*> at;
};

inline StatementPtr S(const std::string& text) { return parse_statement(text); }

inline Node* reg(Fixture& f, Node* n, const std::string& label) {
  n->label = label;
  f.at[label] = n;
  return n;
}

inline Node* reg_root(Fixture& f, std::shared_ptr<Node> r,
                      const std::string& label) {
  f.root = std::move(r);
  f.root->label = label;
  f.at[label] = f.root.get();
  return f.root.get();
}

// Branch, substitution, explosion, and a join, all over three letters.
inline Fixture sample_fixture() {
  Fixture f;
  Node* n1 = reg_root(f, apply_root_axiom("a"), "n1");
  Node* n2 = reg(f, apply_elem_add(n1, S("b != a")), "n2");
  Node* n3 = reg(f, apply_elem_add(n2, S("b = b")), "n3");
  auto [n4, n5] = apply_branch(n3, S("a != b"), S("a = b"));
  reg(f, n4, "n4");
  reg(f, n5, "n5");
  Node* n6 = reg(f, apply_elem_subst(n5, n5, n2, "a", "b"), "n6");
  reg(f, apply_explode(n6, n3, n6, S("a != b")), "n7");
  Node* n8 = reg(f, apply_join(n3, S("a != b")), "n8");
  Node* n9 = reg(f, apply_elem_add(n8, S("c = b")), "n9");
  auto [n10, n11] = apply_branch(n9, S("b = c"), S("b != c"));
  reg(f, n10, "n10");
  reg(f, n11, "n11");
  return f;
}

// Derives both "something else exists" and its companion "everything is
// something" from a single reflexive start.
inline Fixture existence_fixture() {
  Fixture f;
  Node* n1 = reg_root(f, apply_root_axiom("a"), "n1");
  auto [n2, n3] = apply_branch(n1, S("< xi = xi > [ eta = eta ] xi != eta"),
                               S("[ xi = xi ] < eta = eta > xi = eta"));
  reg(f, n2, "n2");
  reg(f, n3, "n3");
  Node* n4 = reg(f, apply_definition(n3, n3, 1, Letter("x")), "n4");
  Node* n5 = reg(f, apply_definition(n4, n3, 2, Letter("x")), "n5");
  Node* n6 = reg(f, apply_elem_add(n5, S("x != y")), "n6");
  Node* n7 = reg(f, apply_elem_add(n6, S("y = y")), "n7");
  Node* n8 = reg(f, apply_deduction(n7, n5, n7, Letter("y")), "n8");
  reg(f, apply_explode(n8, n6, n8, S("< xi = xi > [ eta = eta ] xi != eta")),
      "n9");
  Node* n10 =
      reg(f, apply_join(n1, S("< xi = xi > [ eta = eta ] xi != eta")), "n10");
  auto [n11, n12] =
      apply_branch(n10, S("[ xi = xi ] xi = xi"), S("< xi = xi > xi != xi"));
  reg(f, n11, "n11");
  reg(f, n12, "n12");
  Node* n13 = reg(f, apply_deduction(n12, n12, n1, Letter("a")), "n13");
  reg(f, apply_explode(n13, n1, n13, S("[ xi = xi ] xi = xi")), "n14");
  reg(f, apply_join(n10, S("[ xi = xi ] xi = xi")), "n15");
  return f;
}

// The commuted double quantifier collapses immediately.
inline Fixture commuted_fixture() {
  Fixture f;
  Node* m1 = reg_root(
      f, make_assumed_root(parse_content("[ eta = eta ] < xi = xi > eta != xi")),
      "m1");
  Node* m2 = reg(f, apply_definition(m1, m1, 1, Letter("y")), "m2");
  Node* m3 = reg(f, apply_definition(m2, m1, 2, Letter("y")), "m3");
  reg(f, apply_deduction(m3, m3, m2, Letter("y")), "m4");
  return f;
}

// "Some x collects exactly the eta different from x" collapses on every
// branch.
inline Fixture russell_first_fixture() {
  Fixture f;
  Node* r1 = reg_root(
      f,
      make_assumed_root(parse_content(
          "[ xi = xi ] < eta = eta > < < xi ( xi ) = xi > eta != xi > [ xi ( "
          "xi ) != xi ] eta != xi")),
      "r1");
  Node* r2 = reg(f, apply_definition(r1, r1, 1, Letter("x")), "r2");
  Node* r3 = reg(f, apply_definition(r2, r1, 2, Letter("x")), "r3");
  auto [r4, r14] = apply_branch(r3, S("x ( x ) = x"), S("x ( x ) != x"));
  reg(f, r4, "r4");
  reg(f, r14, "r14");
  Node* r5 = reg(f, apply_elem_add(r4, S("y != x")), "r5");
  Node* r6 = reg(f, apply_elem_add(r5, S("y = y")), "r6");
  Node* r7 = reg(f, apply_deduction(r6, r3, r6, Letter("y")), "r7");
  auto [r8, r11] = apply_branch(r7, S("< x ( x ) = x > y != x"),
                                S("[ x ( x ) = x ] y = x"));
  reg(f, r8, "r8");
  reg(f, r11, "r11");
  Node* r9 = reg(f, apply_deduction(r8, r7, r8), "r9");
  reg(f, apply_definition(r9, r9, 1), "r10");
  Node* r12 = reg(f, apply_definition(r11, r11, 1), "r12");
  reg(f, apply_definition(r12, r11, 2), "r13");
  Node* r15 = reg(f, apply_deduction(r14, r3, r2, Letter("x")), "r15");
  auto [r16, r20] = apply_branch(r15, S("< x ( x ) = x > x != x"),
                                 S("[ x ( x ) = x ] x = x"));
  reg(f, r16, "r16");
  reg(f, r20, "r20");
  Node* r17 = reg(f, apply_deduction(r16, r15, r16), "r17");
  Node* r18 = reg(f, apply_definition(r17, r17, 1), "r18");
  reg(f, apply_definition(r18, r17, 2), "r19");
  reg(f, apply_definition(r20, r20, 1), "r21");
  return f;
}

// "Some eta collects exactly the non-self-collecting xi" collapses.
inline Fixture russell_second_fixture() {
  Fixture f;
  Node* s1 = reg_root(
      f,
      make_assumed_root(parse_content(
          "[ eta = eta ] < xi = xi > [ < xi ( xi ) = xi > eta ( xi ) != xi ] "
          "< xi ( xi ) != xi > eta ( xi ) = xi")),
      "s1");
  Node* s2 = reg(f, apply_definition(s1, s1, 1, Letter("y")), "s2");
  Node* s3 = reg(f, apply_definition(s2, s1, 2, Letter("y")), "s3");
  Node* s4 = reg(f, apply_deduction(s3, s3, s2, Letter("y")), "s4");
  Node* s5 = reg(f, apply_definition(s4, s4, 1), "s5");
  Node* s6 = reg(f, apply_definition(s5, s4, 2), "s6");
  auto [s7, s9] = apply_branch(s6, S("y ( y ) != y"), S("y ( y ) = y"));
  reg(f, s7, "s7");
  reg(f, s9, "s9");
  reg(f, apply_deduction(s7, s6, s7), "s8");
  reg(f, apply_deduction(s9, s5, s9), "s10");
  return f;
}

// All six steps of choosing a selector function for a pair relation.
inline Fixture choice_fixture(bool prose_step5 = false) {
  Fixture f;
  Node* a1 =
      reg_root(f, make_assumed_root(parse_content("A xi eta : xi != eta")),
               "a1");
  Node* a2 = reg(f, apply_assume(a1, parse_content("g != h")), "a2");
  Node* a3 = reg(
      f, apply_assume(a2, parse_content("< xi = xi > [ eta = eta ] A xi eta")),
      "a3");
  std::vector<Letter> ds{"g", "g", "g", "g", "h"};
  Node* prev = a3;
  for (int k = 1; k <= 6; ++k)
    prev = reg(f, apply_choice(prev, a3, k, "f", ds, prose_step5),
               "c" + std::to_string(k));
  return f;
}

// All four steps of restricting a function letter to a property.
inline Fixture restriction_fixture() {
  Fixture f;
  Node* n1 = reg_root(f, apply_root_axiom("g"), "n1");
  Node* n2 =
      reg(f, apply_property(n1, parse_property("A xi : xi != xi")), "n2");
  Node* prev = n2;
  for (int k = 1; k <= 4; ++k)
    prev = reg(f, apply_restrict(prev, n2, "g", "f", k),
               "n" + std::to_string(k + 2));
  return f;
}

}  // namespace fixtures
