#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "pft/tree.hpp"

using namespace pft;

namespace {

// A successor chain built from content strings, root first.
struct Chain {
  std::shared_ptr<Node> root;
  std::vector<Node*> nodes;

  explicit Chain(const std::vector<std::string>& contents) {
    root = make_root(parse_content(contents[0]));
    nodes.push_back(root.get());
    for (size_t i = 1; i < contents.size(); ++i)
      nodes.push_back(
          attach_successor(nodes.back(), parse_content(contents[i])));
  }

  Node* back() { return nodes.back(); }
};

}  // namespace

TEST_CASE("attachment enforces the one-successor one-couple shape") {
  auto root = make_root(parse_content("a = a"));
  Node* s = attach_successor(root.get(), parse_content("b != a"));
  REQUIRE(s->parent == root.get());
  REQUIRE_THROWS_AS(attach_successor(root.get(), parse_content("c = a")),
                    StructureError);

  Node* l = attach_pair_left(s, parse_content("a = b"));
  REQUIRE_THROWS_AS(attach_pair_left(s, parse_content("a != b")),
                    StructureError);
  Node* r = attach_pair_right(s, parse_content("a != b"));
  REQUIRE_THROWS_AS(attach_pair_right(s, parse_content("a != b")),
                    StructureError);
  REQUIRE(is_pair_child(l));
  REQUIRE(is_pair_child(r));
  REQUIRE(!is_pair_child(s));

  // a couple may coexist with a successor on the same node
  Node* join = attach_successor(s, parse_content("a != b"));
  REQUIRE(s->successor.get() == join);
}

TEST_CASE("right couple member requires the left one") {
  auto root = make_root(parse_content("a = a"));
  REQUIRE_THROWS_AS(attach_pair_right(root.get(), parse_content("a != a")),
                    StructureError);
}

TEST_CASE("couple members must be statements") {
  auto root = make_root(parse_content("a = a"));
  REQUIRE_THROWS_AS(attach_pair_left(root.get(), parse_content("A xi : xi != xi")),
                    StructureError);
  attach_pair_left(root.get(), parse_content("b = a"));
  REQUIRE_THROWS_AS(
      attach_pair_right(root.get(), parse_content("A xi : xi != xi")),
      StructureError);
  // properties are fine on successors
  Node* p = attach_successor(root.get(), parse_content("A xi : xi != xi"));
  REQUIRE(is_property(p->content));
}

TEST_CASE("ancestor and chain queries") {
  Chain c({"a = a", "b != a", "b = b"});
  Node* mid = c.nodes[1];
  Node* leaf = c.nodes[2];

  auto anc = ancestors(leaf);
  REQUIRE(anc.size() == 3);
  REQUIRE(anc[0] == c.root.get());
  REQUIRE(anc[2] == leaf);

  REQUIRE(is_strict_ancestor(c.root.get(), leaf));
  REQUIRE(is_strict_ancestor(mid, leaf));
  REQUIRE(!is_strict_ancestor(leaf, leaf));
  REQUIRE(!is_strict_ancestor(leaf, mid));
  REQUIRE(root_of(leaf) == c.root.get());
  REQUIRE(is_root(c.root.get()));
  REQUIRE(!is_root(leaf));

  auto sc = successor_chain(mid);
  REQUIRE(sc.size() == 2);
  REQUIRE(sc[0] == mid);
  REQUIRE(sc[1] == leaf);
}

TEST_CASE("pre-order visits couple before successor, left before right") {
  auto root = make_root(parse_content("a = a"));
  Node* s1 = attach_successor(root.get(), parse_content("b = b"));
  Node* l = attach_pair_left(s1, parse_content("a = b"));
  Node* r = attach_pair_right(s1, parse_content("a != b"));
  Node* under_l = attach_successor(l, parse_content("c = c"));
  Node* join = attach_successor(s1, parse_content("a != b"));

  auto order = pre_order(root.get());
  std::vector<const Node*> expect = {root.get(), s1, l, under_l, r, join};
  REQUIRE(order == expect);
}

TEST_CASE("incomplete couples are detectable") {
  auto root = make_root(parse_content("a = a"));
  REQUIRE(find_incomplete_pair(root.get()) == nullptr);
  attach_pair_left(root.get(), parse_content("b = a"));
  REQUIRE(find_incomplete_pair(root.get()) == root.get());
  attach_pair_right(root.get(), parse_content("b != a"));
  REQUIRE(find_incomplete_pair(root.get()) == nullptr);
}

TEST_CASE("flavor distinguishes the four letter roles") {
  Chain c({"a = a", "[ xi = xi ] xi != a", "A eta : eta != eta"});
  Node* leaf = c.back();

  REQUIRE(flavor("a", leaf) == Flavor::Definite);
  REQUIRE(flavor("xi", leaf) == Flavor::Indefinite);
  REQUIRE(flavor("A", leaf) == Flavor::Adjective);
  REQUIRE(flavor("eta", leaf) == Flavor::Indefinite);
  REQUIRE(flavor("zz", leaf) == Flavor::Inactive);
  REQUIRE(is_active("a", leaf));
  REQUIRE(!is_active("zz", leaf));
}

TEST_CASE("property contents never confer definiteness") {
  // eta occurs in an unquantified defining statement, but only inside a
  // property, so it stays indefinite
  Chain c({"a = a", "A eta : eta != eta"});
  REQUIRE(flavor("eta", c.back()) == Flavor::Indefinite);
}

TEST_CASE("adjective wins over definite") {
  // B heads a property and also occurs in an unquantified statement
  Chain c({"a = a", "B eta : eta != eta", "B a"});
  REQUIRE(flavor("B", c.back()) == Flavor::Adjective);
}

TEST_CASE("flavor grows monotonically along a chain") {
  Chain c({"a = a", "b != a"});
  REQUIRE(flavor("b", c.root.get()) == Flavor::Inactive);
  REQUIRE(flavor("b", c.back()) == Flavor::Definite);
}

TEST_CASE("relations are admissible exactly over definite letters") {
  Chain c({"a = a", "b != a"});
  Node* leaf = c.back();
  REQUIRE(is_admissible(parse_content("a = b"), leaf));
  REQUIRE(is_admissible(parse_content("b != b"), leaf));
  REQUIRE(!is_admissible(parse_content("c = a"), leaf));
  REQUIRE(!is_admissible(parse_content("f ( a ) = b"), leaf));
}

TEST_CASE("quantified admissibility case 1 requires both parts admissible") {
  Chain c({"a = a", "b != a"});
  Node* leaf = c.back();
  REQUIRE(is_admissible(parse_content("[ a = b ] a != b"), leaf));
  REQUIRE(is_admissible(parse_content("< a = b > [ a = a ] b = b"), leaf));
}

TEST_CASE("quantified admissibility case 2 binds one placeholder letter") {
  Chain c({"a = a"});
  Node* leaf = c.back();
  REQUIRE(is_admissible(parse_content("[ xi = xi ] xi != a"), leaf));
  REQUIRE(is_admissible(parse_content("< xi != a > xi = a"), leaf));
  // nested: each level binds its own placeholder
  REQUIRE(is_admissible(
      parse_content("< xi = xi > [ eta = eta ] xi != eta"), leaf));
  // two fresh letters in one hypothesis: no single placeholder
  REQUIRE(!is_admissible(parse_content("[ xi = eta ] xi != eta"), leaf));
  // a quantified hypothesis may ride on case 1 when admissible on its own
  REQUIRE(is_admissible(
      parse_content("[ [ xi = xi ] xi = xi ] a = a"), leaf));
  // but case 2 never applies to a quantified hypothesis
  REQUIRE(!is_admissible(
      parse_content("[ [ xi = eta ] xi = xi ] a = a"), leaf));
}

TEST_CASE("indefinite letters qualify as case 2 placeholders") {
  // xi is already active (indefinite) from a quantified ancestor
  Chain c({"a = a", "[ xi = xi ] xi != a"});
  Node* leaf = c.back();
  REQUIRE(flavor("xi", leaf) == Flavor::Indefinite);
  REQUIRE(is_admissible(parse_content("[ xi != a ] xi != a"), leaf));
}

TEST_CASE("abbreviation admissibility needs an adjective head and definite arguments") {
  Chain c({"a = a", "A xi : xi != xi"});
  Node* leaf = c.back();
  REQUIRE(is_admissible(parse_content("A a"), leaf));
  REQUIRE(!is_admissible(parse_content("A b"), leaf));    // b inactive
  REQUIRE(!is_admissible(parse_content("A xi"), leaf));   // xi indefinite
  REQUIRE(!is_admissible(parse_content("B a"), leaf));    // B not an adjective
  REQUIRE(is_admissible(parse_content("[ A xi ] xi = a"), leaf));
  REQUIRE(is_admissible(parse_content("< A xi > xi != a"), leaf));
}

TEST_CASE("fresh property admissibility") {
  Chain c({"a = a", "b != a"});
  Node* leaf = c.back();
  REQUIRE(is_admissible(parse_content("A xi : xi != xi"), leaf));
  REQUIRE(is_admissible(parse_content("A xi eta : xi != eta"), leaf));
  REQUIRE(is_admissible(parse_content("A xi : [ xi != a ] xi = b"), leaf));
  // argument must occur in the defining statement
  REQUIRE(!is_admissible(parse_content("A xi : a != a"), leaf));
  // arguments must be bare letters
  REQUIRE(!is_admissible(parse_content("A f ( xi ) : f ( xi ) != a"), leaf));
  // arguments must be distinct
  REQUIRE(!is_admissible(parse_content("A xi xi : xi != xi"), leaf));
  // definite letters cannot serve as placeholders
  REQUIRE(!is_admissible(parse_content("A a : a != a"), leaf));
  // head must occur exactly once
  REQUIRE(!is_admissible(parse_content("A xi : [ A xi ] xi = xi"), leaf));
  // defining statement must be admissible once placeholders are definite
  REQUIRE(!is_admissible(parse_content("A xi : xi != c"), leaf));
}

TEST_CASE("modified property admissibility replaces one placeholder by a definite term") {
  Chain c({"a = a", "f != a", "A xi : xi != xi"});
  Node* leaf = c.back();
  REQUIRE(is_admissible(
      parse_content("A f ( a ) : f ( a ) != f ( a )"), leaf));
  REQUIRE(is_admissible(parse_content("A a : a != a"), leaf));
  // replacement must reproduce the whole property
  REQUIRE(!is_admissible(parse_content("A f ( a ) : a != a"), leaf));
  // the term must be built from definite letters
  REQUIRE(!is_admissible(
      parse_content("A g ( a ) : g ( a ) != g ( a )"), leaf));
  // no matching base property under a different head
  REQUIRE(!is_admissible(
      parse_content("B f ( a ) : f ( a ) != f ( a )"), leaf));
}

TEST_CASE("property admissibility survives an interleaved couple") {
  // same-head property deeper in the tree is found through the ancestry walk
  Chain c({"a = a", "A xi : xi != xi", "f != a"});
  Node* leaf = c.back();
  REQUIRE(is_admissible(parse_content("A f ( a ) : f ( a ) != f ( a )"), leaf));
}

TEST_CASE("structural duality of relations is positional") {
  auto root = make_root(parse_content("a = a"));
  Node* ctx = root.get();
  REQUIRE(are_dual(parse_statement("x = y"), parse_statement("x != y"), ctx));
  REQUIRE(are_dual(parse_statement("x != y"), parse_statement("x = y"), ctx));
  REQUIRE(!are_dual(parse_statement("x = y"), parse_statement("y != x"), ctx));
  REQUIRE(!are_dual(parse_statement("x = y"), parse_statement("x = y"), ctx));
  REQUIRE(!are_dual(parse_statement("x = y"), parse_statement("z != y"), ctx));
}

TEST_CASE("duality of quantified statements flips the kind and keeps the hypothesis") {
  auto root = make_root(parse_content("a = a"));
  Node* ctx = root.get();
  REQUIRE(are_dual(parse_statement("[ x = x ] y = y"),
                   parse_statement("< x = x > y != y"), ctx));
  REQUIRE(!are_dual(parse_statement("[ x = x ] y = y"),
                    parse_statement("[ x = x ] y != y"), ctx));
  REQUIRE(!are_dual(parse_statement("[ x = x ] y = y"),
                    parse_statement("< x != x > y != y"), ctx));
  REQUIRE(are_dual(
      parse_statement("< xi = xi > [ eta = eta ] xi != eta"),
      parse_statement("[ xi = xi ] < eta = eta > xi = eta"), ctx));
}

TEST_CASE("abbreviations are dual through dual defining statements") {
  Chain c({"a = a", "A xi : xi != xi", "B xi : xi = xi"});
  Node* ctx = c.back();
  REQUIRE(are_dual(parse_statement("A a"), parse_statement("B a"), ctx));
  REQUIRE(are_dual(parse_statement("B a"), parse_statement("A a"), ctx));
  REQUIRE(!are_dual(parse_statement("A a"), parse_statement("B b"), ctx));
  REQUIRE(!are_dual(parse_statement("A a"), parse_statement("A a"), ctx));
  // mixed kinds are never dual, even when an unfolding would match
  REQUIRE(!are_dual(parse_statement("A a"), parse_statement("a = a"), ctx));
  // without the properties in scope, nothing unfolds
  REQUIRE(!are_dual(parse_statement("A a"), parse_statement("B a"),
                    c.root.get()));
}

TEST_CASE("duality of abbreviations instantiates the property arguments") {
  Chain c({"a = a", "b != a",
           "A xi eta : [ xi != eta ] xi = eta",
           "B xi eta : < xi != eta > xi != eta"});
  Node* ctx = c.back();
  REQUIRE(are_dual(parse_statement("A a b"), parse_statement("B a b"), ctx));
  REQUIRE(!are_dual(parse_statement("A a b"), parse_statement("B b a"), ctx));
}

TEST_CASE("mutually recursive abbreviation duality terminates") {
  Chain c({"a = a", "A xi : B xi", "B xi : A xi"});
  REQUIRE(!are_dual(parse_statement("A a"), parse_statement("B a"), c.back()));
}

TEST_CASE("contradiction scan returns the first dual pair, shallow first") {
  Chain c({"a = a", "b != a", "b = b", "a = b", "b != b"});
  auto hit = is_contradictory(c.back());
  REQUIRE(hit.has_value());
  REQUIRE(hit->first == c.nodes[2]);
  REQUIRE(hit->second == c.nodes[4]);
  REQUIRE(render(as_statement(hit->first->content)) == "b = b");
  REQUIRE(render(as_statement(hit->second->content)) == "b != b");
}

TEST_CASE("contradiction is monotone down the tree") {
  Chain c({"a = a", "a != a", "b = b"});
  REQUIRE(is_contradictory(c.nodes[1]).has_value());
  REQUIRE(is_contradictory(c.nodes[2]).has_value());
  REQUIRE(!is_contradictory(c.nodes[0]).has_value());
}

TEST_CASE("consistent chains report no contradiction") {
  Chain c({"a = a", "b != a", "b = b", "a = b"});
  REQUIRE(!is_contradictory(c.back()).has_value());
}

TEST_CASE("contradiction sees through abbreviations and skips properties") {
  Chain c({"a = a", "A xi : xi != xi", "B xi : xi = xi", "A a", "B a"});
  auto hit = is_contradictory(c.back());
  REQUIRE(hit.has_value());
  REQUIRE(render(as_statement(hit->first->content)) == "A a");
  REQUIRE(render(as_statement(hit->second->content)) == "B a");
}
