#pragma once

#include <cctype>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace pft {

// A letter is a named symbol. Rendering keeps letters as single tokens, so
// multi-character names (xi, eta, _v1) behave exactly like one-glyph ones.
using Letter = std::string;

enum class Sign { Eq, Neq };

inline Sign flip(Sign s) { return s == Sign::Eq ? Sign::Neq : Sign::Eq; }

inline std::string sign_text(Sign s) { return s == Sign::Eq ? "=" : "!="; }

// ---------------------------------------------------------------------------
// Terms: a letter, or a left-nested application f ( x ) ( y ) ...

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  Letter letter;     // nonempty iff leaf
  TermPtr function;  // both set iff application
  TermPtr argument;

  bool is_letter() const { return function == nullptr; }
};

inline TermPtr make_letter(Letter name) {
  auto t = std::make_shared<Term>();
  t->letter = std::move(name);
  return t;
}

inline TermPtr make_application(TermPtr fn, TermPtr arg) {
  auto t = std::make_shared<Term>();
  t->function = std::move(fn);
  t->argument = std::move(arg);
  return t;
}

// Deep structural equality. shared_ptr operator== compares identity, which is
// almost never what rule checking wants; always go through equal().
inline bool equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->is_letter() != b->is_letter()) return false;
  if (a->is_letter()) return a->letter == b->letter;
  return equal(a->function, b->function) && equal(a->argument, b->argument);
}

// ---------------------------------------------------------------------------
// Statements.

enum class StatementKind { Relation, Quantified, Abbreviation };
enum class Quantifier { Existential, Universal };

inline Quantifier opposite(Quantifier q) {
  return q == Quantifier::Existential ? Quantifier::Universal
                                      : Quantifier::Existential;
}

struct Statement;
using StatementPtr = std::shared_ptr<const Statement>;

struct Statement {
  StatementKind kind = StatementKind::Relation;

  // Relation
  TermPtr lhs;
  Sign sign = Sign::Eq;
  TermPtr rhs;

  // Quantified
  Quantifier quantifier = Quantifier::Existential;
  StatementPtr hypothesis;
  StatementPtr conclusion;

  // Abbreviation
  Letter head;
  std::vector<TermPtr> args;
};

inline StatementPtr make_relation(TermPtr lhs, Sign sign, TermPtr rhs) {
  auto s = std::make_shared<Statement>();
  s->kind = StatementKind::Relation;
  s->lhs = std::move(lhs);
  s->sign = sign;
  s->rhs = std::move(rhs);
  return s;
}

inline StatementPtr make_quantified(Quantifier q, StatementPtr hyp,
                                    StatementPtr concl) {
  auto s = std::make_shared<Statement>();
  s->kind = StatementKind::Quantified;
  s->quantifier = q;
  s->hypothesis = std::move(hyp);
  s->conclusion = std::move(concl);
  return s;
}

inline StatementPtr make_abbreviation(Letter head, std::vector<TermPtr> args) {
  auto s = std::make_shared<Statement>();
  s->kind = StatementKind::Abbreviation;
  s->head = std::move(head);
  s->args = std::move(args);
  return s;
}

inline bool equal(const StatementPtr& a, const StatementPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case StatementKind::Relation:
      return a->sign == b->sign && equal(a->lhs, b->lhs) &&
             equal(a->rhs, b->rhs);
    case StatementKind::Quantified:
      return a->quantifier == b->quantifier &&
             equal(a->hypothesis, b->hypothesis) &&
             equal(a->conclusion, b->conclusion);
    case StatementKind::Abbreviation: {
      if (a->head != b->head || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!equal(a->args[i], b->args[i])) return false;
      return true;
    }
  }
  return false;
}

inline StatementKind classify(const StatementPtr& s) { return s->kind; }

// A property pairs an abbreviation (its shorthand side) with the statement it
// abbreviates.
struct Property {
  StatementPtr abbreviation;  // always StatementKind::Abbreviation
  StatementPtr defining;
};

inline bool equal(const Property& a, const Property& b) {
  return equal(a.abbreviation, b.abbreviation) && equal(a.defining, b.defining);
}

// Node payload: either a statement or a property.
using Content = std::variant<StatementPtr, Property>;

inline bool is_property(const Content& c) {
  return std::holds_alternative<Property>(c);
}

inline const StatementPtr& as_statement(const Content& c) {
  return std::get<StatementPtr>(c);
}

inline const Property& as_property(const Content& c) {
  return std::get<Property>(c);
}

inline bool equal(const Content& a, const Content& b) {
  if (is_property(a) != is_property(b)) return false;
  if (is_property(a)) return equal(as_property(a), as_property(b));
  return equal(as_statement(a), as_statement(b));
}

// ---------------------------------------------------------------------------
// Rendering. Canonical form separates every token with a single space;
// parse(render(x)) reproduces x exactly, and render is injective, so rendered
// strings double as value keys.

namespace detail {

inline void render_term_into(const TermPtr& t, std::string& out, bool spaced) {
  if (t->is_letter()) {
    out += t->letter;
    return;
  }
  render_term_into(t->function, out, spaced);
  out += spaced ? " ( " : "(";
  render_term_into(t->argument, out, spaced);
  out += spaced ? " )" : ")";
}

}  // namespace detail

inline std::string render(const TermPtr& t) {
  std::string out;
  detail::render_term_into(t, out, true);
  return out;
}

// Single-token form used where a term must fit in a key=value slot.
inline std::string render_compact(const TermPtr& t) {
  std::string out;
  detail::render_term_into(t, out, false);
  return out;
}

inline std::string render(const StatementPtr& s) {
  switch (s->kind) {
    case StatementKind::Relation:
      return render(s->lhs) + " " + sign_text(s->sign) + " " + render(s->rhs);
    case StatementKind::Quantified: {
      bool ex = s->quantifier == Quantifier::Existential;
      return std::string(ex ? "[ " : "< ") + render(s->hypothesis) +
             (ex ? " ] " : " > ") + render(s->conclusion);
    }
    case StatementKind::Abbreviation: {
      std::string out = s->head;
      for (const auto& a : s->args) out += " " + render(a);
      return out;
    }
  }
  return {};
}

inline std::string render(const Property& p) {
  return render(p.abbreviation) + " : " + render(p.defining);
}

inline std::string render(const Content& c) {
  return is_property(c) ? render(as_property(c)) : render(as_statement(c));
}

// ---------------------------------------------------------------------------
// Parsing.

enum class ParseErrorCode {
  EmptyInput,
  UnbalancedBrackets,
  DanglingRelationalSign,
  AbbreviationHeadNotBareLetter,
  UnexpectedToken,
  TrailingInput,
  PropertyShape,
};

inline std::string parse_error_code_name(ParseErrorCode c) {
  switch (c) {
    case ParseErrorCode::EmptyInput: return "EmptyInput";
    case ParseErrorCode::UnbalancedBrackets: return "UnbalancedBrackets";
    case ParseErrorCode::DanglingRelationalSign: return "DanglingRelationalSign";
    case ParseErrorCode::AbbreviationHeadNotBareLetter:
      return "AbbreviationHeadNotBareLetter";
    case ParseErrorCode::UnexpectedToken: return "UnexpectedToken";
    case ParseErrorCode::TrailingInput: return "TrailingInput";
    case ParseErrorCode::PropertyShape: return "PropertyShape";
  }
  return "?";
}

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorCode code, const std::string& msg, size_t offset)
      : std::runtime_error(parse_error_code_name(code) + ": " + msg +
                           " (offset " + std::to_string(offset) + ")"),
        code_(code),
        offset_(offset) {}

  ParseErrorCode code() const { return code_; }
  size_t offset() const { return offset_; }

 private:
  ParseErrorCode code_;
  size_t offset_;
};

namespace detail {

enum class TokKind {
  LBrack, RBrack, LAngle, RAngle, LParen, RParen, Eq, Neq, Colon, Ident, End
};

struct Token {
  TokKind kind;
  std::string text;
  size_t offset;
};

inline bool ident_char(unsigned char c) {
  return std::isalnum(c) != 0 || c == '_' || c >= 0x80;
}

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < src.size()) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    size_t start = i;
    switch (c) {
      case '[': out.push_back({TokKind::LBrack, "[", start}); ++i; break;
      case ']': out.push_back({TokKind::RBrack, "]", start}); ++i; break;
      case '<': out.push_back({TokKind::LAngle, "<", start}); ++i; break;
      case '>': out.push_back({TokKind::RAngle, ">", start}); ++i; break;
      case '(': out.push_back({TokKind::LParen, "(", start}); ++i; break;
      case ')': out.push_back({TokKind::RParen, ")", start}); ++i; break;
      case '=': out.push_back({TokKind::Eq, "=", start}); ++i; break;
      case '!':
        if (i + 1 < src.size() && src[i + 1] == '=') {
          out.push_back({TokKind::Neq, "!=", start});
          i += 2;
        } else {
          throw ParseError(ParseErrorCode::UnexpectedToken,
                           "'!' must be followed by '='", start);
        }
        break;
      case ':': out.push_back({TokKind::Colon, ":", start}); ++i; break;
      default: {
        if (!ident_char(c))
          throw ParseError(ParseErrorCode::UnexpectedToken,
                           std::string("stray character '") + src[i] + "'",
                           start);
        size_t j = i;
        while (j < src.size() &&
               ident_char(static_cast<unsigned char>(src[j])))
          ++j;
        out.push_back({TokKind::Ident, std::string(src.substr(i, j - i)), start});
        i = j;
        break;
      }
    }
  }
  out.push_back({TokKind::End, "", src.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  StatementPtr statement_all() {
    require_nonempty();
    StatementPtr s = statement();
    finish();
    return s;
  }

  TermPtr term_all() {
    require_nonempty();
    if (peek().kind != TokKind::Ident)
      throw ParseError(ParseErrorCode::UnexpectedToken,
                       "term must start with a letter", peek().offset);
    TermPtr t = term();
    finish();
    return t;
  }

  Property property_all() {
    require_nonempty();
    Property p = property();
    finish();
    return p;
  }

  Content content_all() {
    require_nonempty();
    if (has_top_level_colon()) return property_all();
    return statement_all();
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  const Token& peek() const { return toks_[pos_]; }
  void advance() { ++pos_; }

  void require_nonempty() const {
    if (toks_[0].kind == TokKind::End)
      throw ParseError(ParseErrorCode::EmptyInput, "no tokens", 0);
  }

  bool has_top_level_colon() const {
    int depth = 0;
    for (const Token& t : toks_) {
      switch (t.kind) {
        case TokKind::LBrack:
        case TokKind::LAngle:
        case TokKind::LParen: ++depth; break;
        case TokKind::RBrack:
        case TokKind::RAngle:
        case TokKind::RParen: --depth; break;
        case TokKind::Colon:
          if (depth == 0) return true;
          break;
        default: break;
      }
    }
    return false;
  }

  Property property() {
    const Token& first = peek();
    StatementPtr abbrev = statement();
    if (peek().kind != TokKind::Colon)
      throw ParseError(ParseErrorCode::PropertyShape,
                       "property requires ':' after its abbreviation",
                       peek().offset);
    if (abbrev->kind != StatementKind::Abbreviation)
      throw ParseError(ParseErrorCode::PropertyShape,
                       "left side of ':' must be an abbreviation",
                       first.offset);
    advance();
    StatementPtr defining = statement();
    return Property{abbrev, defining};
  }

  StatementPtr statement() {
    const Token& t = peek();
    switch (t.kind) {
      case TokKind::LBrack:
      case TokKind::LAngle: {
        bool existential = t.kind == TokKind::LBrack;
        advance();
        StatementPtr hyp = statement();
        TokKind closer = existential ? TokKind::RBrack : TokKind::RAngle;
        if (peek().kind != closer)
          throw ParseError(ParseErrorCode::UnbalancedBrackets,
                           existential ? "expected ']'" : "expected '>'",
                           peek().offset);
        advance();
        StatementPtr concl = statement();
        return make_quantified(existential ? Quantifier::Existential
                                           : Quantifier::Universal,
                               std::move(hyp), std::move(concl));
      }
      case TokKind::RBrack:
      case TokKind::RAngle:
      case TokKind::RParen:
        throw ParseError(ParseErrorCode::UnbalancedBrackets,
                         "closing bracket where a statement is expected",
                         t.offset);
      case TokKind::Eq:
      case TokKind::Neq:
        throw ParseError(ParseErrorCode::DanglingRelationalSign,
                         "relational sign without a left term", t.offset);
      case TokKind::LParen:
        throw ParseError(ParseErrorCode::UnexpectedToken,
                         "'(' cannot start a statement", t.offset);
      case TokKind::Colon:
        throw ParseError(ParseErrorCode::UnexpectedToken,
                         "':' cannot start a statement", t.offset);
      case TokKind::End:
        throw ParseError(ParseErrorCode::UnexpectedToken,
                         "unexpected end of input", t.offset);
      case TokKind::Ident: {
        TermPtr first = term();
        if (peek().kind == TokKind::Eq || peek().kind == TokKind::Neq) {
          Sign sign = peek().kind == TokKind::Eq ? Sign::Eq : Sign::Neq;
          advance();
          if (peek().kind != TokKind::Ident)
            throw ParseError(ParseErrorCode::DanglingRelationalSign,
                             "relational sign without a right term",
                             peek().offset);
          TermPtr rhs = term();
          return make_relation(std::move(first), sign, std::move(rhs));
        }
        if (!first->is_letter())
          throw ParseError(ParseErrorCode::AbbreviationHeadNotBareLetter,
                           "abbreviation head must be a bare letter",
                           t.offset);
        std::vector<TermPtr> args;
        while (peek().kind == TokKind::Ident) args.push_back(term());
        if (peek().kind == TokKind::Eq || peek().kind == TokKind::Neq)
          throw ParseError(ParseErrorCode::DanglingRelationalSign,
                           "relational sign after abbreviation arguments",
                           peek().offset);
        return make_abbreviation(first->letter, std::move(args));
      }
    }
    throw ParseError(ParseErrorCode::UnexpectedToken, "unparsable statement",
                     t.offset);
  }

  TermPtr term() {
    TermPtr t = make_letter(peek().text);
    advance();
    while (peek().kind == TokKind::LParen) {
      advance();
      if (peek().kind != TokKind::Ident)
        throw ParseError(ParseErrorCode::UnexpectedToken,
                         "application argument must be a term",
                         peek().offset);
      TermPtr arg = term();
      if (peek().kind != TokKind::RParen)
        throw ParseError(ParseErrorCode::UnbalancedBrackets, "expected ')'",
                         peek().offset);
      advance();
      t = make_application(std::move(t), std::move(arg));
    }
    return t;
  }

  void finish() const {
    const Token& t = toks_[pos_];
    if (t.kind == TokKind::End) return;
    if (t.kind == TokKind::RBrack || t.kind == TokKind::RAngle ||
        t.kind == TokKind::RParen)
      throw ParseError(ParseErrorCode::UnbalancedBrackets,
                       "unmatched closing bracket", t.offset);
    throw ParseError(ParseErrorCode::TrailingInput,
                     "input continues past a complete statement", t.offset);
  }
};

}  // namespace detail

inline StatementPtr parse_statement(std::string_view src) {
  return detail::Parser(src).statement_all();
}

inline TermPtr parse_term(std::string_view src) {
  return detail::Parser(src).term_all();
}

inline Property parse_property(std::string_view src) {
  return detail::Parser(src).property_all();
}

inline Content parse_content(std::string_view src) {
  return detail::Parser(src).content_all();
}

// ---------------------------------------------------------------------------
// Measures and transforms.

// Number of quantifiers, counted recursively.
inline int complexity(const StatementPtr& s) {
  if (s->kind != StatementKind::Quantified) return 0;
  return 1 + complexity(s->hypothesis) + complexity(s->conclusion);
}

// The structural dual: flips the relational sign behind the quantifier spine.
// Abbreviations have no structural dual (their duality depends on their
// defining statements, which live outside the syntax layer).
inline bool has_structural_dual(const StatementPtr& s) {
  switch (s->kind) {
    case StatementKind::Relation: return true;
    case StatementKind::Abbreviation: return false;
    case StatementKind::Quantified: return has_structural_dual(s->conclusion);
  }
  return false;
}

inline StatementPtr dual_structural(const StatementPtr& s) {
  switch (s->kind) {
    case StatementKind::Relation:
      return make_relation(s->lhs, flip(s->sign), s->rhs);
    case StatementKind::Quantified:
      return make_quantified(opposite(s->quantifier), s->hypothesis,
                             dual_structural(s->conclusion));
    case StatementKind::Abbreviation:
      throw std::invalid_argument("abbreviation has no structural dual");
  }
  throw std::invalid_argument("bad statement");
}

class SubstitutionError : public std::runtime_error {
 public:
  explicit SubstitutionError(const std::string& msg)
      : std::runtime_error(msg) {}
};

inline TermPtr substitute_letter(const TermPtr& t, const Letter& from,
                                 const Letter& to) {
  if (t->is_letter()) return t->letter == from ? make_letter(to) : t;
  TermPtr f = substitute_letter(t->function, from, to);
  TermPtr a = substitute_letter(t->argument, from, to);
  if (f == t->function && a == t->argument) return t;
  return make_application(std::move(f), std::move(a));
}

inline StatementPtr substitute_letter(const StatementPtr& s, const Letter& from,
                                      const Letter& to) {
  switch (s->kind) {
    case StatementKind::Relation:
      return make_relation(substitute_letter(s->lhs, from, to), s->sign,
                           substitute_letter(s->rhs, from, to));
    case StatementKind::Quantified:
      return make_quantified(s->quantifier,
                             substitute_letter(s->hypothesis, from, to),
                             substitute_letter(s->conclusion, from, to));
    case StatementKind::Abbreviation: {
      std::vector<TermPtr> args;
      args.reserve(s->args.size());
      for (const auto& a : s->args)
        args.push_back(substitute_letter(a, from, to));
      return make_abbreviation(s->head == from ? to : s->head,
                               std::move(args));
    }
  }
  throw std::invalid_argument("bad statement");
}

inline TermPtr substitute_letter_with_term(const TermPtr& t, const Letter& from,
                                           const TermPtr& repl) {
  if (t->is_letter()) return t->letter == from ? repl : t;
  TermPtr f = substitute_letter_with_term(t->function, from, repl);
  TermPtr a = substitute_letter_with_term(t->argument, from, repl);
  if (f == t->function && a == t->argument) return t;
  return make_application(std::move(f), std::move(a));
}

inline StatementPtr substitute_letter_with_term(const StatementPtr& s,
                                                const Letter& from,
                                                const TermPtr& repl) {
  switch (s->kind) {
    case StatementKind::Relation:
      return make_relation(substitute_letter_with_term(s->lhs, from, repl),
                           s->sign,
                           substitute_letter_with_term(s->rhs, from, repl));
    case StatementKind::Quantified:
      return make_quantified(
          s->quantifier, substitute_letter_with_term(s->hypothesis, from, repl),
          substitute_letter_with_term(s->conclusion, from, repl));
    case StatementKind::Abbreviation: {
      Letter head = s->head;
      if (head == from) {
        if (!repl->is_letter())
          throw SubstitutionError(
              "cannot place a compound term in abbreviation head position");
        head = repl->letter;
      }
      std::vector<TermPtr> args;
      args.reserve(s->args.size());
      for (const auto& a : s->args)
        args.push_back(substitute_letter_with_term(a, from, repl));
      return make_abbreviation(std::move(head), std::move(args));
    }
  }
  throw std::invalid_argument("bad statement");
}

inline void collect_letters(const TermPtr& t, std::set<Letter>& out) {
  if (t->is_letter()) {
    out.insert(t->letter);
    return;
  }
  collect_letters(t->function, out);
  collect_letters(t->argument, out);
}

// Abbreviation heads count as letter occurrences.
inline void collect_letters(const StatementPtr& s, std::set<Letter>& out) {
  switch (s->kind) {
    case StatementKind::Relation:
      collect_letters(s->lhs, out);
      collect_letters(s->rhs, out);
      break;
    case StatementKind::Quantified:
      collect_letters(s->hypothesis, out);
      collect_letters(s->conclusion, out);
      break;
    case StatementKind::Abbreviation:
      out.insert(s->head);
      for (const auto& a : s->args) collect_letters(a, out);
      break;
  }
}

inline std::set<Letter> letters_of(const TermPtr& t) {
  std::set<Letter> out;
  collect_letters(t, out);
  return out;
}

inline std::set<Letter> letters_of(const StatementPtr& s) {
  std::set<Letter> out;
  collect_letters(s, out);
  return out;
}

inline std::set<Letter> letters_of(const Property& p) {
  std::set<Letter> out;
  collect_letters(p.abbreviation, out);
  collect_letters(p.defining, out);
  return out;
}

inline std::set<Letter> letters_of(const Content& c) {
  return is_property(c) ? letters_of(as_property(c))
                        : letters_of(as_statement(c));
}

inline int count_letter(const TermPtr& t, const Letter& l) {
  if (t->is_letter()) return t->letter == l ? 1 : 0;
  return count_letter(t->function, l) + count_letter(t->argument, l);
}

inline int count_letter(const StatementPtr& s, const Letter& l) {
  switch (s->kind) {
    case StatementKind::Relation:
      return count_letter(s->lhs, l) + count_letter(s->rhs, l);
    case StatementKind::Quantified:
      return count_letter(s->hypothesis, l) + count_letter(s->conclusion, l);
    case StatementKind::Abbreviation: {
      int n = s->head == l ? 1 : 0;
      for (const auto& a : s->args) n += count_letter(a, l);
      return n;
    }
  }
  return 0;
}

inline int count_letter(const Property& p, const Letter& l) {
  return count_letter(p.abbreviation, l) + count_letter(p.defining, l);
}

inline int count_letter(const Content& c, const Letter& l) {
  return is_property(c) ? count_letter(as_property(c), l)
                        : count_letter(as_statement(c), l);
}

inline bool contains_letter(const StatementPtr& s, const Letter& l) {
  return count_letter(s, l) > 0;
}

inline bool is_elementary(const StatementPtr& s) {
  return s->kind == StatementKind::Relation && s->lhs->is_letter() &&
         s->rhs->is_letter();
}

inline bool is_reflexive_elementary_equality(const StatementPtr& s) {
  return is_elementary(s) && s->sign == Sign::Eq &&
         s->lhs->letter == s->rhs->letter;
}

// ---------------------------------------------------------------------------
// Constituents: the statement-level sub-ASTs of a statement, in pre-order
// (the statement itself, then hypothesis constituents, then conclusion
// constituents). Paths index hypothesis as 0 and conclusion as 1.

using StatementPath = std::vector<int>;

namespace detail {

inline void collect_constituents(
    const StatementPtr& s, StatementPath& path,
    std::vector<std::pair<StatementPath, StatementPtr>>& out) {
  out.emplace_back(path, s);
  if (s->kind != StatementKind::Quantified) return;
  path.push_back(0);
  collect_constituents(s->hypothesis, path, out);
  path.back() = 1;
  collect_constituents(s->conclusion, path, out);
  path.pop_back();
}

}  // namespace detail

inline std::vector<std::pair<StatementPath, StatementPtr>> constituents(
    const StatementPtr& s) {
  std::vector<std::pair<StatementPath, StatementPtr>> out;
  StatementPath path;
  detail::collect_constituents(s, path, out);
  return out;
}

inline std::vector<StatementPath> find_constituent_occurrences(
    const StatementPtr& host, const StatementPtr& pattern) {
  std::vector<StatementPath> out;
  for (const auto& [path, stmt] : constituents(host))
    if (equal(stmt, pattern)) out.push_back(path);
  return out;
}

inline StatementPtr replace_constituent(const StatementPtr& host,
                                        const StatementPath& path,
                                        const StatementPtr& repl,
                                        size_t depth = 0) {
  if (depth == path.size()) return repl;
  if (host->kind != StatementKind::Quantified)
    throw std::out_of_range("constituent path leaves the statement");
  if (path[depth] == 0)
    return make_quantified(host->quantifier,
                           replace_constituent(host->hypothesis, path, repl,
                                               depth + 1),
                           host->conclusion);
  return make_quantified(
      host->quantifier, host->hypothesis,
      replace_constituent(host->conclusion, path, repl, depth + 1));
}

}  // namespace pft
