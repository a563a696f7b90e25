#pragma once
// ============================================================================
// gstl/parse.hpp — concrete syntax for formulas and theory files
// ============================================================================
//
// Grammar (tightest to loosest):
//
//   unary:    ! f | G[a,b] f | G[a,inf] f | F[a,b] f
//             | P[scope] t | C[scope] t | N[scope]<r,r,r> t | atom | true
//             | false | ( formula )
//   until:    unary (U{r}[a,b] until)?      r in {b,o,d,e}; right-assoc
//             unary (U{r} until)?           r in {m,s,f} takes no interval
//   and:      until (& until)*
//   or:       and (| and)*
//   implies:  or (-> implies)?              right-assoc
//   iff:      implies (<-> implies)*        left-assoc
//
// Scopes are `exists`, `forall`, or comma-separated node ids.  Pattern axis
// entries are one of b,m,o,s,f,d,e, their inverses bi,mi,oi,si,fi,di, or *.
// The argument of P/C/N is a spatial term: atoms, !, &, | and nested spatial
// operators only.  A temporal operator there is a stratification error.
// G, F, U, P, C, N, exists, forall, true, false and inf are reserved words.
//
// Theory files hold one `name: formula` stanza per line; '#' starts a
// comment.

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gstl/ast.hpp"

namespace gstl {

struct ParseError : std::runtime_error {
  std::string kind;  // SyntaxError | StratificationError | ArityError
  int line, col;
  ParseError(std::string k, int line_, int col_, const std::string& msg)
      : std::runtime_error(k + " at " + std::to_string(line_) + ":" +
                           std::to_string(col_) + ": " + msg),
        kind(std::move(k)),
        line(line_),
        col(col_) {}
};

namespace parser_detail {

struct Token {
  enum Kind {
    Ident, Int, LParen, RParen, LBracket, RBracket, LBrace, RBrace,
    Lt, Gt, Comma, Amp, Pipe, Bang, Arrow, IffArrow, Star, End
  } kind;
  std::string text;
  int line, col;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

inline std::vector<Token> lex(const std::string& src, int line0) {
  std::vector<Token> out;
  int line = line0, col = 1;
  std::size_t i = 0;
  auto push = [&](Token::Kind k, std::string text, int c) {
    out.push_back({k, std::move(text), line, c});
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') { ++line; col = 1; ++i; continue; }
    if (std::isspace(static_cast<unsigned char>(c))) { ++col; ++i; continue; }
    int c0 = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      push(Token::Ident, src.substr(i, j - i), c0);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      push(Token::Int, src.substr(i, j - i), c0);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (src.compare(i, 3, "<->") == 0) { push(Token::IffArrow, "<->", c0); i += 3; col += 3; continue; }
    if (src.compare(i, 2, "->") == 0) { push(Token::Arrow, "->", c0); i += 2; col += 2; continue; }
    Token::Kind k;
    switch (c) {
      case '(': k = Token::LParen; break;
      case ')': k = Token::RParen; break;
      case '[': k = Token::LBracket; break;
      case ']': k = Token::RBracket; break;
      case '{': k = Token::LBrace; break;
      case '}': k = Token::RBrace; break;
      case '<': k = Token::Lt; break;
      case '>': k = Token::Gt; break;
      case ',': k = Token::Comma; break;
      case '&': k = Token::Amp; break;
      case '|': k = Token::Pipe; break;
      case '!': k = Token::Bang; break;
      case '*': k = Token::Star; break;
      default:
        throw ParseError("SyntaxError", line, c0, std::string("unexpected character '") + c + "'");
    }
    push(k, std::string(1, c), c0);
    ++i;
    ++col;
  }
  out.push_back({Token::End, "", line, col});
  return out;
}

inline bool reserved(const std::string& s) {
  return s == "G" || s == "F" || s == "U" || s == "P" || s == "C" || s == "N" ||
         s == "exists" || s == "forall" || s == "true" || s == "false" || s == "inf";
}

class Parser {
 public:
  Parser(const std::string& src, int line0) : toks_(lex(src, line0)) {}

  FormulaPtr parse_formula() {
    FormulaPtr f = parse_iff();
    expect(Token::End, "end of input");
    return f;
  }

  TermPtr parse_term() {
    TermPtr t = parse_term_or();
    expect(Token::End, "end of input");
    return t;
  }

  CaPattern parse_pattern_only() {
    CaPattern p = parse_pattern();
    expect(Token::End, "end of input");
    return p;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool at(Token::Kind k) const { return cur().kind == k; }
  bool at_word(const char* w) const { return at(Token::Ident) && cur().text == w; }

  [[noreturn]] void fail(const std::string& kind, const std::string& msg) const {
    throw ParseError(kind, cur().line, cur().col, msg);
  }
  void expect(Token::Kind k, const std::string& what) {
    if (!at(k)) fail("SyntaxError", "expected " + what);
    next();
  }

  int parse_int() {
    if (!at(Token::Int)) fail("SyntaxError", "expected a number");
    return std::stoi(next().text);
  }

  TimeInterval parse_interval(bool allow_inf) {
    expect(Token::LBracket, "'['");
    int lo = parse_int();
    expect(Token::Comma, "','");
    std::optional<int> hi;
    if (at_word("inf")) {
      if (!allow_inf) fail("ArityError", "unbounded interval is only allowed on G");
      next();
    } else {
      hi = parse_int();
    }
    expect(Token::RBracket, "']'");
    if (hi && (lo < 0 || *hi < lo)) fail("SyntaxError", "bad time interval");
    return {lo, hi};
  }

  Scope parse_scope() {
    expect(Token::LBracket, "'['");
    Scope s;
    if (at_word("exists")) { next(); s = Scope::exists(); }
    else if (at_word("forall")) { next(); s = Scope::forall(); }
    else {
      std::vector<NodeId> ids;
      while (true) {
        if (!at(Token::Ident) || reserved(cur().text))
          fail("SyntaxError", "expected a node id, exists, or forall");
        ids.push_back(next().text);
        if (!at(Token::Comma)) break;
        next();
      }
      s = Scope::of(std::move(ids));
    }
    expect(Token::RBracket, "']'");
    return s;
  }

  CaPattern parse_pattern() {
    expect(Token::Lt, "'<'");
    CaPattern p;
    for (int i = 0; i < 3; ++i) {
      if (i) expect(Token::Comma, "','");
      if (at(Token::Star)) { next(); continue; }
      if (!at(Token::Ident)) fail("SyntaxError", "expected an axis relation or '*'");
      auto r = ia_from_string(cur().text);
      if (!r) fail("SyntaxError", "unknown axis relation '" + cur().text + "'");
      next();
      p.axes[i] = *r;
    }
    expect(Token::Gt, "'>'");
    return p;
  }

  // --- spatial-term grammar ---------------------------------------------

  TermPtr parse_term_unary() {
    if (at(Token::Bang)) { next(); return t_not(parse_term_unary()); }
    if (at_word("true")) { next(); return t_true(); }
    if (at_word("false")) { next(); return t_false(); }
    if (at_word("P") || at_word("C") || at_word("N")) return parse_spatial_op();
    if (at_word("G") || at_word("F") || at_word("U"))
      fail("StratificationError", "temporal operator inside a spatial term");
    if (at(Token::Ident)) {
      if (reserved(cur().text)) fail("SyntaxError", "'" + cur().text + "' is a reserved word");
      return t_atom(next().text);
    }
    if (at(Token::LParen)) {
      next();
      TermPtr t = parse_term_or();
      if (at(Token::Arrow) || at(Token::IffArrow))
        fail("SyntaxError", "implication is not allowed in a spatial term");
      if (at_word("U")) fail("StratificationError", "temporal operator inside a spatial term");
      expect(Token::RParen, "')'");
      return t;
    }
    fail("SyntaxError", "expected a spatial term");
  }

  TermPtr parse_term_and() {
    TermPtr t = parse_term_unary();
    while (at(Token::Amp)) {
      next();
      t = t_and(t, parse_term_unary());
    }
    return t;
  }

  TermPtr parse_term_or() {
    TermPtr t = parse_term_and();
    while (at(Token::Pipe)) {
      next();
      t = t_or(t, parse_term_and());
    }
    return t;
  }

  TermPtr parse_spatial_op() {
    std::string op = next().text;  // P, C or N
    Scope s = parse_scope();
    if (op == "P") return t_parent(s, parse_term_unary());
    if (op == "C") return t_child(s, parse_term_unary());
    CaPattern p = parse_pattern();
    return t_neighbor(s, p, parse_term_unary());
  }

  // --- formula grammar ----------------------------------------------------

  FormulaPtr parse_unary() {
    if (at(Token::Bang)) { next(); return f_not(parse_unary()); }
    if (at_word("G")) {
      next();
      TimeInterval i = parse_interval(/*allow_inf=*/true);
      return f_always(i, parse_unary());
    }
    if (at_word("F")) {
      next();
      TimeInterval i = parse_interval(/*allow_inf=*/false);
      return f_eventually(i, parse_unary());
    }
    if (at_word("P") || at_word("C") || at_word("N")) return f_term(parse_spatial_op());
    if (at_word("true")) { next(); return f_term(t_true()); }
    if (at_word("false")) { next(); return f_term(t_false()); }
    if (at(Token::Ident)) {
      if (reserved(cur().text)) fail("SyntaxError", "'" + cur().text + "' is a reserved word");
      return f_atom(next().text);
    }
    if (at(Token::LParen)) {
      next();
      FormulaPtr f = parse_iff();
      expect(Token::RParen, "')'");
      return f;
    }
    fail("SyntaxError", "expected a formula");
  }

  FormulaPtr parse_until() {
    FormulaPtr lhs = parse_unary();
    if (!at_word("U")) return lhs;
    next();
    expect(Token::LBrace, "'{'");
    if (!at(Token::Ident)) fail("SyntaxError", "expected an interval relation");
    auto rel = ia_from_string(cur().text);
    if (!rel || rel->inverse)
      fail("SyntaxError", "until takes one of b, o, d, e, m, s, f");
    next();
    expect(Token::RBrace, "'}'");
    std::optional<TimeInterval> ivl;
    if (until_takes_interval(rel->base)) {
      if (!at(Token::LBracket))
        fail("ArityError", "U{" + to_string(*rel) + "} requires a time interval");
      ivl = parse_interval(/*allow_inf=*/false);
    } else if (at(Token::LBracket)) {
      fail("ArityError", "U{" + to_string(*rel) + "} takes no time interval");
    }
    return f_until(rel->base, ivl, lhs, parse_until());
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_until();
    while (at(Token::Amp)) {
      next();
      f = f_and(f, parse_until());
    }
    return f;
  }

  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (at(Token::Pipe)) {
      next();
      f = f_or(f, parse_and());
    }
    return f;
  }

  FormulaPtr parse_implies() {
    FormulaPtr f = parse_or();
    if (at(Token::Arrow)) {
      next();
      return f_implies(f, parse_implies());
    }
    return f;
  }

  FormulaPtr parse_iff() {
    FormulaPtr f = parse_implies();
    while (at(Token::IffArrow)) {
      next();
      f = f_iff(f, parse_implies());
    }
    return f;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace parser_detail

inline FormulaPtr parse_formula(const std::string& text, int line0 = 1) {
  return parser_detail::Parser(text, line0).parse_formula();
}

inline TermPtr parse_term(const std::string& text, int line0 = 1) {
  return parser_detail::Parser(text, line0).parse_term();
}

inline CaPattern parse_pattern(const std::string& text, int line0 = 1) {
  return parser_detail::Parser(text, line0).parse_pattern_only();
}

// `name: formula` stanzas, one per line; '#' comments; blank lines ignored.
inline TheorySet parse_theory(const std::string& text) {
  TheorySet out;
  std::map<std::string, bool> seen;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
    if (blank) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError("SyntaxError", lineno, 1, "expected 'name: formula'");
    std::string name;
    for (char c : line.substr(0, colon))
      if (!std::isspace(static_cast<unsigned char>(c))) name.push_back(c);
    if (name.empty() || !parser_detail::ident_start(name[0]))
      throw ParseError("SyntaxError", lineno, 1, "bad formula name");
    if (seen.count(name))
      throw ParseError("SyntaxError", lineno, 1, "duplicate formula name '" + name + "'");
    seen[name] = true;
    // Column offsets inside the stanza body are relative to the colon.
    out.push_back({name, parse_formula(line.substr(colon + 1), lineno)});
  }
  return out;
}

}  // namespace gstl
