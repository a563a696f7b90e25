#pragma once
// ============================================================================
// gstl/proof.hpp — Hilbert-style proof scripts and their checker
// ============================================================================
//
// A proof script is a numbered list of steps, one per line:
//
//   1. (p -> (q -> p)) ; axiom P4 phi1=(p) phi2=(q)
//   2. p               ; premise
//   3. (q -> p)        ; mp 2 1
//
// Step numbers must run 1, 2, 3, ... and every rule may only reference
// earlier steps.  Justifications:
//
//   premise            the formula is in the premise set
//   axiom ID bindings  the formula equals the schema instance; bindings are
//                      key=value pairs: phi1..phi3=(formula), tau1/tau2=(term),
//                      a=<int>, b=<int or inf>, r=<until relation>,
//                      A=<exists|forall|n1,n2,...>, P=<pattern>, i=<1|2>
//   mp I J             modus ponens: step J is (step I -> this formula)
//   irr I              irrelevance: step I is ((mu | F[a,b] mu) -> this
//                      formula) for an atom mu not occurring in this formula
//
// check_proof validates a script against a premise set and reports the first
// failing step.

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gstl/ast.hpp"
#include "gstl/parse.hpp"
#include "gstl/schema.hpp"

namespace gstl {

struct ProofError : std::runtime_error {
  int line;
  ProofError(int line_, const std::string& msg)
      : std::runtime_error("proof script line " + std::to_string(line_) + ": " + msg),
        line(line_) {}
};

enum class RuleKind { Premise, Axiom, ModusPonens, Irrelevance };

struct ProofStep {
  int index = 0;
  int line = 0;  // source line, for diagnostics
  FormulaPtr formula;
  RuleKind rule = RuleKind::Premise;
  std::string schema;  // Axiom
  Subst subst;         // Axiom
  int ref1 = 0;        // ModusPonens (antecedent) / Irrelevance
  int ref2 = 0;        // ModusPonens (implication)
};

using ProofScript = std::vector<ProofStep>;

struct ProofCheck {
  bool ok = true;
  int failed_step = 0;  // 1-based; 0 when ok
  std::string message;
};

// ----------------------------------------------------------------------------
// Script parsing
// ----------------------------------------------------------------------------

namespace proof_detail {

inline void skip_ws(const std::string& s, std::size_t& i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

// Captures a balanced (...) group, returning the inside.
inline std::string capture_parens(const std::string& s, std::size_t& i, int line) {
  if (i >= s.size() || s[i] != '(') throw ProofError(line, "expected '('");
  int depth = 0;
  std::size_t start = ++i;
  for (; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    else if (s[i] == ')') {
      if (depth == 0) return s.substr(start, i++ - start);
      --depth;
    }
  }
  throw ProofError(line, "unbalanced parentheses in binding");
}

inline Scope parse_scope_text(const std::string& v, int line) {
  if (v == "exists") return Scope::exists();
  if (v == "forall") return Scope::forall();
  std::vector<NodeId> ids;
  std::string cur;
  for (char c : v) {
    if (c == ',') {
      if (cur.empty()) throw ProofError(line, "bad scope binding");
      ids.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (cur.empty()) throw ProofError(line, "bad scope binding");
  ids.push_back(cur);
  return Scope::of(std::move(ids));
}

inline Subst parse_bindings(const std::string& s, std::size_t i, int line) {
  Subst out;
  std::optional<int> a, b;
  bool b_inf = false;
  while (true) {
    skip_ws(s, i);
    if (i >= s.size()) break;
    std::size_t eq = s.find('=', i);
    if (eq == std::string::npos) throw ProofError(line, "expected key=value binding");
    std::string key = s.substr(i, eq - i);
    i = eq + 1;
    if (key == "phi1" || key == "phi2" || key == "phi3") {
      out.formulas[key] = parse_formula(capture_parens(s, i, line), line);
    } else if (key == "tau1" || key == "tau2") {
      out.terms[key] = parse_term(capture_parens(s, i, line), line);
    } else if (key == "P") {
      std::size_t end = s.find('>', i);
      if (end == std::string::npos) throw ProofError(line, "unterminated pattern binding");
      out.pattern = parse_pattern(s.substr(i, end + 1 - i), line);
      i = end + 1;
    } else {
      std::size_t end = i;
      while (end < s.size() && !std::isspace(static_cast<unsigned char>(s[end]))) ++end;
      std::string v = s.substr(i, end - i);
      i = end;
      if (v.empty()) throw ProofError(line, "empty value for binding " + key);
      if (key == "a") a = std::stoi(v);
      else if (key == "b") {
        if (v == "inf") b_inf = true;
        else b = std::stoi(v);
      } else if (key == "r") {
        auto r = ia_from_string(v);
        if (!r || r->inverse) throw ProofError(line, "bad until relation '" + v + "'");
        out.until_rel = r->base;
      } else if (key == "A") {
        out.scope = parse_scope_text(v, line);
      } else if (key == "i") {
        out.selector = std::stoi(v);
      } else {
        throw ProofError(line, "unknown binding key '" + key + "'");
      }
    }
  }
  if (a && b_inf) out.interval = unbounded(*a);
  else if (a && b) out.interval = bounded(*a, *b);
  else if (a || b || b_inf) throw ProofError(line, "interval binding needs both a and b");
  return out;
}

}  // namespace proof_detail

inline ProofScript parse_proof(const std::string& text) {
  ProofScript out;
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

    ProofStep step;
    step.line = lineno;
    std::size_t i = 0;
    proof_detail::skip_ws(line, i);
    std::size_t num_start = i;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    if (i == num_start || i >= line.size() || line[i] != '.')
      throw ProofError(lineno, "expected 'N. formula ; justification'");
    step.index = std::stoi(line.substr(num_start, i - num_start));
    ++i;

    auto semi = line.find(';', i);
    if (semi == std::string::npos) throw ProofError(lineno, "missing ';' before justification");
    step.formula = parse_formula(line.substr(i, semi - i), lineno);

    std::size_t j = semi + 1;
    proof_detail::skip_ws(line, j);
    std::size_t word_end = j;
    while (word_end < line.size() && std::isalpha(static_cast<unsigned char>(line[word_end])))
      ++word_end;
    std::string rule = line.substr(j, word_end - j);
    j = word_end;
    if (rule == "premise") {
      step.rule = RuleKind::Premise;
    } else if (rule == "axiom") {
      step.rule = RuleKind::Axiom;
      proof_detail::skip_ws(line, j);
      std::size_t id_end = j;
      while (id_end < line.size() && std::isalnum(static_cast<unsigned char>(line[id_end])))
        ++id_end;
      step.schema = line.substr(j, id_end - j);
      if (step.schema.empty()) throw ProofError(lineno, "axiom needs a schema id");
      step.subst = proof_detail::parse_bindings(line, id_end, lineno);
    } else if (rule == "mp" || rule == "irr") {
      step.rule = rule == "mp" ? RuleKind::ModusPonens : RuleKind::Irrelevance;
      std::istringstream refs(line.substr(j));
      if (!(refs >> step.ref1)) throw ProofError(lineno, rule + " needs step references");
      if (step.rule == RuleKind::ModusPonens && !(refs >> step.ref2))
        throw ProofError(lineno, "mp needs two step references");
      int extra;
      if (refs >> extra) throw ProofError(lineno, "too many step references");
    } else {
      throw ProofError(lineno, "unknown rule '" + rule + "'");
    }
    out.push_back(std::move(step));
  }
  for (std::size_t k = 0; k < out.size(); ++k)
    if (out[k].index != static_cast<int>(k) + 1)
      throw ProofError(out[k].line, "steps must be numbered 1, 2, 3, ...");
  return out;
}

// ----------------------------------------------------------------------------
// Checking
// ----------------------------------------------------------------------------

namespace proof_detail {

// Matches ((mu | F[a,b] mu) -> conclusion) and returns mu's name.
inline std::optional<std::string> irr_antecedent_atom(const Formula& f) {
  if (f.kind != FormulaKind::Or) return std::nullopt;
  const Formula& l = *f.lhs;
  const Formula& r = *f.rhs;
  if (l.kind != FormulaKind::Term || l.term->kind != TermKind::Atom) return std::nullopt;
  if (r.kind != FormulaKind::Eventually) return std::nullopt;
  const Formula& body = *r.lhs;
  if (body.kind != FormulaKind::Term || body.term->kind != TermKind::Atom) return std::nullopt;
  if (l.term->atom != body.term->atom) return std::nullopt;
  return l.term->atom;
}

}  // namespace proof_detail

inline ProofCheck check_proof(const ProofScript& script,
                              const std::vector<FormulaPtr>& premises) {
  auto fail = [](int step, std::string msg) {
    return ProofCheck{false, step, std::move(msg)};
  };
  for (std::size_t k = 0; k < script.size(); ++k) {
    const ProofStep& st = script[k];
    switch (st.rule) {
      case RuleKind::Premise: {
        bool found = false;
        for (const auto& p : premises)
          if (equal(p, st.formula)) { found = true; break; }
        if (!found) return fail(st.index, "formula is not among the premises");
        break;
      }
      case RuleKind::Axiom: {
        FormulaPtr inst;
        try {
          inst = instantiate_schema(st.schema, st.subst);
        } catch (const std::exception& e) {
          return fail(st.index, e.what());
        }
        if (!equal(inst, st.formula))
          return fail(st.index, "formula does not match the " + st.schema + " instance");
        break;
      }
      case RuleKind::ModusPonens: {
        if (st.ref1 < 1 || st.ref1 >= st.index || st.ref2 < 1 || st.ref2 >= st.index)
          return fail(st.index, "mp may only reference earlier steps");
        const FormulaPtr& ant = script[static_cast<std::size_t>(st.ref1) - 1].formula;
        const FormulaPtr& imp = script[static_cast<std::size_t>(st.ref2) - 1].formula;
        if (imp->kind != FormulaKind::Implies)
          return fail(st.index, "second mp reference is not an implication");
        if (!equal(imp->lhs, ant))
          return fail(st.index, "implication antecedent does not match the first reference");
        if (!equal(imp->rhs, st.formula))
          return fail(st.index, "implication consequent does not match this step");
        break;
      }
      case RuleKind::Irrelevance: {
        if (st.ref1 < 1 || st.ref1 >= st.index)
          return fail(st.index, "irr may only reference an earlier step");
        const FormulaPtr& src = script[static_cast<std::size_t>(st.ref1) - 1].formula;
        if (src->kind != FormulaKind::Implies)
          return fail(st.index, "irr reference is not an implication");
        auto mu = proof_detail::irr_antecedent_atom(*src->lhs);
        if (!mu)
          return fail(st.index, "irr antecedent is not of the form (mu | F[a,b] mu)");
        if (!equal(src->rhs, st.formula))
          return fail(st.index, "irr conclusion does not match this step");
        if (atoms_of(st.formula).count(*mu))
          return fail(st.index, "atom '" + *mu + "' still occurs in the conclusion");
        break;
      }
    }
  }
  return {};
}

}  // namespace gstl
