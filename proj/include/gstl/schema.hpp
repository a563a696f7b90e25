#pragma once
// ============================================================================
// gstl/schema.hpp — axiom schemas: instantiation and one-step rewriting
// ============================================================================
//
// Twenty-one schemas in three groups:
//
//   P1..P10  propositional axioms (double negation, conjunction, disjunction
//            introduction with a selector, weakening, self-distribution,
//            contraposition, case analysis, biconditional, De Morgan)
//   T1..T5   temporal distribution axioms for G, F and U
//   S1..S6   spatial distribution of P / C / N over & and |
//
// instantiate_schema builds the schema instance for a substitution binding
// the placeholders (phi1..phi3, tau1/tau2, interval bounds, until relation,
// scope, pattern, disjunct selector).  apply_schema rewrites a formula whose
// root matches a schema's left-hand side into the right-hand side; schemas
// whose right-hand side is not determined by the left (P3..P6) never match.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gstl/ast.hpp"

namespace gstl {

struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Subst {
  std::map<std::string, FormulaPtr> formulas;  // phi1, phi2, phi3
  std::map<std::string, TermPtr> terms;        // tau1, tau2
  std::optional<TimeInterval> interval;        // a, b (or a, inf)
  std::optional<IaBase> until_rel;             // r
  std::optional<Scope> scope;                  // A
  std::optional<CaPattern> pattern;            // neighbor pattern
  int selector = 1;                            // P3: which disjunct is premised
};

inline const std::vector<std::string>& schema_ids() {
  static const std::vector<std::string> ids = {
      "P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8", "P9", "P10",
      "T1", "T2", "T3", "T4", "T5", "S1", "S2", "S3", "S4", "S5", "S6"};
  return ids;
}

namespace schema_detail {

inline FormulaPtr phi(const Subst& s, const char* name) {
  auto it = s.formulas.find(name);
  if (it == s.formulas.end()) throw SchemaError(std::string("missing binding ") + name);
  return it->second;
}
inline TermPtr tau(const Subst& s, const char* name) {
  auto it = s.terms.find(name);
  if (it == s.terms.end()) throw SchemaError(std::string("missing binding ") + name);
  return it->second;
}
inline TimeInterval ivl(const Subst& s) {
  if (!s.interval) throw SchemaError("missing interval binding");
  return *s.interval;
}
inline IaBase rel(const Subst& s) {
  if (!s.until_rel) throw SchemaError("missing until relation binding");
  return *s.until_rel;
}
inline Scope scope(const Subst& s) {
  if (!s.scope) throw SchemaError("missing scope binding");
  return *s.scope;
}
inline CaPattern pattern(const Subst& s) {
  if (!s.pattern) throw SchemaError("missing pattern binding");
  return *s.pattern;
}

// Spatial wrap used by S1..S6.
inline TermPtr spatial(const std::string& id, const Subst& s, TermPtr body) {
  if (id == "S1" || id == "S2") return t_parent(scope(s), std::move(body));
  if (id == "S3" || id == "S4") return t_child(scope(s), std::move(body));
  return t_neighbor(scope(s), pattern(s), std::move(body));
}

}  // namespace schema_detail

inline FormulaPtr instantiate_schema(const std::string& id, const Subst& s) {
  using namespace schema_detail;
  if (id == "P1") {
    FormulaPtr a = phi(s, "phi1");
    return f_implies(f_not(f_not(a)), a);
  }
  if (id == "P2") {
    FormulaPtr a = phi(s, "phi1"), b = phi(s, "phi2");
    return f_iff(f_and(a, b), f_and(a, b));
  }
  if (id == "P3") {
    FormulaPtr a = phi(s, "phi1"), b = phi(s, "phi2");
    if (s.selector != 1 && s.selector != 2) throw SchemaError("P3 selector must be 1 or 2");
    return f_implies(s.selector == 1 ? a : b, f_or(a, b));
  }
  if (id == "P4") {
    FormulaPtr a = phi(s, "phi1"), b = phi(s, "phi2");
    return f_implies(a, f_implies(b, a));
  }
  if (id == "P5") {
    FormulaPtr a = phi(s, "phi1"), b = phi(s, "phi2"), c = phi(s, "phi3");
    return f_implies(f_implies(a, f_implies(b, c)),
                     f_implies(f_implies(a, b), f_implies(a, c)));
  }
  if (id == "P6") {
    FormulaPtr a = phi(s, "phi1"), b = phi(s, "phi2");
    return f_implies(f_implies(f_not(a), f_not(b)), f_implies(b, a));
  }
  if (id == "P7") {
    FormulaPtr a = phi(s, "phi1"), b = phi(s, "phi2"), c = phi(s, "phi3");
    return f_implies(f_and(f_and(f_or(a, b), f_implies(a, c)), f_implies(b, c)), c);
  }
  if (id == "P8") {
    FormulaPtr a = phi(s, "phi1"), b = phi(s, "phi2");
    return f_iff(f_and(f_implies(a, b), f_implies(b, a)), f_iff(a, b));
  }
  if (id == "P9") {
    FormulaPtr a = phi(s, "phi1"), b = phi(s, "phi2");
    return f_iff(f_not(f_and(a, b)), f_or(f_not(a), f_not(b)));
  }
  if (id == "P10") {
    FormulaPtr a = phi(s, "phi1"), b = phi(s, "phi2");
    return f_iff(f_not(f_or(a, b)), f_and(f_not(a), f_not(b)));
  }
  if (id == "T1") {
    FormulaPtr a = phi(s, "phi1"), b = phi(s, "phi2");
    TimeInterval i = ivl(s);
    return f_implies(f_always(i, f_implies(a, b)),
                     f_implies(f_always(i, a), f_always(i, b)));
  }
  if (id == "T2") {
    FormulaPtr a = phi(s, "phi1"), b = phi(s, "phi2");
    TimeInterval i = ivl(s);
    return f_iff(f_always(i, f_and(a, b)), f_and(f_always(i, a), f_always(i, b)));
  }
  if (id == "T3") {
    FormulaPtr a = phi(s, "phi1"), b = phi(s, "phi2");
    TimeInterval i = ivl(s);
    FormulaPtr both = f_and(f_eventually(i, a), f_eventually(i, b));
    return f_and(f_implies(f_eventually(i, f_and(a, b)), both),
                 f_implies(both, f_eventually(i, f_or(a, b))));
  }
  if (id == "T4") {
    FormulaPtr a = phi(s, "phi1"), b = phi(s, "phi2"), c = phi(s, "phi3");
    IaBase r = rel(s);
    std::optional<TimeInterval> i = until_takes_interval(r)
                                        ? std::optional<TimeInterval>(ivl(s))
                                        : std::nullopt;
    return f_iff(f_until(r, i, f_and(a, b), c),
                 f_and(f_until(r, i, a, c), f_until(r, i, b, c)));
  }
  if (id == "T5") {
    FormulaPtr a = phi(s, "phi1"), b = phi(s, "phi2"), c = phi(s, "phi3");
    IaBase r = rel(s);
    std::optional<TimeInterval> i = until_takes_interval(r)
                                        ? std::optional<TimeInterval>(ivl(s))
                                        : std::nullopt;
    return f_iff(f_until(r, i, a, f_and(b, c)),
                 f_and(f_until(r, i, a, b), f_until(r, i, a, c)));
  }
  if (id == "S1" || id == "S3" || id == "S5") {
    TermPtr t1 = tau(s, "tau1"), t2 = tau(s, "tau2");
    return f_iff(f_term(spatial(id, s, t_and(t1, t2))),
                 f_and(f_term(spatial(id, s, t1)), f_term(spatial(id, s, t2))));
  }
  if (id == "S2" || id == "S4" || id == "S6") {
    TermPtr t1 = tau(s, "tau1"), t2 = tau(s, "tau2");
    return f_iff(f_term(spatial(id, s, t_or(t1, t2))),
                 f_or(f_term(spatial(id, s, t1)), f_term(spatial(id, s, t2))));
  }
  throw SchemaError("unknown schema id '" + id + "'");
}

// One left-to-right rewrite at the root, when the root matches the schema's
// left-hand side.  P3..P6 have right-hand sides not determined by the left
// (or vice versa), so they never match.
inline std::optional<FormulaPtr> apply_schema(const std::string& id, const FormulaPtr& f) {
  auto is = [&](FormulaKind k) { return f->kind == k; };
  if (id == "P1") {
    if (is(FormulaKind::Not) && f->lhs->kind == FormulaKind::Not) return f->lhs->lhs;
    return std::nullopt;
  }
  if (id == "P2") {
    if (is(FormulaKind::And)) return f;
    return std::nullopt;
  }
  if (id == "P3" || id == "P4" || id == "P5" || id == "P6") return std::nullopt;
  if (id == "P7") {
    if (!is(FormulaKind::And) || f->lhs->kind != FormulaKind::And) return std::nullopt;
    const FormulaPtr& disj = f->lhs->lhs;
    const FormulaPtr& imp1 = f->lhs->rhs;
    const FormulaPtr& imp2 = f->rhs;
    if (disj->kind != FormulaKind::Or || imp1->kind != FormulaKind::Implies ||
        imp2->kind != FormulaKind::Implies)
      return std::nullopt;
    if (equal(disj->lhs, imp1->lhs) && equal(disj->rhs, imp2->lhs) &&
        equal(imp1->rhs, imp2->rhs))
      return imp1->rhs;
    return std::nullopt;
  }
  if (id == "P8") {
    if (!is(FormulaKind::And) || f->lhs->kind != FormulaKind::Implies ||
        f->rhs->kind != FormulaKind::Implies)
      return std::nullopt;
    if (equal(f->lhs->lhs, f->rhs->rhs) && equal(f->lhs->rhs, f->rhs->lhs))
      return f_iff(f->lhs->lhs, f->lhs->rhs);
    return std::nullopt;
  }
  if (id == "P9") {
    if (is(FormulaKind::Not) && f->lhs->kind == FormulaKind::And)
      return f_or(f_not(f->lhs->lhs), f_not(f->lhs->rhs));
    return std::nullopt;
  }
  if (id == "P10") {
    if (is(FormulaKind::Not) && f->lhs->kind == FormulaKind::Or)
      return f_and(f_not(f->lhs->lhs), f_not(f->lhs->rhs));
    return std::nullopt;
  }
  if (id == "T1") {
    if (is(FormulaKind::Always) && f->lhs->kind == FormulaKind::Implies)
      return f_implies(f_always(*f->ivl, f->lhs->lhs), f_always(*f->ivl, f->lhs->rhs));
    return std::nullopt;
  }
  if (id == "T2") {
    if (is(FormulaKind::Always) && f->lhs->kind == FormulaKind::And)
      return f_and(f_always(*f->ivl, f->lhs->lhs), f_always(*f->ivl, f->lhs->rhs));
    return std::nullopt;
  }
  if (id == "T3") {
    if (is(FormulaKind::Eventually) && f->lhs->kind == FormulaKind::And)
      return f_and(f_eventually(*f->ivl, f->lhs->lhs), f_eventually(*f->ivl, f->lhs->rhs));
    return std::nullopt;
  }
  if (id == "T4") {
    if (is(FormulaKind::Until) && f->lhs->kind == FormulaKind::And)
      return f_and(f_until(f->rel, f->ivl, f->lhs->lhs, f->rhs),
                   f_until(f->rel, f->ivl, f->lhs->rhs, f->rhs));
    return std::nullopt;
  }
  if (id == "T5") {
    if (is(FormulaKind::Until) && f->rhs->kind == FormulaKind::And)
      return f_and(f_until(f->rel, f->ivl, f->lhs, f->rhs->lhs),
                   f_until(f->rel, f->ivl, f->lhs, f->rhs->rhs));
    return std::nullopt;
  }
  if (id == "S1" || id == "S2" || id == "S3" || id == "S4" || id == "S5" || id == "S6") {
    TermKind op = (id == "S1" || id == "S2")   ? TermKind::Parent
                  : (id == "S3" || id == "S4") ? TermKind::Child
                                               : TermKind::Neighbor;
    TermKind inner = (id == "S1" || id == "S3" || id == "S5") ? TermKind::And : TermKind::Or;
    if (!is(FormulaKind::Term) || f->term->kind != op || f->term->lhs->kind != inner)
      return std::nullopt;
    const SpatialTerm& t = *f->term;
    auto rebuild = [&](TermPtr body) {
      switch (op) {
        case TermKind::Parent: return t_parent(t.scope, std::move(body));
        case TermKind::Child: return t_child(t.scope, std::move(body));
        default: return t_neighbor(t.scope, t.pattern, std::move(body));
      }
    };
    FormulaPtr a = f_term(rebuild(t.lhs->lhs));
    FormulaPtr b = f_term(rebuild(t.lhs->rhs));
    return inner == TermKind::And ? f_and(a, b) : f_or(a, b);
  }
  throw SchemaError("unknown schema id '" + id + "'");
}

}  // namespace gstl
