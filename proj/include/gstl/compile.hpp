#pragma once
// ============================================================================
// gstl/compile.hpp — temporal elimination, grounding, and CNF generation
// ============================================================================
//
// The pipeline turns a theory over a finite signal range 0..H into
// propositional CNF in three steps:
//
//   1. eliminate_temporal: unfold G / F / U at an evaluation step into a
//      propositional combination of (spatial term, step) leaves, using the
//      same step arithmetic as the evaluator.  A referenced step outside
//      0..H becomes constant false.
//   2. ground: map each (term, step) leaf to propositional variables.  In
//      Abstract mode the whole spatial term becomes one variable per step.
//      In Expand mode quantifiers are expanded over the model first (see
//      expand.hpp) and each singleton operator chain becomes a variable.
//   3. to_cnf: either by negation-normal-form plus or-over-and distribution
//      (equivalent, exact model counts, may blow up — guarded), or by a
//      Tseitin transform with full biconditional definitions (equisatisfiable;
//      auxiliary variables are functionally determined, so counts projected
//      onto the original variables are exact).
//
// Variable numbering is pair-major, step-minor: each distinct (term, node)
// pair found during grounding gets a block of H+1 consecutive variables, one
// per step, whether or not every step occurs in a clause.  That makes the
// variable set the full grounding grid and keeps numbering deterministic.

#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gstl/ast.hpp"
#include "gstl/expand.hpp"
#include "gstl/model.hpp"

namespace gstl {

struct CompileError : std::runtime_error {
  std::string kind;
  CompileError(std::string k, const std::string& msg)
      : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

// ----------------------------------------------------------------------------
// Propositional formulas
// ----------------------------------------------------------------------------

enum class PropKind { Const, TermAt, Var, Not, And, Or, Implies, Iff };

struct Prop;
using PropPtr = std::shared_ptr<const Prop>;

struct Prop {
  PropKind kind = PropKind::Const;
  bool value = false;  // Const
  TermPtr term;        // TermAt
  int time = 0;        // TermAt
  int var = 0;         // Var (1-based)
  PropPtr lhs, rhs;    // Not uses lhs only
};

inline PropPtr p_const(bool v) {
  static const PropPtr cs[2] = {std::make_shared<Prop>(), [] {
                                  auto p = std::make_shared<Prop>();
                                  p->value = true;
                                  return p;
                                }()};
  return cs[v ? 1 : 0];
}
inline PropPtr p_term_at(TermPtr t, int time) {
  if (t->kind == TermKind::True) return p_const(true);
  if (t->kind == TermKind::False) return p_const(false);
  auto p = std::make_shared<Prop>();
  p->kind = PropKind::TermAt;
  p->term = std::move(t);
  p->time = time;
  return p;
}
inline PropPtr p_var(int v) {
  auto p = std::make_shared<Prop>();
  p->kind = PropKind::Var;
  p->var = v;
  return p;
}
inline PropPtr p_not(PropPtr a) {
  if (a->kind == PropKind::Const) return p_const(!a->value);
  if (a->kind == PropKind::Not) return a->lhs;
  auto p = std::make_shared<Prop>();
  p->kind = PropKind::Not;
  p->lhs = std::move(a);
  return p;
}
inline PropPtr p_binary(PropKind k, PropPtr a, PropPtr b) {
  auto p = std::make_shared<Prop>();
  p->kind = k;
  p->lhs = std::move(a);
  p->rhs = std::move(b);
  return p;
}
inline PropPtr p_and(PropPtr a, PropPtr b) {
  if (a->kind == PropKind::Const) return a->value ? b : a;
  if (b->kind == PropKind::Const) return b->value ? a : b;
  return p_binary(PropKind::And, std::move(a), std::move(b));
}
inline PropPtr p_or(PropPtr a, PropPtr b) {
  if (a->kind == PropKind::Const) return a->value ? a : b;
  if (b->kind == PropKind::Const) return b->value ? b : a;
  return p_binary(PropKind::Or, std::move(a), std::move(b));
}
inline PropPtr p_implies(PropPtr a, PropPtr b) {
  if (a->kind == PropKind::Const) return a->value ? b : p_const(true);
  if (b->kind == PropKind::Const) return b->value ? b : p_not(std::move(a));
  return p_binary(PropKind::Implies, std::move(a), std::move(b));
}
inline PropPtr p_iff(PropPtr a, PropPtr b) {
  if (a->kind == PropKind::Const) return a->value ? b : p_not(std::move(b));
  if (b->kind == PropKind::Const) return b->value ? a : p_not(std::move(a));
  return p_binary(PropKind::Iff, std::move(a), std::move(b));
}

// ----------------------------------------------------------------------------
// Temporal elimination
// ----------------------------------------------------------------------------

inline PropPtr eliminate_temporal(const Formula& f, int t, int horizon) {
  if (t < 0 || t > horizon) return p_const(false);
  switch (f.kind) {
    case FormulaKind::Term: return p_term_at(f.term, t);
    case FormulaKind::Not: return p_not(eliminate_temporal(*f.lhs, t, horizon));
    case FormulaKind::And:
      return p_and(eliminate_temporal(*f.lhs, t, horizon),
                   eliminate_temporal(*f.rhs, t, horizon));
    case FormulaKind::Or:
      return p_or(eliminate_temporal(*f.lhs, t, horizon),
                  eliminate_temporal(*f.rhs, t, horizon));
    case FormulaKind::Implies:
      return p_implies(eliminate_temporal(*f.lhs, t, horizon),
                       eliminate_temporal(*f.rhs, t, horizon));
    case FormulaKind::Iff:
      return p_iff(eliminate_temporal(*f.lhs, t, horizon),
                   eliminate_temporal(*f.rhs, t, horizon));
    case FormulaKind::Always: {
      int lo = t + f.ivl->lo;
      int hi = f.ivl->hi ? t + *f.ivl->hi : horizon;
      PropPtr out = p_const(true);
      for (int i = lo; i <= hi; ++i) out = p_and(out, eliminate_temporal(*f.lhs, i, horizon));
      return out;
    }
    case FormulaKind::Eventually: {
      PropPtr out = p_const(false);
      for (int i = t + f.ivl->lo; i <= t + *f.ivl->hi; ++i)
        out = p_or(out, eliminate_temporal(*f.lhs, i, horizon));
      return out;
    }
    case FormulaKind::Until: {
      PropPtr out = p_const(true);
      for (const auto& c : until_step_constraints(f.rel, f.ivl, t)) {
        if (c.time < 0 || c.time > horizon) return p_const(false);
        PropPtr a = eliminate_temporal(*f.lhs, c.time, horizon);
        PropPtr b = eliminate_temporal(*f.rhs, c.time, horizon);
        out = p_and(out, c.phi_true ? a : p_not(a));
        out = p_and(out, c.psi_true ? b : p_not(b));
      }
      return out;
    }
  }
  throw std::logic_error("eliminate_temporal: bad formula kind");
}

// ----------------------------------------------------------------------------
// Grounding
// ----------------------------------------------------------------------------

enum class GroundMode { Abstract, Expand };

struct GroundAtom {
  std::string term;
  NodeId node;
  int time = 0;
};

// Assigns each distinct (term, node) pair a block of horizon+1 variable ids
// in first-touch order; variable k of a block is the pair at step k.
class AtomRegistry {
 public:
  explicit AtomRegistry(int horizon) : horizon_(horizon) {}

  int var(const std::string& term, const NodeId& node, int time) {
    auto key = std::make_pair(term, node);
    auto it = index_.find(key);
    int idx;
    if (it == index_.end()) {
      idx = static_cast<int>(pairs_.size());
      index_.emplace(key, idx);
      pairs_.push_back(key);
    } else {
      idx = it->second;
    }
    return idx * (horizon_ + 1) + time + 1;
  }

  int num_vars() const { return static_cast<int>(pairs_.size()) * (horizon_ + 1); }
  int horizon() const { return horizon_; }
  int time_of(int var) const { return (var - 1) % (horizon_ + 1); }

  GroundAtom atom(int var) const {
    int idx = (var - 1) / (horizon_ + 1);
    const auto& [term, node] = pairs_.at(static_cast<std::size_t>(idx));
    return {term, node, time_of(var)};
  }

 private:
  int horizon_;
  std::map<std::pair<std::string, NodeId>, int> index_;
  std::vector<std::pair<std::string, NodeId>> pairs_;
};

namespace compile_detail {

// Expanded terms are boolean combinations whose leaves are operator chains
// or bare atoms; turn them into propositional structure over registry vars.
inline PropPtr term_to_prop(const TermPtr& t, const NodeId& root, int time,
                            AtomRegistry& reg) {
  // Recurse left before right explicitly: the registry numbers variables in
  // first-touch order, which must not depend on argument evaluation order.
  switch (t->kind) {
    case TermKind::True: return p_const(true);
    case TermKind::False: return p_const(false);
    case TermKind::Not: return p_not(term_to_prop(t->lhs, root, time, reg));
    case TermKind::And: {
      PropPtr a = term_to_prop(t->lhs, root, time, reg);
      PropPtr b = term_to_prop(t->rhs, root, time, reg);
      return p_and(a, b);
    }
    case TermKind::Or: {
      PropPtr a = term_to_prop(t->lhs, root, time, reg);
      PropPtr b = term_to_prop(t->rhs, root, time, reg);
      return p_or(a, b);
    }
    default:
      return p_var(reg.var(to_string(t), root, time));
  }
}

}  // namespace compile_detail

inline PropPtr ground_spatial(const PropPtr& p, const SpatialModel& model, const NodeId& root,
                              GroundMode mode, AtomRegistry& reg) {
  // As in term_to_prop, sequence the recursion so variable numbering is
  // deterministic (left subtree touches the registry first).
  auto binary = [&](PropPtr (*make)(PropPtr, PropPtr)) {
    PropPtr a = ground_spatial(p->lhs, model, root, mode, reg);
    PropPtr b = ground_spatial(p->rhs, model, root, mode, reg);
    return make(std::move(a), std::move(b));
  };
  switch (p->kind) {
    case PropKind::Const:
    case PropKind::Var:
      return p;
    case PropKind::TermAt:
      if (mode == GroundMode::Abstract)
        return p_var(reg.var(to_string(p->term), root, p->time));
      return compile_detail::term_to_prop(expand_term(model, root, p->term), root, p->time, reg);
    case PropKind::Not:
      return p_not(ground_spatial(p->lhs, model, root, mode, reg));
    case PropKind::And: return binary(p_and);
    case PropKind::Or: return binary(p_or);
    case PropKind::Implies: return binary(p_implies);
    case PropKind::Iff: return binary(p_iff);
  }
  throw std::logic_error("ground_spatial: bad prop kind");
}

// ----------------------------------------------------------------------------
// CNF
// ----------------------------------------------------------------------------

using Lit = int;  // +v / -v, v >= 1
using Clause = std::vector<Lit>;

struct Cnf {
  int num_vars = 0;      // including any auxiliary variables
  int num_original = 0;  // grounding variables; counts project onto 1..num_original
  std::vector<Clause> clauses;
};

enum class CnfMode { Distribution, Tseitin };

namespace compile_detail {

// Negation normal form over {Const, Var, Not, And, Or}.
inline PropPtr nnf(const PropPtr& p, bool neg) {
  switch (p->kind) {
    case PropKind::Const: return p_const(neg ? !p->value : p->value);
    case PropKind::Var: return neg ? p_not(p) : p;
    case PropKind::Not: return nnf(p->lhs, !neg);
    case PropKind::And:
    case PropKind::Or: {
      PropPtr a = nnf(p->lhs, neg), b = nnf(p->rhs, neg);
      bool conj = (p->kind == PropKind::And) != neg;
      return conj ? p_and(a, b) : p_or(a, b);
    }
    case PropKind::Implies:
      return neg ? p_and(nnf(p->lhs, false), nnf(p->rhs, true))
                 : p_or(nnf(p->lhs, true), nnf(p->rhs, false));
    case PropKind::Iff: {
      // (a & b) | (!a & !b), negated: (a & !b) | (!a & b)
      PropPtr a = nnf(p->lhs, false), na = nnf(p->lhs, true);
      PropPtr b = nnf(p->rhs, false), nb = nnf(p->rhs, true);
      return neg ? p_or(p_and(a, nb), p_and(na, b)) : p_or(p_and(a, b), p_and(na, nb));
    }
    case PropKind::TermAt: break;
  }
  throw std::logic_error("nnf: ungrounded or bad prop");
}

inline void add_clause_clean(std::vector<Clause>& out, Clause c) {
  std::sort(c.begin(), c.end(), [](Lit a, Lit b) {
    return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
  });
  c.erase(std::unique(c.begin(), c.end()), c.end());
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    if (c[i] == -c[i + 1]) return;  // tautology
  out.push_back(std::move(c));
}

inline std::vector<Clause> distribute(const PropPtr& p, std::size_t clause_limit) {
  switch (p->kind) {
    case PropKind::Const:
      if (p->value) return {};
      return {Clause{}};
    case PropKind::Var: return {Clause{p->var}};
    case PropKind::Not: return {Clause{-p->lhs->var}};  // NNF: negation sits on a var
    case PropKind::And: {
      auto a = distribute(p->lhs, clause_limit);
      auto b = distribute(p->rhs, clause_limit);
      if (a.size() + b.size() > clause_limit)
        throw CompileError("CnfBlowup", "clause limit exceeded during distribution");
      std::vector<Clause> out;
      out.reserve(a.size() + b.size());
      for (auto& c : a) add_clause_clean(out, std::move(c));
      for (auto& c : b) add_clause_clean(out, std::move(c));
      return out;
    }
    case PropKind::Or: {
      auto a = distribute(p->lhs, clause_limit);
      auto b = distribute(p->rhs, clause_limit);
      if (a.size() * b.size() > clause_limit)
        throw CompileError("CnfBlowup", "clause limit exceeded during distribution");
      std::vector<Clause> out;
      out.reserve(a.size() * b.size());
      for (const auto& ca : a)
        for (const auto& cb : b) {
          Clause c = ca;
          c.insert(c.end(), cb.begin(), cb.end());
          add_clause_clean(out, std::move(c));
        }
      return out;
    }
    default:
      throw std::logic_error("distribute: input not in NNF");
  }
}

// Full biconditional Tseitin definition of `p`; returns the literal standing
// for p and appends the defining clauses.
inline Lit tseitin(const PropPtr& p, int& next_var, std::vector<Clause>& out) {
  switch (p->kind) {
    case PropKind::Var: return p->var;
    case PropKind::Not: return -tseitin(p->lhs, next_var, out);
    case PropKind::Const:
      throw std::logic_error("tseitin: constants fold away before here");
    case PropKind::TermAt:
      throw std::logic_error("tseitin: ungrounded prop");
    default: break;
  }
  Lit a = tseitin(p->lhs, next_var, out);
  Lit b = tseitin(p->rhs, next_var, out);
  Lit g = next_var++;
  switch (p->kind) {
    case PropKind::And:
      out.push_back({-g, a});
      out.push_back({-g, b});
      out.push_back({-a, -b, g});
      break;
    case PropKind::Or:
      out.push_back({-a, g});
      out.push_back({-b, g});
      out.push_back({-g, a, b});
      break;
    case PropKind::Implies:
      out.push_back({a, g});
      out.push_back({-b, g});
      out.push_back({-g, -a, b});
      break;
    case PropKind::Iff:
      out.push_back({-g, -a, b});
      out.push_back({-g, a, -b});
      out.push_back({g, a, b});
      out.push_back({g, -a, -b});
      break;
    default:
      throw std::logic_error("tseitin: bad prop kind");
  }
  return g;
}

}  // namespace compile_detail

// Converts grounded propositions (one per theory formula, all conjoined) to
// CNF over the registry variables.
inline Cnf to_cnf(const std::vector<PropPtr>& props, const AtomRegistry& reg, CnfMode mode,
                  std::size_t clause_limit = (1u << 22)) {
  Cnf cnf;
  cnf.num_original = reg.num_vars();
  cnf.num_vars = reg.num_vars();
  for (const auto& p : props) {
    if (mode == CnfMode::Distribution) {
      for (auto& c : compile_detail::distribute(compile_detail::nnf(p, false), clause_limit))
        cnf.clauses.push_back(std::move(c));
      if (cnf.clauses.size() > clause_limit)
        throw CompileError("CnfBlowup", "clause limit exceeded");
    } else {
      if (p->kind == PropKind::Const) {
        if (!p->value) cnf.clauses.push_back(Clause{});
        continue;
      }
      int next = cnf.num_vars + 1;
      Lit top = compile_detail::tseitin(p, next, cnf.clauses);
      cnf.num_vars = next - 1;
      cnf.clauses.push_back({top});
    }
  }
  return cnf;
}

// ----------------------------------------------------------------------------
// Whole-theory compilation
// ----------------------------------------------------------------------------

struct CompiledTheory {
  std::vector<std::string> names;  // parallel to props
  std::vector<PropPtr> props;      // grounded, one per formula
  AtomRegistry registry;
  NodeId root;
  int horizon = 0;
  GroundMode mode = GroundMode::Expand;
};

// Grounds every formula of the theory at evaluation step 0 on `root`.
inline CompiledTheory compile_theory(const TheorySet& theory, const SpatialModel& model,
                                     int horizon, const NodeId& root, GroundMode mode) {
  if (!model.has_node(root)) throw CompileError("UnknownNode", "no node '" + root + "'");
  if (horizon < 0) throw CompileError("BadHorizon", "horizon must be >= 0");
  CompiledTheory out{{}, {}, AtomRegistry(horizon), root, horizon, mode};
  for (const auto& nf : theory) {
    PropPtr p = eliminate_temporal(*nf.formula, 0, horizon);
    out.names.push_back(nf.name);
    out.props.push_back(ground_spatial(p, model, root, mode, out.registry));
  }
  return out;
}

// ----------------------------------------------------------------------------
// DIMACS
// ----------------------------------------------------------------------------

inline void write_dimacs(const Cnf& cnf, std::ostream& out) {
  out << "p cnf " << cnf.num_vars << " " << cnf.clauses.size() << "\n";
  for (const auto& c : cnf.clauses) {
    for (Lit l : c) out << l << " ";
    out << "0\n";
  }
}

// One line per grounding variable: id, node, step, then the term (the term
// goes last because it may contain spaces).
inline void write_varmap(const AtomRegistry& reg, std::ostream& out) {
  for (int v = 1; v <= reg.num_vars(); ++v) {
    GroundAtom a = reg.atom(v);
    out << v << " " << a.node << " " << a.time << " " << a.term << "\n";
  }
}

inline Cnf read_dimacs(std::istream& in) {
  Cnf cnf;
  std::string line;
  bool have_header = false;
  Clause cur;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      int nclauses = 0;
      if (!(ls >> p >> fmt >> cnf.num_vars >> nclauses) || fmt != "cnf")
        throw CompileError("BadDimacs", "malformed problem line");
      cnf.num_original = cnf.num_vars;
      have_header = true;
      continue;
    }
    Lit l = 0;
    while (ls >> l) {
      if (l == 0) {
        cnf.clauses.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(l);
      }
    }
  }
  if (!have_header) throw CompileError("BadDimacs", "missing problem line");
  if (!cur.empty()) cnf.clauses.push_back(cur);
  return cnf;
}

}  // namespace gstl
