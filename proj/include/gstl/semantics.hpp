#pragma once
// ============================================================================
// gstl/semantics.hpp — direct evaluation of formulas on a model and signal
// ============================================================================
//
// evaluate() decides a temporal formula at a node and time step against a
// signal; evaluate_term() handles the spatial layer.  Conventions:
//
//  * The signal covers steps 0..H inclusive.  Asking for a verdict at a step
//    outside that range is an error (HorizonExceeded).
//  * Inside temporal operators a referenced step that falls outside 0..H is
//    treated as constant false, so operators stay total: a bounded window
//    reaching past the horizon cannot be satisfied, and an unbounded G is
//    the conjunction over the remaining steps (vacuously true when none are
//    left).
//  * `exists` scopes aggregate conjunctively over the related nodes (empty:
//    true), `forall` disjunctively (empty: false), and explicit lists
//    conjunctively over the intersection with the actual related set (empty:
//    true).
//  * A neighbor pattern other than <*,*,*> needs boxes on both endpoints;
//    evaluating it on a node without one is an error (MissingBox).

#include <string>

#include "gstl/ast.hpp"
#include "gstl/model.hpp"
#include "gstl/signal.hpp"

namespace gstl {

struct EvalContext {
  const SpatialModel& model;
  const Signal& signal;
  const Interpretation& interp;
};

inline bool evaluate_term(const EvalContext& ctx, const NodeId& v, int t,
                          const SpatialTerm& term) {
  switch (term.kind) {
    case TermKind::True: return true;
    case TermKind::False: return false;
    case TermKind::Atom: return atom_holds(ctx.interp, term.atom, ctx.signal.at(v, t));
    case TermKind::Not: return !evaluate_term(ctx, v, t, *term.lhs);
    case TermKind::And:
      return evaluate_term(ctx, v, t, *term.lhs) && evaluate_term(ctx, v, t, *term.rhs);
    case TermKind::Or:
      return evaluate_term(ctx, v, t, *term.lhs) || evaluate_term(ctx, v, t, *term.rhs);
    case TermKind::Parent:
    case TermKind::Child:
    case TermKind::Neighbor:
      break;
  }

  std::vector<NodeId> related = term.kind == TermKind::Parent  ? ctx.model.parents(v)
                                : term.kind == TermKind::Child ? ctx.model.children(v)
                                                               : ctx.model.neighbors(v);

  if (term.kind == TermKind::Neighbor && !term.pattern.wildcard_only()) {
    const auto& vbox = ctx.model.node(v).box;
    if (!vbox) throw EvalError("MissingBox", "node '" + v + "' has no box for pattern matching");
    std::vector<NodeId> kept;
    for (const auto& u : related) {
      const auto& ubox = ctx.model.node(u).box;
      if (!ubox) throw EvalError("MissingBox", "node '" + u + "' has no box for pattern matching");
      if (term.pattern.matches(ca_classify(*vbox, *ubox))) kept.push_back(u);
    }
    related = std::move(kept);
  }

  switch (term.scope.kind) {
    case ScopeKind::Exists:
      for (const auto& u : related)
        if (!evaluate_term(ctx, u, t, *term.lhs)) return false;
      return true;
    case ScopeKind::Forall:
      for (const auto& u : related)
        if (evaluate_term(ctx, u, t, *term.lhs)) return true;
      return false;
    case ScopeKind::Nodes:
      for (const auto& u : term.scope.nodes) {
        if (std::find(related.begin(), related.end(), u) == related.end()) continue;
        if (!evaluate_term(ctx, u, t, *term.lhs)) return false;
      }
      return true;
  }
  throw std::logic_error("evaluate_term: bad scope");
}

namespace semantics_detail {

// Total evaluation: steps outside the signal range are constant false.
inline bool eval_at(const EvalContext& ctx, const NodeId& v, int t, const Formula& f) {
  if (t < 0 || t > ctx.signal.horizon()) return false;
  switch (f.kind) {
    case FormulaKind::Term: return evaluate_term(ctx, v, t, *f.term);
    case FormulaKind::Not: return !eval_at(ctx, v, t, *f.lhs);
    case FormulaKind::And: return eval_at(ctx, v, t, *f.lhs) && eval_at(ctx, v, t, *f.rhs);
    case FormulaKind::Or: return eval_at(ctx, v, t, *f.lhs) || eval_at(ctx, v, t, *f.rhs);
    case FormulaKind::Implies: return !eval_at(ctx, v, t, *f.lhs) || eval_at(ctx, v, t, *f.rhs);
    case FormulaKind::Iff: return eval_at(ctx, v, t, *f.lhs) == eval_at(ctx, v, t, *f.rhs);
    case FormulaKind::Always: {
      int lo = t + f.ivl->lo;
      int hi = f.ivl->hi ? t + *f.ivl->hi : ctx.signal.horizon();
      for (int i = lo; i <= hi; ++i)
        if (!eval_at(ctx, v, i, *f.lhs)) return false;
      return true;
    }
    case FormulaKind::Eventually: {
      for (int i = t + f.ivl->lo; i <= t + *f.ivl->hi; ++i)
        if (eval_at(ctx, v, i, *f.lhs)) return true;
      return false;
    }
    case FormulaKind::Until: {
      for (const auto& c : until_step_constraints(f.rel, f.ivl, t)) {
        if (c.time < 0 || c.time > ctx.signal.horizon()) return false;
        if (eval_at(ctx, v, c.time, *f.lhs) != c.phi_true) return false;
        if (eval_at(ctx, v, c.time, *f.rhs) != c.psi_true) return false;
      }
      return true;
    }
  }
  throw std::logic_error("eval_at: bad formula kind");
}

}  // namespace semantics_detail

inline bool evaluate(const EvalContext& ctx, const NodeId& v, int t, const Formula& f) {
  if (!ctx.model.has_node(v)) throw EvalError("UnknownNode", "no node '" + v + "' in the model");
  if (t < 0 || t > ctx.signal.horizon())
    throw EvalError("HorizonExceeded", "step " + std::to_string(t) + " is outside 0.." +
                                           std::to_string(ctx.signal.horizon()));
  return semantics_detail::eval_at(ctx, v, t, f);
}

inline bool evaluate(const EvalContext& ctx, const NodeId& v, int t, const FormulaPtr& f) {
  return evaluate(ctx, v, t, *f);
}

// True iff every formula of the theory holds at (v, t).
inline bool satisfies_all(const EvalContext& ctx, const NodeId& v, int t, const TheorySet& th) {
  for (const auto& nf : th)
    if (!evaluate(ctx, v, t, nf.formula)) return false;
  return true;
}

}  // namespace gstl
