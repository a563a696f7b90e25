#pragma once
// ============================================================================
// gstl/expand.hpp — quantifier expansion of spatial terms over a model
// ============================================================================
//
// expand_term rewrites a spatial term, evaluated at a given node, into an
// equivalent term in which every parent / child / neighbor operator carries a
// singleton explicit scope naming a concrete node.  Boolean structure is
// pushed out through the operators (sound for singleton scopes), so the
// leaves of the result are chains of singleton operators ending in an atom,
// e.g. `C[reg_a] N[reg_b]<e,e,m> plate`.  Those chains are what the grounder
// turns into propositional variables.
//
// Scope aggregation follows the defining equations: `exists` combines the
// related nodes conjunctively (empty set: true), `forall` disjunctively
// (empty set: false), and an explicit list combines its intersection with
// the actual related set conjunctively (empty intersection: true).
//
// Neighbor patterns are resolved here when both endpoint boxes are known:
// non-matching neighbors are dropped from the related set before
// aggregation.  When either box is missing the neighbor is kept and the
// pattern is preserved in the chain, leaving the ground atom pattern-blind.

#include <string>
#include <vector>

#include "gstl/ast.hpp"
#include "gstl/model.hpp"

namespace gstl {

namespace expand_detail {

// Wrap one singleton operator level around an already-expanded body,
// distributing it over the body's boolean structure.
inline TermPtr wrap(const SpatialTerm& op, const NodeId& target, const TermPtr& body) {
  switch (body->kind) {
    case TermKind::True: return t_true();
    case TermKind::False: return t_false();
    case TermKind::Not: return t_not(wrap(op, target, body->lhs));
    case TermKind::And: return t_and(wrap(op, target, body->lhs), wrap(op, target, body->rhs));
    case TermKind::Or: return t_or(wrap(op, target, body->lhs), wrap(op, target, body->rhs));
    default: break;  // Atom or an operator chain: attach the hop here
  }
  Scope single = Scope::of({target});
  switch (op.kind) {
    case TermKind::Parent: return t_parent(single, body);
    case TermKind::Child: return t_child(single, body);
    case TermKind::Neighbor: return t_neighbor(single, op.pattern, body);
    default: throw std::logic_error("wrap: not a spatial operator");
  }
}

}  // namespace expand_detail

inline TermPtr expand_term(const SpatialModel& m, const NodeId& v, const TermPtr& t) {
  using expand_detail::wrap;
  switch (t->kind) {
    case TermKind::True:
    case TermKind::False:
    case TermKind::Atom:
      return t;
    case TermKind::Not:
      return t_not(expand_term(m, v, t->lhs));
    case TermKind::And:
      return t_and(expand_term(m, v, t->lhs), expand_term(m, v, t->rhs));
    case TermKind::Or:
      return t_or(expand_term(m, v, t->lhs), expand_term(m, v, t->rhs));
    case TermKind::Parent:
    case TermKind::Child:
    case TermKind::Neighbor:
      break;
  }

  std::vector<NodeId> related = t->kind == TermKind::Parent  ? m.parents(v)
                                : t->kind == TermKind::Child ? m.children(v)
                                                             : m.neighbors(v);

  if (t->kind == TermKind::Neighbor && !t->pattern.wildcard_only()) {
    const auto& vbox = m.node(v).box;
    std::vector<NodeId> kept;
    for (const auto& u : related) {
      const auto& ubox = m.node(u).box;
      if (vbox && ubox) {
        if (t->pattern.matches(ca_classify(*vbox, *ubox))) kept.push_back(u);
      } else {
        kept.push_back(u);  // unresolved: stay pattern-blind
      }
    }
    related = std::move(kept);
  }

  bool conjunctive = true;
  std::vector<NodeId> targets;
  switch (t->scope.kind) {
    case ScopeKind::Exists:
      targets = related;
      break;
    case ScopeKind::Forall:
      targets = related;
      conjunctive = false;
      break;
    case ScopeKind::Nodes:
      for (const auto& u : t->scope.nodes)
        if (std::find(related.begin(), related.end(), u) != related.end())
          targets.push_back(u);
      break;
  }
  if (targets.empty()) return conjunctive ? t_true() : t_false();

  TermPtr out;
  for (const auto& u : targets) {
    TermPtr piece = wrap(*t, u, expand_term(m, u, t->lhs));
    out = !out ? piece : (conjunctive ? t_and(out, piece) : t_or(out, piece));
  }
  return out;
}

}  // namespace gstl
