#pragma once
// ============================================================================
// gstl/ast.hpp — spatial terms and temporal formulas
// ============================================================================
//
// The logic is stratified: spatial terms (atoms, boolean connectives, and the
// parent / child / neighbor operators) may appear inside temporal formulas,
// but no temporal operator may appear inside a spatial term.  The two AST
// types enforce that by construction.
//
// Spatial operators carry a scope: the keyword quantifiers `exists` and
// `forall`, or an explicit node list.  Per the defining equations, `exists`
// expands to a conjunction over the related nodes and `forall` to a
// disjunction; an explicit list quantifies universally over its intersection
// with the actual related set.  (The naming is kept as defined even though
// it is the reverse of the usual reading; see README.)
//
// Nodes are immutable and shared; printing is canonical (fully parenthesized
// binary connectives, sorted scope lists), and parse(print(f)) == f.

#include <algorithm>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gstl/box.hpp"

namespace gstl {

// Also declared by model.hpp; the AST only needs the name, not the model.
using NodeId = std::string;

// ----------------------------------------------------------------------------
// Spatial terms
// ----------------------------------------------------------------------------

enum class ScopeKind { Exists, Forall, Nodes };

struct Scope {
  ScopeKind kind = ScopeKind::Exists;
  std::vector<NodeId> nodes;  // Nodes only; kept sorted and deduplicated

  static Scope exists() { return {ScopeKind::Exists, {}}; }
  static Scope forall() { return {ScopeKind::Forall, {}}; }
  static Scope of(std::vector<NodeId> ids) {
    if (ids.empty()) throw std::invalid_argument("empty scope node list");
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return {ScopeKind::Nodes, std::move(ids)};
  }
  friend bool operator==(const Scope&, const Scope&) = default;
};

inline std::string to_string(const Scope& s) {
  switch (s.kind) {
    case ScopeKind::Exists: return "exists";
    case ScopeKind::Forall: return "forall";
    case ScopeKind::Nodes: {
      std::string out;
      for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        if (i) out += ",";
        out += s.nodes[i];
      }
      return out;
    }
  }
  return {};
}

enum class TermKind { True, False, Atom, Not, And, Or, Parent, Child, Neighbor };

struct SpatialTerm;
using TermPtr = std::shared_ptr<const SpatialTerm>;

struct SpatialTerm {
  TermKind kind = TermKind::True;
  std::string atom;   // Atom
  TermPtr lhs, rhs;   // Not/Parent/Child/Neighbor use lhs only
  Scope scope;        // Parent/Child/Neighbor
  CaPattern pattern;  // Neighbor
};

inline TermPtr t_make(TermKind k) {
  auto t = std::make_shared<SpatialTerm>();
  t->kind = k;
  return t;
}
inline TermPtr t_true() {
  static const TermPtr v = t_make(TermKind::True);
  return v;
}
inline TermPtr t_false() {
  static const TermPtr v = t_make(TermKind::False);
  return v;
}
inline TermPtr t_atom(std::string name) {
  if (name.empty()) throw std::invalid_argument("empty atom name");
  auto t = std::make_shared<SpatialTerm>();
  t->kind = TermKind::Atom;
  t->atom = std::move(name);
  return t;
}
inline TermPtr t_not(TermPtr a) {
  auto t = std::make_shared<SpatialTerm>();
  t->kind = TermKind::Not;
  t->lhs = std::move(a);
  return t;
}
inline TermPtr t_and(TermPtr a, TermPtr b) {
  auto t = std::make_shared<SpatialTerm>();
  t->kind = TermKind::And;
  t->lhs = std::move(a);
  t->rhs = std::move(b);
  return t;
}
inline TermPtr t_or(TermPtr a, TermPtr b) {
  auto t = std::make_shared<SpatialTerm>();
  t->kind = TermKind::Or;
  t->lhs = std::move(a);
  t->rhs = std::move(b);
  return t;
}
inline TermPtr t_parent(Scope s, TermPtr a) {
  auto t = std::make_shared<SpatialTerm>();
  t->kind = TermKind::Parent;
  t->scope = std::move(s);
  t->lhs = std::move(a);
  return t;
}
inline TermPtr t_child(Scope s, TermPtr a) {
  auto t = std::make_shared<SpatialTerm>();
  t->kind = TermKind::Child;
  t->scope = std::move(s);
  t->lhs = std::move(a);
  return t;
}
inline TermPtr t_neighbor(Scope s, CaPattern p, TermPtr a) {
  auto t = std::make_shared<SpatialTerm>();
  t->kind = TermKind::Neighbor;
  t->scope = std::move(s);
  t->pattern = p;
  t->lhs = std::move(a);
  return t;
}

// ----------------------------------------------------------------------------
// Temporal formulas
// ----------------------------------------------------------------------------

// hi == nullopt means unbounded ("inf"), allowed for Always only.
struct TimeInterval {
  int lo = 0;
  std::optional<int> hi;

  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

inline TimeInterval bounded(int lo, int hi) {
  if (lo < 0 || hi < lo) throw std::invalid_argument("bad time interval");
  return {lo, hi};
}
inline TimeInterval unbounded(int lo) {
  if (lo < 0) throw std::invalid_argument("bad time interval");
  return {lo, std::nullopt};
}

inline std::string to_string(const TimeInterval& i) {
  return "[" + std::to_string(i.lo) + "," + (i.hi ? std::to_string(*i.hi) : "inf") + "]";
}

// Until is decorated with one of the seven base interval relations; b, o, d
// and e take a time interval, m, s and f do not.
inline bool until_takes_interval(IaBase rel) {
  switch (rel) {
    case IaBase::Before:
    case IaBase::Overlaps:
    case IaBase::During:
    case IaBase::Equals:
      return true;
    case IaBase::Meets:
    case IaBase::Starts:
    case IaBase::Finishes:
      return false;
  }
  throw std::logic_error("until_takes_interval");
}

// Until is interpreted through per-step constraints on its two operands: the
// decorating interval relation fixes, for each referenced step, whether each
// operand must hold or must fail there.  The interval forms (b, o, d, e)
// constrain every step of the shifted window plus the two boundary steps just
// outside it; the point forms (m, s, f) constrain only the steps adjacent to
// the evaluation time.  A referenced step outside the signal range makes the
// whole until false; that rule lives with the consumers.
struct UntilStep {
  int time;       // absolute step index
  bool phi_true;  // required truth value of the left operand at `time`
  bool psi_true;  // required truth value of the right operand at `time`
};

inline std::vector<UntilStep> until_step_constraints(IaBase rel,
                                                     const std::optional<TimeInterval>& ivl,
                                                     int t) {
  std::vector<UntilStep> out;
  if (until_takes_interval(rel)) {
    int lo = t + ivl->lo, hi = t + *ivl->hi;
    bool mid_phi = rel != IaBase::Before;
    bool mid_psi = rel != IaBase::Before;
    bool pre_phi, pre_psi, post_phi, post_psi;
    switch (rel) {
      case IaBase::Before:
      case IaBase::Overlaps:
        pre_phi = true;  pre_psi = false;
        post_phi = false; post_psi = true;
        break;
      case IaBase::During:
        pre_phi = false; pre_psi = true;
        post_phi = false; post_psi = true;
        break;
      case IaBase::Equals:
        pre_phi = false; pre_psi = false;
        post_phi = false; post_psi = false;
        break;
      default:
        throw std::logic_error("until_step_constraints");
    }
    out.push_back({lo - 1, pre_phi, pre_psi});
    for (int i = lo; i <= hi; ++i) out.push_back({i, mid_phi, mid_psi});
    out.push_back({hi + 1, post_phi, post_psi});
  } else {
    switch (rel) {
      case IaBase::Meets:
        out.push_back({t - 1, true, false});
        out.push_back({t + 1, false, true});
        break;
      case IaBase::Starts:
        out.push_back({t - 1, false, false});
        out.push_back({t + 1, true, true});
        break;
      case IaBase::Finishes:
        out.push_back({t - 1, true, true});
        out.push_back({t + 1, false, false});
        break;
      default:
        throw std::logic_error("until_step_constraints");
    }
  }
  return out;
}

enum class FormulaKind { Term, Not, And, Or, Implies, Iff, Always, Eventually, Until };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FormulaKind kind = FormulaKind::Term;
  TermPtr term;                     // Term
  FormulaPtr lhs, rhs;              // unary ops use lhs
  std::optional<TimeInterval> ivl;  // Always/Eventually/Until(b,o,d,e)
  IaBase rel = IaBase::Before;      // Until
};

inline FormulaPtr f_term(TermPtr t) {
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::Term;
  f->term = std::move(t);
  return f;
}
inline FormulaPtr f_atom(std::string name) { return f_term(t_atom(std::move(name))); }
inline FormulaPtr f_not(FormulaPtr a) {
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::Not;
  f->lhs = std::move(a);
  return f;
}
inline FormulaPtr f_binary(FormulaKind k, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->lhs = std::move(a);
  f->rhs = std::move(b);
  return f;
}
inline FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  return f_binary(FormulaKind::And, std::move(a), std::move(b));
}
inline FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  return f_binary(FormulaKind::Or, std::move(a), std::move(b));
}
inline FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
  return f_binary(FormulaKind::Implies, std::move(a), std::move(b));
}
inline FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) {
  return f_binary(FormulaKind::Iff, std::move(a), std::move(b));
}
inline FormulaPtr f_always(TimeInterval i, FormulaPtr a) {
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::Always;
  f->ivl = i;
  f->lhs = std::move(a);
  return f;
}
inline FormulaPtr f_eventually(TimeInterval i, FormulaPtr a) {
  if (!i.hi) throw std::invalid_argument("eventually requires a bounded interval");
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::Eventually;
  f->ivl = i;
  f->lhs = std::move(a);
  return f;
}
inline FormulaPtr f_until(IaBase rel, std::optional<TimeInterval> i, FormulaPtr a,
                          FormulaPtr b) {
  if (until_takes_interval(rel)) {
    if (!i || !i->hi) throw std::invalid_argument("this until form requires a bounded interval");
  } else if (i) {
    throw std::invalid_argument("this until form takes no interval");
  }
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::Until;
  f->rel = rel;
  f->ivl = i;
  f->lhs = std::move(a);
  f->rhs = std::move(b);
  return f;
}

// ----------------------------------------------------------------------------
// Printing (canonical), equality, atom collection
// ----------------------------------------------------------------------------

inline void print_term(std::ostream& out, const SpatialTerm& t) {
  switch (t.kind) {
    case TermKind::True: out << "true"; return;
    case TermKind::False: out << "false"; return;
    case TermKind::Atom: out << t.atom; return;
    case TermKind::Not:
      out << "!";
      print_term(out, *t.lhs);
      return;
    case TermKind::And:
    case TermKind::Or:
      out << "(";
      print_term(out, *t.lhs);
      out << (t.kind == TermKind::And ? " & " : " | ");
      print_term(out, *t.rhs);
      out << ")";
      return;
    case TermKind::Parent:
    case TermKind::Child:
      out << (t.kind == TermKind::Parent ? "P[" : "C[") << to_string(t.scope) << "] ";
      print_term(out, *t.lhs);
      return;
    case TermKind::Neighbor:
      out << "N[" << to_string(t.scope) << "]" << to_string(t.pattern) << " ";
      print_term(out, *t.lhs);
      return;
  }
}

inline std::string to_string(const SpatialTerm& t) {
  std::ostringstream out;
  print_term(out, t);
  return out.str();
}
inline std::string to_string(const TermPtr& t) { return to_string(*t); }

inline void print_formula(std::ostream& out, const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Term: print_term(out, *f.term); return;
    case FormulaKind::Not:
      out << "!";
      print_formula(out, *f.lhs);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Iff: {
      const char* op = f.kind == FormulaKind::And       ? " & "
                       : f.kind == FormulaKind::Or      ? " | "
                       : f.kind == FormulaKind::Implies ? " -> "
                                                        : " <-> ";
      out << "(";
      print_formula(out, *f.lhs);
      out << op;
      print_formula(out, *f.rhs);
      out << ")";
      return;
    }
    case FormulaKind::Always:
    case FormulaKind::Eventually:
      out << (f.kind == FormulaKind::Always ? "G" : "F") << to_string(*f.ivl) << " ";
      print_formula(out, *f.lhs);
      return;
    case FormulaKind::Until:
      out << "(";
      print_formula(out, *f.lhs);
      out << " U{" << to_string(IaRelation{f.rel, false}) << "}";
      if (f.ivl) out << to_string(*f.ivl);
      out << " ";
      print_formula(out, *f.rhs);
      out << ")";
      return;
  }
}

inline std::string to_string(const Formula& f) {
  std::ostringstream out;
  print_formula(out, f);
  return out.str();
}
inline std::string to_string(const FormulaPtr& f) { return to_string(*f); }

inline bool equal(const SpatialTerm& a, const SpatialTerm& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TermKind::True:
    case TermKind::False: return true;
    case TermKind::Atom: return a.atom == b.atom;
    case TermKind::Not: return equal(*a.lhs, *b.lhs);
    case TermKind::And:
    case TermKind::Or: return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    case TermKind::Parent:
    case TermKind::Child: return a.scope == b.scope && equal(*a.lhs, *b.lhs);
    case TermKind::Neighbor:
      return a.scope == b.scope && a.pattern == b.pattern && equal(*a.lhs, *b.lhs);
  }
  return false;
}

inline bool equal(const Formula& a, const Formula& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case FormulaKind::Term: return equal(*a.term, *b.term);
    case FormulaKind::Not: return equal(*a.lhs, *b.lhs);
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Iff: return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    case FormulaKind::Always:
    case FormulaKind::Eventually: return a.ivl == b.ivl && equal(*a.lhs, *b.lhs);
    case FormulaKind::Until:
      return a.rel == b.rel && a.ivl == b.ivl && equal(*a.lhs, *b.lhs) &&
             equal(*a.rhs, *b.rhs);
  }
  return false;
}

inline void collect_atoms(const SpatialTerm& t, std::set<std::string>& out) {
  switch (t.kind) {
    case TermKind::True:
    case TermKind::False: return;
    case TermKind::Atom: out.insert(t.atom); return;
    case TermKind::Not:
    case TermKind::Parent:
    case TermKind::Child:
    case TermKind::Neighbor: collect_atoms(*t.lhs, out); return;
    case TermKind::And:
    case TermKind::Or:
      collect_atoms(*t.lhs, out);
      collect_atoms(*t.rhs, out);
      return;
  }
}

inline void collect_atoms(const Formula& f, std::set<std::string>& out) {
  switch (f.kind) {
    case FormulaKind::Term: collect_atoms(*f.term, out); return;
    case FormulaKind::Not:
    case FormulaKind::Always:
    case FormulaKind::Eventually: collect_atoms(*f.lhs, out); return;
    default:
      collect_atoms(*f.lhs, out);
      collect_atoms(*f.rhs, out);
      return;
  }
}

inline bool equal(const TermPtr& a, const TermPtr& b) { return equal(*a, *b); }
inline bool equal(const FormulaPtr& a, const FormulaPtr& b) { return equal(*a, *b); }

inline std::set<std::string> atoms_of(const Formula& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}
inline std::set<std::string> atoms_of(const FormulaPtr& f) { return atoms_of(*f); }

// A theory is an ordered list of named formulas.
struct NamedFormula {
  std::string name;
  FormulaPtr formula;
};
using TheorySet = std::vector<NamedFormula>;

}  // namespace gstl
