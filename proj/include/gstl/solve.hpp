#pragma once
// ============================================================================
// gstl/solve.hpp — SAT solving, model enumeration, and exact counting
// ============================================================================
//
// A small conflict-driven solver: two-watched-literal propagation, first-UIP
// clause learning with backjumping, and a deterministic branching rule
// (lowest-index unassigned variable, tried false first).  No restarts and no
// clause deletion; instances produced by the compiler are small.  Every Sat
// answer is re-verified against the original clauses before it is returned.
//
// enumerate_models lists satisfying assignments projected onto the original
// (grounding) variables by adding a blocking clause per model found; with a
// Tseitin CNF the auxiliary variables are functionally determined, so the
// projected enumeration is exact.  count_models is a propagate-and-branch
// counter that credits 2^k for the k variables left free at a satisfied
// leaf; it requires a CNF without auxiliary variables (distribution mode),
// where counts need no projection.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gstl/compile.hpp"

namespace gstl {

enum class SolveStatus { Sat, Unsat, Limit };

struct SolveLimits {
  std::uint64_t max_decisions = UINT64_MAX;
  std::uint64_t max_conflicts = UINT64_MAX;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Limit;
  std::vector<bool> model;  // 1-based; meaningful when status == Sat
  std::uint64_t decisions = 0;
  std::uint64_t conflicts = 0;
};

class SatSolver {
 public:
  explicit SatSolver(int num_vars) : nvars_(num_vars) {
    assign_.assign(nvars_ + 1, 0);
    level_.assign(nvars_ + 1, 0);
    reason_.assign(nvars_ + 1, -1);
    watches_.assign(2 * (nvars_ + 1), {});
  }

  // Clauses may be added between solve() calls; solving restarts from the
  // root level, so previously learned clauses stay valid.
  void add_clause(Clause c) {
    std::sort(c.begin(), c.end(), [](Lit a, Lit b) {
      return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
    });
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      if (c[i] == -c[i + 1]) return;  // tautology
    if (c.empty()) {
      contradiction_ = true;
      return;
    }
    if (c.size() == 1) {
      root_units_.push_back(c[0]);
      return;
    }
    attach(static_cast<int>(clauses_.size()), c);
    clauses_.push_back(std::move(c));
    num_input_ = clauses_.size();
  }

  SolveResult solve(const SolveLimits& lims = {}) {
    SolveResult res;
    backtrack(0);
    if (contradiction_) {
      res.status = SolveStatus::Unsat;
      return res;
    }
    for (Lit u : root_units_) {
      if (value(u) < 0) {
        res.status = SolveStatus::Unsat;
        return res;
      }
      if (value(u) == 0) enqueue(u, -1);
    }
    // Replay propagation over the whole trail so clauses added since the
    // last call are seen even when their variables are already assigned.
    qhead_ = 0;
    while (true) {
      int confl = propagate();
      if (confl >= 0) {
        ++res.conflicts;
        if (level_now_ == 0) {
          res.status = SolveStatus::Unsat;
          return res;
        }
        auto [learnt, back] = analyze(confl);
        backtrack(back);
        if (learnt.size() == 1) {
          root_units_.push_back(learnt[0]);
          if (value(learnt[0]) == 0) enqueue(learnt[0], -1);
        } else {
          int ci = static_cast<int>(clauses_.size());
          attach(ci, learnt);
          clauses_.push_back(std::move(learnt));
          enqueue(clauses_.back()[0], ci);
        }
        if (res.conflicts >= lims.max_conflicts) {
          res.status = SolveStatus::Limit;
          return res;
        }
        continue;
      }
      int v = next_unassigned();
      if (v == 0) {
        res.status = SolveStatus::Sat;
        res.model.assign(nvars_ + 1, false);
        for (int i = 1; i <= nvars_; ++i) res.model[i] = assign_[i] > 0;
        if (!verify(res.model)) throw std::logic_error("solver returned an invalid model");
        return res;
      }
      if (res.decisions >= lims.max_decisions) {
        res.status = SolveStatus::Limit;
        return res;
      }
      ++res.decisions;
      ++level_now_;
      enqueue(-v, -1);  // try false first
    }
  }

  // True iff `model` (1-based) satisfies every input clause and root unit.
  bool verify(const std::vector<bool>& model) const {
    auto sat_lit = [&](Lit l) {
      int v = std::abs(l);
      return l > 0 ? model[v] : !model[v];
    };
    for (Lit u : root_units_)
      if (!sat_lit(u)) return false;
    for (std::size_t i = 0; i < num_input_; ++i) {
      bool ok = false;
      for (Lit l : clauses_[i])
        if (sat_lit(l)) { ok = true; break; }
      if (!ok) return false;
    }
    return true;
  }

 private:
  static std::size_t widx(Lit l) {
    return 2 * static_cast<std::size_t>(std::abs(l)) + (l < 0 ? 1 : 0);
  }

  int value(Lit l) const {  // +1 true, -1 false, 0 unassigned
    int v = assign_[std::abs(l)];
    return l > 0 ? v : -v;
  }

  void attach(int ci, const Clause& c) {
    watches_[widx(c[0])].push_back(ci);
    watches_[widx(c[1])].push_back(ci);
  }

  void enqueue(Lit l, int reason) {
    assign_[std::abs(l)] = l > 0 ? 1 : -1;
    level_[std::abs(l)] = level_now_;
    reason_[std::abs(l)] = reason;
    trail_.push_back(l);
  }

  void backtrack(int lvl) {
    while (!trail_.empty() && level_[std::abs(trail_.back())] > lvl) {
      assign_[std::abs(trail_.back())] = 0;
      trail_.pop_back();
    }
    qhead_ = trail_.size();
    level_now_ = lvl;
  }

  int next_unassigned() const {
    for (int v = 1; v <= nvars_; ++v)
      if (assign_[v] == 0) return v;
    return 0;
  }

  // Returns the index of a conflicting clause, or -1.
  int propagate() {
    while (qhead_ < trail_.size()) {
      Lit p = trail_[qhead_++];       // p just became true
      auto& wl = watches_[widx(-p)];  // clauses watching the now-false -p
      std::size_t keep = 0;
      for (std::size_t wi = 0; wi < wl.size(); ++wi) {
        int ci = wl[wi];
        Clause& c = clauses_[static_cast<std::size_t>(ci)];
        if (c[0] == -p) std::swap(c[0], c[1]);  // false watch at position 1
        if (value(c[0]) > 0) {
          wl[keep++] = ci;  // satisfied; keep watching
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) >= 0) {
            std::swap(c[1], c[k]);
            watches_[widx(c[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        wl[keep++] = ci;
        if (value(c[0]) == 0) {
          enqueue(c[0], ci);
        } else {
          for (std::size_t rest = wi + 1; rest < wl.size(); ++rest) wl[keep++] = wl[rest];
          wl.resize(keep);
          return ci;
        }
      }
      wl.resize(keep);
    }
    return -1;
  }

  // First-UIP learning; returns the learnt clause (asserting literal first)
  // and the backjump level.
  std::pair<Clause, int> analyze(int confl) {
    Clause learnt;
    std::vector<bool> seen(nvars_ + 1, false);
    int counter = 0;
    Lit p = 0;
    std::size_t idx = trail_.size();
    int ci = confl;
    while (true) {
      const Clause& c = clauses_[static_cast<std::size_t>(ci)];
      for (Lit q : c) {
        // In a reason clause, skip the literal it asserted (-p): resolving on
        // it must not re-mark the variable we just popped.
        if (p != 0 && q == -p) continue;
        int v = std::abs(q);
        if (!seen[v] && level_[v] > 0) {
          seen[v] = true;
          if (level_[v] == level_now_) ++counter;
          else learnt.push_back(q);
        }
      }
      while (!seen[std::abs(trail_[idx - 1])]) --idx;
      p = -trail_[idx - 1];
      seen[std::abs(p)] = false;
      --idx;
      if (--counter == 0) break;
      ci = reason_[std::abs(p)];
    }
    learnt.insert(learnt.begin(), p);
    int back = 0;
    std::size_t snd = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
      if (level_[std::abs(learnt[i])] > back) {
        back = level_[std::abs(learnt[i])];
        snd = i;
      }
    }
    if (learnt.size() > 1) std::swap(learnt[1], learnt[snd]);
    return {std::move(learnt), back};
  }

  int nvars_;
  bool contradiction_ = false;
  std::vector<Clause> clauses_;
  std::size_t num_input_ = 0;  // learned clauses sit past this index
  std::vector<Lit> root_units_;
  std::vector<int8_t> assign_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<std::vector<int>> watches_;
  std::vector<Lit> trail_;
  std::size_t qhead_ = 0;
  int level_now_ = 0;
};

inline SolveResult solve_cnf(const Cnf& cnf, const SolveLimits& lims = {}) {
  SatSolver s(cnf.num_vars);
  for (const auto& c : cnf.clauses) s.add_clause(c);
  return s.solve(lims);
}

// ----------------------------------------------------------------------------
// Enumeration and counting
// ----------------------------------------------------------------------------

// Calls `sink` with each satisfying assignment projected onto variables
// 1..cnf.num_original (index 0 unused), in deterministic order, blocking each
// projection as it is found.  Returns the number of projected models, or
// nullopt if a limit was hit.
inline std::optional<std::uint64_t> enumerate_models(
    const Cnf& cnf, std::uint64_t max_models,
    const std::function<void(const std::vector<bool>&)>& sink = nullptr,
    const SolveLimits& lims = {}) {
  SatSolver s(cnf.num_vars);
  for (const auto& c : cnf.clauses) s.add_clause(c);
  std::uint64_t n = 0;
  while (n < max_models) {
    SolveResult r = s.solve(lims);
    if (r.status == SolveStatus::Limit) return std::nullopt;
    if (r.status == SolveStatus::Unsat) return n;
    ++n;
    std::vector<bool> proj(r.model.begin(),
                           r.model.begin() + cnf.num_original + 1);
    if (sink) sink(proj);
    Clause block;
    block.reserve(static_cast<std::size_t>(cnf.num_original));
    for (int v = 1; v <= cnf.num_original; ++v) block.push_back(r.model[v] ? -v : v);
    if (block.empty()) return n;  // no variables: the single empty model
    s.add_clause(std::move(block));
  }
  return std::nullopt;  // hit max_models before exhausting the space
}

// Exact model count over all cnf.num_vars variables by propagation and
// branching; a satisfied leaf with k free variables contributes 2^k.  Only
// valid when every variable is a grounding variable (no Tseitin aux), which
// `to_cnf` guarantees in Distribution mode.
inline std::optional<std::uint64_t> count_models(const Cnf& cnf,
                                                 std::uint64_t node_limit = 1u << 24) {
  if (cnf.num_vars != cnf.num_original)
    throw CompileError("BadCount", "exact counting needs a CNF without auxiliary variables");
  const int n = cnf.num_vars;
  std::vector<int8_t> assign(static_cast<std::size_t>(n) + 1, 0);
  std::uint64_t visited = 0;

  auto lit_val = [&](Lit l) {
    int v = assign[static_cast<std::size_t>(std::abs(l))];
    return l > 0 ? v : -v;
  };

  std::function<std::optional<std::uint64_t>()> go =
      [&]() -> std::optional<std::uint64_t> {
    if (++visited > node_limit) return std::nullopt;
    // Unit propagation to fixpoint over the full clause list.
    std::vector<int> fixed;
    while (true) {
      bool changed = false;
      for (const auto& c : cnf.clauses) {
        int unassigned = 0;
        Lit unit = 0;
        bool sat = false;
        for (Lit l : c) {
          int v = lit_val(l);
          if (v > 0) { sat = true; break; }
          if (v == 0) { ++unassigned; unit = l; }
        }
        if (sat) continue;
        if (unassigned == 0) {  // conflict
          for (int v : fixed) assign[static_cast<std::size_t>(v)] = 0;
          return 0;
        }
        if (unassigned == 1) {
          assign[static_cast<std::size_t>(std::abs(unit))] = unit > 0 ? 1 : -1;
          fixed.push_back(std::abs(unit));
          changed = true;
        }
      }
      if (!changed) break;
    }
    // Branch on the lowest unassigned variable of an unsatisfied clause.
    int branch = 0;
    for (const auto& c : cnf.clauses) {
      bool sat = false;
      int lowest = 0;
      for (Lit l : c) {
        int v = lit_val(l);
        if (v > 0) { sat = true; break; }
        if (v == 0) {
          int var = std::abs(l);
          if (lowest == 0 || var < lowest) lowest = var;
        }
      }
      if (!sat && (branch == 0 || lowest < branch)) branch = lowest;
    }
    std::optional<std::uint64_t> result;
    if (branch == 0) {
      // All clauses satisfied: remaining variables are free.
      int free_vars = 0;
      for (int v = 1; v <= n; ++v)
        if (assign[static_cast<std::size_t>(v)] == 0) ++free_vars;
      if (free_vars >= 64) {
        for (int v : fixed) assign[static_cast<std::size_t>(v)] = 0;
        throw CompileError("CountOverflow", "model count does not fit in 64 bits");
      }
      result = std::uint64_t{1} << free_vars;
    } else {
      std::uint64_t total = 0;
      bool limited = false;
      for (int sign = -1; sign <= 1 && !limited; sign += 2) {
        assign[static_cast<std::size_t>(branch)] = static_cast<int8_t>(sign);
        auto sub = go();
        assign[static_cast<std::size_t>(branch)] = 0;
        if (!sub) limited = true;
        else total += *sub;
      }
      if (!limited) result = total;
    }
    for (int v : fixed) assign[static_cast<std::size_t>(v)] = 0;
    return result;
  };

  return go();
}

// The earliest step t such that the clauses mentioning only variables with
// step <= t are already unsatisfiable; nullopt when even the full CNF is
// satisfiable.  Expects a CNF over grounding variables only, whose step is
// recoverable from the variable id.
inline std::optional<int> first_unsat_prefix_time(const Cnf& cnf, const AtomRegistry& reg,
                                                  const SolveLimits& lims = {}) {
  if (cnf.num_vars != cnf.num_original)
    throw CompileError("BadPrefix", "prefix analysis needs a CNF without auxiliary variables");
  for (int t = 0; t <= reg.horizon(); ++t) {
    Cnf sub;
    sub.num_vars = cnf.num_vars;
    sub.num_original = cnf.num_original;
    for (const auto& c : cnf.clauses) {
      bool in = true;
      for (Lit l : c)
        if (reg.time_of(std::abs(l)) > t) { in = false; break; }
      if (in) sub.clauses.push_back(c);
    }
    SolveResult r = solve_cnf(sub, lims);
    if (r.status == SolveStatus::Unsat) return t;
    if (r.status == SolveStatus::Limit) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace gstl
