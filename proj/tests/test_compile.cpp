// ============================================================================
// tests/test_compile.cpp — temporal elimination, grounding, CNF conversion
// ============================================================================

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "gstl/compile.hpp"
#include "gstl/parse.hpp"
#include "gstl/semantics.hpp"
#include "testutil.hpp"

using namespace gstl;

namespace {

NodeInfo node(const char* id, std::optional<Box> box = std::nullopt) {
  NodeInfo n;
  n.id = id;
  n.label = id;
  n.box = std::move(box);
  return n;
}

Box unit_box_at(int x) {
  return make_box(Rat(x), Rat(x + 1), Rat(0), Rat(1), Rat(0), Rat(1));
}

SpatialModel boxed_model() {
  return SpatialModel::build(
      {{node("root", unit_box_at(0))},
       {node("left", unit_box_at(0)), node("right", unit_box_at(1))},
       {node("a", unit_box_at(0)), node("b", unit_box_at(1)), node("c", unit_box_at(5))}},
      {{"root", "left"}, {"root", "right"}, {"left", "a"}, {"left", "b"}, {"right", "c"}},
      {{"left", "right"}}, Rat(2));
}

// Evaluate an eliminated proposition by deciding each term leaf with the
// evaluator; mirrors what grounding + a satisfying signal-assignment encode.
bool eval_prop(const PropPtr& p, const EvalContext& ctx, const NodeId& root) {
  switch (p->kind) {
    case PropKind::Const: return p->value;
    case PropKind::TermAt: return evaluate_term(ctx, root, p->time, *p->term);
    case PropKind::Not: return !eval_prop(p->lhs, ctx, root);
    case PropKind::And: return eval_prop(p->lhs, ctx, root) && eval_prop(p->rhs, ctx, root);
    case PropKind::Or: return eval_prop(p->lhs, ctx, root) || eval_prop(p->rhs, ctx, root);
    case PropKind::Implies: return !eval_prop(p->lhs, ctx, root) || eval_prop(p->rhs, ctx, root);
    case PropKind::Iff: return eval_prop(p->lhs, ctx, root) == eval_prop(p->rhs, ctx, root);
    case PropKind::Var: break;
  }
  throw std::logic_error("eval_prop: unexpected prop kind");
}

// Evaluate a grounded (var-leaf) proposition under a bit-mask assignment.
bool eval_prop_vars(const PropPtr& p, std::uint64_t mask) {
  switch (p->kind) {
    case PropKind::Const: return p->value;
    case PropKind::Var: return (mask >> (p->var - 1)) & 1u;
    case PropKind::Not: return !eval_prop_vars(p->lhs, mask);
    case PropKind::And: return eval_prop_vars(p->lhs, mask) && eval_prop_vars(p->rhs, mask);
    case PropKind::Or: return eval_prop_vars(p->lhs, mask) || eval_prop_vars(p->rhs, mask);
    case PropKind::Implies:
      return !eval_prop_vars(p->lhs, mask) || eval_prop_vars(p->rhs, mask);
    case PropKind::Iff: return eval_prop_vars(p->lhs, mask) == eval_prop_vars(p->rhs, mask);
    case PropKind::TermAt: break;
  }
  throw std::logic_error("eval_prop_vars: unexpected prop kind");
}

PropPtr gen_prop(testutil::Rng& rng, int depth, int num_vars) {
  if (depth <= 0 || rng.coin(0.25)) return p_var(rng.range(1, num_vars));
  switch (rng.range(0, 4)) {
    case 0: return p_not(gen_prop(rng, depth - 1, num_vars));
    case 1: return p_and(gen_prop(rng, depth - 1, num_vars), gen_prop(rng, depth - 1, num_vars));
    case 2: return p_or(gen_prop(rng, depth - 1, num_vars), gen_prop(rng, depth - 1, num_vars));
    case 3:
      return p_implies(gen_prop(rng, depth - 1, num_vars), gen_prop(rng, depth - 1, num_vars));
    default:
      return p_iff(gen_prop(rng, depth - 1, num_vars), gen_prop(rng, depth - 1, num_vars));
  }
}

// A registry pre-touched so its variable space is exactly 1..num_vars.
AtomRegistry registry_with_vars(int num_vars) {
  // horizon 0 makes each (term, node) pair a single variable.
  AtomRegistry reg(0);
  for (int v = 1; v <= num_vars; ++v) reg.var("p" + std::to_string(v), "n", 0);
  return reg;
}

}  // namespace

TEST_CASE("temporal elimination mirrors the evaluator") {
  SpatialModel m = boxed_model();
  std::vector<NodeId> all = {"root", "left", "right", "a", "b", "c"};
  Interpretation interp =
      testutil::bit_interpretation({"p", "q", "r", "s0", "hot", "cup_full", "_x"});
  const int horizon = 4;

  testutil::Rng rng(987654);
  for (int iter = 0; iter < 500; ++iter) {
    Signal sig(horizon);
    for (const auto& v : all)
      for (int t = 0; t <= horizon; ++t) sig.set(v, t, static_cast<double>(rng.range(0, 127)));
    EvalContext ctx{m, sig, interp};

    FormulaPtr f = testutil::gen_formula(rng, 3);
    NodeId root = rng.pick(all);
    int t = rng.range(0, horizon);
    PropPtr p = eliminate_temporal(*f, t, horizon);
    INFO("formula " << to_string(f) << " at " << root << "," << t);
    REQUIRE(eval_prop(p, ctx, root) == evaluate(ctx, root, t, f));
  }
}

TEST_CASE("elimination rejects out-of-range entry steps as constant false") {
  FormulaPtr f = parse_formula("p");
  REQUIRE(eliminate_temporal(*f, -1, 5)->kind == PropKind::Const);
  REQUIRE_FALSE(eliminate_temporal(*f, -1, 5)->value);
  REQUIRE_FALSE(eliminate_temporal(*f, 6, 5)->value);
  REQUIRE(eliminate_temporal(*f, 5, 5)->kind == PropKind::TermAt);
}

TEST_CASE("until elimination embeds the boundary profile") {
  // U{o}[2,4] at step 0: ph-only at 1, both on 2..4, ps-only at 5.
  FormulaPtr f = parse_formula("ph U{o}[2,4] ps");
  PropPtr p = eliminate_temporal(*f, 0, 6);
  AtomRegistry reg(6);
  SpatialModel m = testutil::single_node_model();
  PropPtr g = ground_spatial(p, m, "n", GroundMode::Expand, reg);
  // Two pairs (ph, ps) × 7 steps; ph block 1..7, ps block 8..14.
  REQUIRE(reg.num_vars() == 14);
  auto var = [&](const char* term, int t) { return reg.var(term, "n", t); };
  std::uint64_t good = 0;
  auto set = [&](int v) { good |= std::uint64_t{1} << (v - 1); };
  set(var("ph", 1));
  for (int t = 2; t <= 4; ++t) { set(var("ph", t)); set(var("ps", t)); }
  set(var("ps", 5));
  REQUIRE(eval_prop_vars(g, good));
  REQUIRE_FALSE(eval_prop_vars(g, good | (std::uint64_t{1} << (var("ps", 1) - 1))));
  REQUIRE_FALSE(eval_prop_vars(g, good & ~(std::uint64_t{1} << (var("ph", 3) - 1))));

  // A window whose post boundary passes the horizon is unsatisfiable.
  REQUIRE(eliminate_temporal(*f, 0, 5)->kind != PropKind::Const);
  REQUIRE(eliminate_temporal(*f, 1, 5)->kind == PropKind::Const);
  REQUIRE_FALSE(eliminate_temporal(*f, 1, 5)->value);
}

TEST_CASE("registry lays variables out pair-major, step-minor") {
  AtomRegistry reg(3);
  REQUIRE(reg.var("p", "n", 0) == 1);
  REQUIRE(reg.var("p", "n", 3) == 4);
  REQUIRE(reg.var("q", "m", 0) == 5);
  REQUIRE(reg.var("q", "m", 2) == 7);
  REQUIRE(reg.var("p", "n", 1) == 2);  // re-touching does not renumber
  REQUIRE(reg.num_vars() == 8);
  REQUIRE(reg.horizon() == 3);
  REQUIRE(reg.time_of(6) == 1);
  REQUIRE(reg.time_of(4) == 3);

  GroundAtom a = reg.atom(7);
  REQUIRE(a.term == "q");
  REQUIRE(a.node == "m");
  REQUIRE(a.time == 2);
}

TEST_CASE("abstract grounding keys whole terms, expand keys chains") {
  SpatialModel m = boxed_model();
  TheorySet th = parse_theory("f: C[exists] on\n");

  CompiledTheory abs = compile_theory(th, m, 2, "left", GroundMode::Abstract);
  REQUIRE(abs.registry.num_vars() == 3);  // one pair × 3 steps
  REQUIRE(abs.registry.atom(1).term == "C[exists] on");
  REQUIRE(abs.registry.atom(1).node == "left");

  CompiledTheory exp = compile_theory(th, m, 2, "left", GroundMode::Expand);
  REQUIRE(exp.registry.num_vars() == 6);  // chains C[a] on and C[b] on
  REQUIRE(exp.registry.atom(1).term == "C[a] on");
  REQUIRE(exp.registry.atom(4).term == "C[b] on");

  REQUIRE_THROWS_AS(compile_theory(th, m, 2, "nowhere", GroundMode::Expand), CompileError);
  REQUIRE_THROWS_AS(compile_theory(th, m, -1, "left", GroundMode::Expand), CompileError);
}

TEST_CASE("distribution CNF is equivalent to the proposition") {
  const int nv = 10;
  AtomRegistry reg = registry_with_vars(nv);
  testutil::Rng rng(5150);
  for (int iter = 0; iter < 60; ++iter) {
    PropPtr p = gen_prop(rng, 3, nv);
    Cnf cnf = to_cnf({p}, reg, CnfMode::Distribution);
    REQUIRE(cnf.num_vars == nv);  // no auxiliaries in this mode
    for (std::uint64_t mask = 0; mask < (1u << nv); ++mask) {
      std::vector<bool> model(nv + 1);
      for (int v = 1; v <= nv; ++v) model[static_cast<std::size_t>(v)] = (mask >> (v - 1)) & 1u;
      bool cnf_val = testutil::assignment_satisfies(cnf, model);
      if (cnf_val != eval_prop_vars(p, mask)) {
        INFO("prop iter " << iter << " mask " << mask);
        REQUIRE(cnf_val == eval_prop_vars(p, mask));
      }
    }
  }
}

TEST_CASE("tseitin CNF projects onto exactly the proposition's models") {
  const int nv = 8;
  AtomRegistry reg = registry_with_vars(nv);
  testutil::Rng rng(31337);
  for (int iter = 0; iter < 40; ++iter) {
    PropPtr p = gen_prop(rng, 3, nv);
    Cnf cnf = to_cnf({p}, reg, CnfMode::Tseitin);
    REQUIRE(cnf.num_original == nv);
    REQUIRE(cnf.num_vars <= 63);

    std::set<std::uint64_t> want;
    for (std::uint64_t mask = 0; mask < (1u << nv); ++mask)
      if (eval_prop_vars(p, mask)) want.insert(mask);

    std::set<std::uint64_t> projected;
    for (std::uint64_t full : testutil::cnf_models_oracle(cnf))
      projected.insert(full & ((std::uint64_t{1} << nv) - 1));
    REQUIRE(projected == want);
    // Auxiliaries are functionally determined, so the full model count equals
    // the projected one.
    REQUIRE(testutil::cnf_models_oracle(cnf).size() == want.size());
  }
}

TEST_CASE("multiple formulas conjoin into one CNF") {
  AtomRegistry reg = registry_with_vars(3);
  PropPtr f1 = p_or(p_var(1), p_var(2));
  PropPtr f2 = p_not(p_var(3));
  Cnf cnf = to_cnf({f1, f2}, reg, CnfMode::Distribution);
  REQUIRE(cnf.clauses.size() == 2);
  std::vector<bool> ok = {false, true, false, false};
  REQUIRE(testutil::assignment_satisfies(cnf, ok));
  std::vector<bool> bad = {false, true, false, true};
  REQUIRE_FALSE(testutil::assignment_satisfies(cnf, bad));
}

TEST_CASE("distribution enforces the clause limit") {
  const int n = 14;
  AtomRegistry reg = registry_with_vars(2 * n);
  // (x1 & y1) | (x2 & y2) | … distributes into 2^n clauses.
  PropPtr p = p_and(p_var(1), p_var(2));
  for (int i = 1; i < n; ++i)
    p = p_or(p, p_and(p_var(2 * i + 1), p_var(2 * i + 2)));
  try {
    to_cnf({p}, reg, CnfMode::Distribution, 1000);
    FAIL("expected CnfBlowup");
  } catch (const CompileError& e) {
    REQUIRE(e.kind == "CnfBlowup");
  }
  // Tseitin mode handles the same proposition in linear size.
  Cnf cnf = to_cnf({p}, reg, CnfMode::Tseitin, 1000);
  REQUIRE(cnf.clauses.size() < 200);
}

TEST_CASE("dimacs output parses back to the same clause set") {
  AtomRegistry reg = registry_with_vars(4);
  PropPtr p = p_iff(p_var(1), p_and(p_var(2), p_or(p_var(3), p_var(4))));
  for (CnfMode mode : {CnfMode::Distribution, CnfMode::Tseitin}) {
    Cnf cnf = to_cnf({p}, reg, mode);
    std::ostringstream out;
    write_dimacs(cnf, out);
    std::istringstream in(out.str());
    Cnf back = read_dimacs(in);
    REQUIRE(back.num_vars == cnf.num_vars);
    REQUIRE(back.clauses == cnf.clauses);
  }
  std::istringstream junk("1 2 0\n");
  REQUIRE_THROWS_AS(read_dimacs(junk), CompileError);
}

TEST_CASE("varmap lists every grounding variable with node, step and term") {
  SpatialModel m = boxed_model();
  TheorySet th = parse_theory("f: G[0,1] C[exists] on\n");
  CompiledTheory ct = compile_theory(th, m, 1, "left", GroundMode::Expand);
  std::ostringstream out;
  write_varmap(ct.registry, out);

  std::istringstream in(out.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 4);
  REQUIRE(lines[0] == "1 left 0 C[a] on");
  REQUIRE(lines[1] == "2 left 1 C[a] on");
  REQUIRE(lines[2] == "3 left 0 C[b] on");
  REQUIRE(lines[3] == "4 left 1 C[b] on");
}
