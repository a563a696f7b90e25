// ============================================================================
// gstl — command line front end
// ============================================================================
//
//   gstl check    decide consistency of a theory over a finite signal range
//   gstl count    count satisfying assignments of the grounded theory
//   gstl compile  write the grounded theory as DIMACS CNF plus a variable map
//   gstl eval     evaluate a theory against a concrete signal
//   gstl prove    check a Hilbert-style proof script
//
// Output is line oriented, `key value` per line, so scripts can parse it.
// Exit codes: 0 consistent / all true / valid, 1 inconsistent / false /
// invalid, 2 usage or input errors, 3 resource limits.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gstl/compile.hpp"
#include "gstl/model.hpp"
#include "gstl/parse.hpp"
#include "gstl/proof.hpp"
#include "gstl/semantics.hpp"
#include "gstl/signal.hpp"
#include "gstl/solve.hpp"

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitError = 2;
constexpr int kExitLimit = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

struct TheoryArgs {
  std::string model_path;
  std::string formulas_path;
  int horizon = 25;
  std::string root;
  std::string ground = "expand";
  std::string cnf = "distribution";
  std::uint64_t max_decisions = 0;  // 0: unlimited
  std::uint64_t max_conflicts = 0;

  void attach(CLI::App* cmd, bool with_horizon = true) {
    cmd->add_option("--model", model_path, "spatial model file")->required();
    cmd->add_option("--formulas", formulas_path, "theory file")->required();
    if (with_horizon)
      cmd->add_option("--horizon", horizon, "last signal step (steps 0..H)");
    cmd->add_option("--root", root, "evaluation node (default: first top-layer node)");
    cmd->add_option("--ground", ground, "grounding mode: abstract | expand")
        ->check(CLI::IsMember({"abstract", "expand"}));
    cmd->add_option("--cnf", cnf, "CNF mode: distribution | equisat")
        ->check(CLI::IsMember({"distribution", "equisat"}));
    cmd->add_option("--max-decisions", max_decisions, "solver decision limit (0: none)");
    cmd->add_option("--max-conflicts", max_conflicts, "solver conflict limit (0: none)");
  }

  gstl::GroundMode ground_mode() const {
    return ground == "abstract" ? gstl::GroundMode::Abstract : gstl::GroundMode::Expand;
  }
  gstl::CnfMode cnf_mode() const {
    return cnf == "equisat" ? gstl::CnfMode::Tseitin : gstl::CnfMode::Distribution;
  }
  gstl::SolveLimits limits() const {
    gstl::SolveLimits l;
    if (max_decisions) l.max_decisions = max_decisions;
    if (max_conflicts) l.max_conflicts = max_conflicts;
    return l;
  }
};

struct Compiled {
  gstl::SpatialModel model;
  gstl::TheorySet theory;
  gstl::CompiledTheory ct;
  gstl::Cnf cnf;
};

Compiled build(const TheoryArgs& args) {
  gstl::SpatialModel model = gstl::SpatialModel::parse_document(slurp(args.model_path));
  gstl::TheorySet theory = gstl::parse_theory(slurp(args.formulas_path));
  gstl::NodeId root = args.root.empty() ? model.default_root() : args.root;
  gstl::CompiledTheory ct =
      gstl::compile_theory(theory, model, args.horizon, root, args.ground_mode());
  gstl::Cnf cnf = gstl::to_cnf(ct.props, ct.registry, args.cnf_mode());
  return {std::move(model), std::move(theory), std::move(ct), std::move(cnf)};
}

int run_check(const TheoryArgs& args, bool with_count) {
  Compiled c = build(args);
  std::cout << "variables " << c.cnf.num_vars << "\n";
  std::cout << "clauses " << c.cnf.clauses.size() << "\n";
  gstl::SolveResult r = gstl::solve_cnf(c.cnf, args.limits());
  if (r.status == gstl::SolveStatus::Limit) {
    std::cout << "verdict unknown\n";
    return kExitLimit;
  }
  if (r.status == gstl::SolveStatus::Unsat) {
    std::cout << "verdict inconsistent\n";
    // The step diagnostic needs per-variable steps, so it is computed on a
    // distribution CNF; skip it quietly if that CNF is unavailable.
    try {
      const gstl::Cnf& diag =
          args.cnf_mode() == gstl::CnfMode::Distribution
              ? c.cnf
              : gstl::to_cnf(c.ct.props, c.ct.registry, gstl::CnfMode::Distribution);
      auto t = gstl::first_unsat_prefix_time(diag, c.ct.registry, args.limits());
      if (t) std::cout << "conflict_time " << *t << "\n";
    } catch (const gstl::CompileError&) {
    }
    return kExitFalse;
  }
  std::cout << "verdict consistent\n";
  if (with_count) {
    std::optional<std::uint64_t> n;
    if (args.cnf_mode() == gstl::CnfMode::Distribution) n = gstl::count_models(c.cnf);
    else n = gstl::enumerate_models(c.cnf, UINT64_MAX, nullptr, args.limits());
    if (!n) {
      std::cout << "models unknown\n";
      return kExitLimit;
    }
    std::cout << "models " << *n << "\n";
  }
  return kExitTrue;
}

int run_count(const TheoryArgs& args) {
  Compiled c = build(args);
  std::cout << "variables " << c.cnf.num_vars << "\n";
  std::cout << "clauses " << c.cnf.clauses.size() << "\n";
  std::optional<std::uint64_t> n;
  if (args.cnf_mode() == gstl::CnfMode::Distribution) n = gstl::count_models(c.cnf);
  else n = gstl::enumerate_models(c.cnf, UINT64_MAX, nullptr, args.limits());
  if (!n) {
    std::cout << "models unknown\n";
    return kExitLimit;
  }
  std::cout << "models " << *n << "\n";
  return *n > 0 ? kExitTrue : kExitFalse;
}

int run_compile(const TheoryArgs& args, const std::string& out_path,
                const std::string& map_path) {
  Compiled c = build(args);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  gstl::write_dimacs(c.cnf, out);
  if (!map_path.empty()) {
    std::ofstream map(map_path);
    if (!map) throw std::runtime_error("cannot write '" + map_path + "'");
    gstl::write_varmap(c.ct.registry, map);
  }
  std::cout << "variables " << c.cnf.num_vars << "\n";
  std::cout << "clauses " << c.cnf.clauses.size() << "\n";
  return kExitTrue;
}

int run_eval(const std::string& model_path, const std::string& formulas_path,
             const std::string& signal_path, const std::string& node_arg, int time) {
  gstl::SpatialModel model = gstl::SpatialModel::parse_document(slurp(model_path));
  gstl::TheorySet theory = gstl::parse_theory(slurp(formulas_path));
  gstl::Interpretation interp;
  gstl::Signal signal = gstl::Signal::parse_document(slurp(signal_path), &interp);
  gstl::NodeId node = node_arg.empty() ? model.default_root() : node_arg;
  gstl::EvalContext ctx{model, signal, interp};
  bool all = true;
  for (const auto& nf : theory) {
    bool v = gstl::evaluate(ctx, node, time, nf.formula);
    std::cout << "formula " << nf.name << " " << (v ? "true" : "false") << "\n";
    all = all && v;
  }
  return all ? kExitTrue : kExitFalse;
}

int run_prove(const std::string& proof_path, const std::string& premises_path) {
  gstl::ProofScript script = gstl::parse_proof(slurp(proof_path));
  std::vector<gstl::FormulaPtr> premises;
  if (!premises_path.empty())
    for (const auto& nf : gstl::parse_theory(slurp(premises_path)))
      premises.push_back(nf.formula);
  gstl::ProofCheck res = gstl::check_proof(script, premises);
  if (res.ok) {
    std::cout << "proof valid\n";
    std::cout << "steps " << script.size() << "\n";
    return kExitTrue;
  }
  std::cout << "proof invalid\n";
  std::cout << "failed_step " << res.failed_step << "\n";
  std::cout << "reason " << res.message << "\n";
  return kExitFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reasoning tools for spatial-temporal theories over layered graphs"};
  app.require_subcommand(1);

  TheoryArgs check_args, count_args, compile_args;
  bool check_count = false;
  std::string out_path, map_path;
  std::string eval_model, eval_formulas, eval_signal, eval_node;
  int eval_time = 0;
  std::string proof_path, premises_path;

  CLI::App* check = app.add_subcommand("check", "decide theory consistency");
  check_args.attach(check);
  check->add_flag("--count", check_count, "also count models when consistent");

  CLI::App* count = app.add_subcommand("count", "count models of the theory");
  count_args.attach(count);

  CLI::App* compile = app.add_subcommand("compile", "write DIMACS CNF");
  compile_args.attach(compile);
  compile->add_option("--out", out_path, "DIMACS output path")->required();
  compile->add_option("--map", map_path, "variable map output path");

  CLI::App* eval = app.add_subcommand("eval", "evaluate formulas on a signal");
  eval->add_option("--model", eval_model, "spatial model file")->required();
  eval->add_option("--formulas", eval_formulas, "theory file")->required();
  eval->add_option("--signal", eval_signal, "signal file")->required();
  eval->add_option("--node", eval_node, "evaluation node (default: first top-layer node)");
  eval->add_option("--time", eval_time, "evaluation step (default 0)");

  CLI::App* prove = app.add_subcommand("prove", "check a proof script");
  prove->add_option("--proof", proof_path, "proof script file")->required();
  prove->add_option("--premises", premises_path, "theory file with allowed premises");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (check->parsed()) return run_check(check_args, check_count);
    if (count->parsed()) return run_count(count_args);
    if (compile->parsed()) return run_compile(compile_args, out_path, map_path);
    if (eval->parsed()) return run_eval(eval_model, eval_formulas, eval_signal, eval_node,
                                        eval_time);
    if (prove->parsed()) return run_prove(proof_path, premises_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
