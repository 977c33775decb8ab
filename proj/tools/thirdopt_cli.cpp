// thirdopt_cli: run the optimizer, check a point, or run a bench suite.
//
//   thirdopt_cli run   <problem> --x0 a,b [--R r --L l --B b --max-iters n --seed s --tol-mu t --trace out.jsonl]
//   thirdopt_cli check <problem> --point a,b [--tol-grad t --tol-eig t --tol-third t]
//   thirdopt_cli bench <suite> [--out summary.csv --seed s]
//
// <problem> is a corpus name or a path to a polynomial JSON file.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "harness/bench_suites.hpp"
#include "thirdopt/polynomial_json.hpp"
#include "thirdopt/thirdopt.hpp"
#include "thirdopt/trace_json.hpp"

namespace {

using namespace thirdopt;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBudget = 2;
constexpr int kExitConditionsFail = 3;

Polynomial resolve_problem(const std::string& problem) {
  for (const auto& name : corpus::names())
    if (name == problem) return corpus::by_name(problem);
  if (std::filesystem::exists(problem)) return load_polynomial(problem);
  throw InvalidArgument("unknown problem '" + problem + "' (not a corpus name or readable file)");
}

Vector parse_point(const std::string& text, int dim, const char* what) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InvalidArgument(std::string(what) + ": cannot parse '" + tok + "'");
    }
  }
  if (static_cast<int>(vals.size()) != dim) {
    throw DimensionMismatch(std::string(what) + ": got " + std::to_string(vals.size()) +
                            " coordinates, problem has dimension " + std::to_string(dim));
  }
  return Eigen::Map<const Vector>(vals.data(), dim);
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

struct RunArgs {
  std::string problem;
  std::string x0;
  std::optional<double> R, L, B;
  std::optional<double> radius;
  int max_iters = 1000;
  std::uint64_t seed = 0;
  double tol_mu = 1e-6;
  std::string trace;
};

int cmd_run(const RunArgs& a) {
  const Polynomial p = resolve_problem(a.problem);
  const Vector x0 = parse_point(a.x0, p.dim(), "--x0");
  const double radius = a.radius.value_or(std::max(2.0, 2.0 * x0.norm()));
  const SmoothnessConstants sc = smoothness_bounds(p, radius);

  OptimizerConfig cfg;
  cfg.R = a.R.value_or(sc.R);
  cfg.L = a.L.value_or(sc.L);
  if (a.B) cfg.B = *a.B;
  cfg.max_iters = a.max_iters;
  cfg.seed = a.seed;
  cfg.tol_mu = a.tol_mu;

  const Trace tr = optimize(p, x0, cfg);
  if (!a.trace.empty()) {
    std::ofstream out(a.trace);
    if (!out) throw Error("cannot open trace file " + a.trace);
    write_trace(out, tr);
  }

  nlohmann::ordered_json summary;
  summary["converged"] = tr.converged;
  summary["iterations"] = tr.iterations;
  summary["third_steps"] = tr.third_steps;
  summary["R"] = cfg.R;
  summary["L"] = cfg.L;
  summary["f0"] = tr.f0;
  summary["f_final"] = tr.f_final;
  summary["grad_norm_final"] = tr.records.empty() ? 0.0 : tr.records.back().grad_norm;
  summary["x_final"] = to_std(tr.x_final);
  summary["flags_hold"] = tr.all_flags_hold();
  std::cout << summary.dump(2) << '\n';
  return tr.converged ? kExitOk : kExitBudget;
}

struct CheckArgs {
  std::string problem;
  std::string point;
  ConditionTolerances tol;
  std::uint64_t seed = 0;
};

int cmd_check(const CheckArgs& a) {
  const Polynomial p = resolve_problem(a.problem);
  const Vector x = parse_point(a.point, p.dim(), "--point");
  const ConditionReport rep = check_third_order(p, x, a.tol);

  nlohmann::ordered_json j;
  j["verdict"] = to_string(rep.verdict);
  j["grad_norm"] = rep.grad_norm;
  j["min_eig"] = rep.min_eig;
  j["null_dim"] = rep.null_dim;
  j["null_cutoff"] = rep.null_cutoff;
  j["third_residual"] = rep.third_residual;
  j["tolerances"] = {{"grad", rep.tolerances.grad},
                     {"eig", rep.tolerances.eig},
                     {"null_rel", rep.tolerances.null_rel},
                     {"third", rep.tolerances.third}};
  if (rep.holds()) {
    j["note"] =
        "necessary third-order conditions hold to tolerance; this does not certify a local minimum";
  } else {
    const double radius = std::max(2.0, 2.0 * x.norm());
    const auto w = descent_witness(p, x, rep, smoothness_bounds(p, radius).L, std::nullopt, a.seed);
    if (w) {
      j["witness"] = {{"failing_order", w->failing_order},
                      {"direction", to_std(w->direction)},
                      {"step", w->step},
                      {"predicted_decrease", w->predicted_decrease},
                      {"evaluated_decrease", w->evaluated_decrease},
                      {"verified", w->verified}};
    }
  }
  std::cout << j.dump(2) << '\n';
  return rep.holds() ? kExitOk : kExitConditionsFail;
}

int cmd_bench(const std::string& suite, const std::string& out_path, std::uint64_t seed) {
  const bench::SuiteResult res = bench::run_suite(suite, seed);
  const std::string csv = bench::to_csv(res);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(out_path);
    if (!out) throw Error("cannot open output file " + out_path);
    out << csv;
  }
  int failed = 0;
  for (const auto& r : res.rows) failed += r.pass ? 0 : 1;
  std::cerr << suite << ": " << res.rows.size() - failed << "/" << res.rows.size() << " rows pass\n";
  return res.all_pass() ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Third-order local minimization with cubic-regularized and third-order escape steps"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Optimize from a starting point and write a JSONL trace");
  run_cmd->add_option("problem,--problem", run.problem, "Corpus name or polynomial JSON path")->required();
  run_cmd->add_option("--x0", run.x0, "Starting point, comma separated")->required();
  run_cmd->add_option("--R", run.R, "Hessian Lipschitz bound (default: bound on --radius ball)");
  run_cmd->add_option("--L", run.L, "Third-derivative Lipschitz bound (default: bound on --radius ball)");
  run_cmd->add_option("--B", run.B, "Sampler constant");
  run_cmd->add_option("--radius", run.radius, "Ball radius for default R and L (default max(2, 2|x0|))");
  run_cmd->add_option("--max-iters", run.max_iters, "Iteration budget");
  run_cmd->add_option("--seed", run.seed, "Random seed");
  run_cmd->add_option("--tol-mu", run.tol_mu, "Terminal tolerance on mu");
  run_cmd->add_option("--trace", run.trace, "JSONL trace output path");

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Test the necessary third-order conditions at a point");
  check_cmd->add_option("problem,--problem", check.problem, "Corpus name or polynomial JSON path")->required();
  check_cmd->add_option("--point", check.point, "Point, comma separated")->required();
  check_cmd->add_option("--tol-grad", check.tol.grad, "Gradient-norm tolerance");
  check_cmd->add_option("--tol-eig", check.tol.eig, "Negative-eigenvalue tolerance");
  check_cmd->add_option("--tol-third", check.tol.third, "Projected third-derivative tolerance");
  check_cmd->add_option("--seed", check.seed, "Seed for the witness direction search");

  std::string suite, out_path;
  std::uint64_t bench_seed = 0;
  auto* bench_cmd = app.add_subcommand("bench", "Run a bench suite and write a CSV summary");
  bench_cmd->add_option("suite,--suite", suite, "decrease|escape|rate|sampler|taylor|subproblem|conditions")
      ->required();
  bench_cmd->add_option("--out", out_path, "CSV output path (default stdout)");
  bench_cmd->add_option("--seed", bench_seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*check_cmd) return cmd_check(check);
    if (*bench_cmd) return cmd_bench(suite, out_path, bench_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
