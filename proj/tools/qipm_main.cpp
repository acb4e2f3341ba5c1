// qipm: inexact infeasible interior point solver, refinement and experiment driver.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qipm/errors.hpp"
#include "qipm/experiments.hpp"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitNoInput = 66;

struct Settings {
  std::string input;
  std::string solver = "exact";
  double zeta = std::numeric_limits<double>::quiet_NaN();  // unset
  double zeta_hat = std::numeric_limits<double>::quiet_NaN();
  double rho = 2.0;
  double beta1 = 0.5;
  double beta2 = 0.9995;
  double eta = 0.4;
  double gamma1 = 0.5;
  double gamma2 = 1.0;
  double omega = 10.0;
  double omega_inner = 1000.0;
  std::uint64_t seed = 0;
  std::string trace;
  std::string config;
  std::int64_t shots = 0;
  int clock_qubits = 0;
  bool exact_amplitudes = false;
  double rho_fill = 0.9;
  int max_iterations = 500;
  std::string ir_mode = "bounded-shift";
  double shift_cap = 4.0;
  int max_rounds = 64;
  std::string solution;
  // generate
  int m = 5;
  int n = 10;
  double cond = 2.0;
  double norm_a = 1.0;
  double norm_b = 2.0;
  double solution_norm = 2.0;
  bool degenerate = false;
  std::string output;
  // experiment
  std::string sweep;
  int seeds = 10;
  std::vector<double> values;
};

// JSON config keys mirror the long flag names with '-' or '_'.
void apply_config(Settings& s, const json& j) {
  std::map<std::string, std::function<void(const json&)>> set{
      {"input", [&](const json& v) { s.input = v.get<std::string>(); }},
      {"solver", [&](const json& v) { s.solver = v.get<std::string>(); }},
      {"zeta", [&](const json& v) { s.zeta = v.get<double>(); }},
      {"zeta_hat", [&](const json& v) { s.zeta_hat = v.get<double>(); }},
      {"rho", [&](const json& v) { s.rho = v.get<double>(); }},
      {"beta1", [&](const json& v) { s.beta1 = v.get<double>(); }},
      {"beta2", [&](const json& v) { s.beta2 = v.get<double>(); }},
      {"eta", [&](const json& v) { s.eta = v.get<double>(); }},
      {"gamma1", [&](const json& v) { s.gamma1 = v.get<double>(); }},
      {"gamma2", [&](const json& v) { s.gamma2 = v.get<double>(); }},
      {"omega", [&](const json& v) { s.omega = v.get<double>(); }},
      {"omega_inner", [&](const json& v) { s.omega_inner = v.get<double>(); }},
      {"seed", [&](const json& v) { s.seed = v.get<std::uint64_t>(); }},
      {"trace", [&](const json& v) { s.trace = v.get<std::string>(); }},
      {"shots", [&](const json& v) { s.shots = v.get<std::int64_t>(); }},
      {"clock_qubits", [&](const json& v) { s.clock_qubits = v.get<int>(); }},
      {"exact_amplitudes", [&](const json& v) { s.exact_amplitudes = v.get<bool>(); }},
      {"rho_fill", [&](const json& v) { s.rho_fill = v.get<double>(); }},
      {"max_iterations", [&](const json& v) { s.max_iterations = v.get<int>(); }},
      {"ir_mode", [&](const json& v) { s.ir_mode = v.get<std::string>(); }},
      {"shift_cap", [&](const json& v) { s.shift_cap = v.get<double>(); }},
      {"max_rounds", [&](const json& v) { s.max_rounds = v.get<int>(); }},
      {"solution", [&](const json& v) { s.solution = v.get<std::string>(); }},
      {"m", [&](const json& v) { s.m = v.get<int>(); }},
      {"n", [&](const json& v) { s.n = v.get<int>(); }},
      {"cond", [&](const json& v) { s.cond = v.get<double>(); }},
      {"norm_a", [&](const json& v) { s.norm_a = v.get<double>(); }},
      {"norm_b", [&](const json& v) { s.norm_b = v.get<double>(); }},
      {"solution_norm", [&](const json& v) { s.solution_norm = v.get<double>(); }},
      {"degenerate", [&](const json& v) { s.degenerate = v.get<bool>(); }},
      {"output", [&](const json& v) { s.output = v.get<std::string>(); }},
      {"seeds", [&](const json& v) { s.seeds = v.get<int>(); }},
      {"values", [&](const json& v) { s.values = v.get<std::vector<double>>(); }},
  };
  if (!j.is_object()) throw qipm::ConfigError("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    std::string k = key;
    std::replace(k.begin(), k.end(), '-', '_');
    auto it = set.find(k);
    if (it == set.end()) throw qipm::ConfigError("unknown config key \"" + key + "\"");
    try {
      it->second(value);
    } catch (const json::exception&) {
      throw qipm::ConfigError("config key \"" + key + "\" has the wrong type");
    }
  }
}

// --config is applied before parsing so that explicit flags override it.
std::string find_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return {};
}

void add_shared(CLI::App* app, Settings& s) {
  app->add_option("--input", s.input, "Problem file (.json or .mps)");
  app->add_option("--solver", s.solver, "Linear solver")
      ->check(CLI::IsMember({"exact", "cg", "noisy", "hhl"}));
  app->add_option("--zeta", s.zeta, "Final precision");
  app->add_option("--zeta-hat", s.zeta_hat, "Inner precision");
  app->add_option("--rho", s.rho, "Refinement growth factor");
  app->add_option("--beta1", s.beta1, "Centering parameter");
  app->add_option("--beta2", s.beta2, "Armijo parameter");
  app->add_option("--eta", s.eta, "Residual tolerance factor");
  app->add_option("--gamma1", s.gamma1, "Neighborhood parameter");
  app->add_option("--gamma2", s.gamma2, "Lower bound for the infeasibility neighborhood parameter");
  app->add_option("--omega", s.omega, "Starting point scale and infeasibility bound");
  app->add_option("--omega-inner", s.omega_inner, "omega of refined subproblems");
  app->add_option("--seed", s.seed, "Random seed");
  app->add_option("--trace", s.trace, "Trace CSV path");
  app->add_option("--config", s.config, "JSON config mirroring the flags");
  app->add_option("--shots", s.shots, "Tomography shots (0: from the error budget)");
  app->add_option("--clock-qubits", s.clock_qubits, "Clock register size (0: automatic)");
  app->add_flag("--exact-amplitudes", s.exact_amplitudes, "Read amplitudes exactly instead of sampling");
  app->add_option("--rho-fill", s.rho_fill, "Noise level of the noisy solver as a fraction of the residual target");
  app->add_option("--max-iterations", s.max_iterations, "Iteration cap");
}

qipm::SolverConfig solver_config(const Settings& s) {
  qipm::SolverConfig c;
  c.kind = s.solver;
  c.rho_fill = s.rho_fill;
  c.qlsa.shots = s.shots;
  c.qlsa.clock_qubits = s.clock_qubits;
  c.qlsa.exact_amplitudes = s.exact_amplitudes;
  return c;
}

qipm::IpmParams ipm_params(const Settings& s) {
  qipm::IpmParams p;
  p.gamma1 = s.gamma1;
  p.gamma2 = s.gamma2;
  p.beta1 = s.beta1;
  p.beta2 = s.beta2;
  p.eta = s.eta;
  p.omega = s.omega;
  p.max_iterations = s.max_iterations;
  return p;
}

qipm::LpProblem load_input(const Settings& s) {
  if (s.input.empty()) throw qipm::ConfigError("--input is required");
  if (!std::filesystem::exists(s.input)) throw qipm::IoError("input file not found: " + s.input);
  return qipm::load_problem(s.input);
}

int exit_code(qipm::IpmStatus status) {
  switch (status) {
    case qipm::IpmStatus::Optimal: return 0;
    case qipm::IpmStatus::InfeasibleDetected: return 2;
    case qipm::IpmStatus::StepFailure: return 3;
    case qipm::IpmStatus::IterationLimit: return 4;
  }
  return 1;
}

void write_solution(const std::string& path, const std::string& status, const qipm::Iterate& it, int iterations) {
  json j;
  j["status"] = status;
  j["iterations"] = iterations;
  j["x"] = std::vector<double>(it.x.data(), it.x.data() + it.x.size());
  j["y"] = std::vector<double>(it.y.data(), it.y.data() + it.y.size());
  j["s"] = std::vector<double>(it.s.data(), it.s.data() + it.s.size());
  std::ofstream f(path);
  if (!f) throw qipm::IoError("cannot open " + path + " for writing");
  f << j.dump(2) << '\n';
}

void check_precisions(const Settings& s) {
  if (!std::isnan(s.zeta) && !(s.zeta > 0.0)) throw qipm::ConfigError("--zeta must be positive");
  if (!std::isnan(s.zeta_hat) && !(s.zeta_hat > 0.0)) throw qipm::ConfigError("--zeta-hat must be positive");
}

int run_solve(const Settings& s) {
  const qipm::LpProblem problem = load_input(s);
  qipm::IpmParams params = ipm_params(s);
  params.zeta_hat = s.zeta > 0.0 ? s.zeta : (s.zeta_hat > 0.0 ? s.zeta_hat : 0.1);
  check_precisions(s);
  params.validate();
  auto solver = qipm::make_solver(solver_config(s), s.seed);
  const qipm::IpmResult res = qipm::solve(problem, params, *solver);
  if (!s.trace.empty()) qipm::write_trace_csv(res.trace, s.trace);
  if (!s.solution.empty()) write_solution(s.solution, qipm::to_string(res.status), res.iterate, res.iterations);
  const qipm::Residuals r = qipm::residuals(problem, res.iterate);
  std::printf("status: %s\niterations: %d\nmu: %.6e\n||(R_P,R_D)||: %.6e\nobjective: %.10g\n",
              qipm::to_string(res.status).c_str(), res.iterations, r.mu, r.norm(), problem.c.dot(res.iterate.x));
  if (!res.message.empty()) std::printf("note: %s\n", res.message.c_str());
  return exit_code(res.status);
}

int run_ir(const Settings& s) {
  qipm::IrParams ir;
  ir.zeta = s.zeta > 0.0 ? s.zeta : 1e-8;
  ir.zeta_hat = s.zeta_hat > 0.0 ? s.zeta_hat : 1e-2;
  check_precisions(s);
  ir.rho = s.rho;
  ir.omega_initial = s.omega;
  ir.omega_inner = s.omega_inner;
  ir.shift_cap = s.shift_cap;
  ir.max_rounds = s.max_rounds;
  if (s.ir_mode == "literal") ir.mode = qipm::IrMode::Literal;
  else if (s.ir_mode == "bounded-shift") ir.mode = qipm::IrMode::BoundedShift;
  else throw qipm::ConfigError("--ir-mode must be literal or bounded-shift");
  ir.inner = ipm_params(s);
  ir.validate();
  ir.inner.zeta_hat = ir.zeta_hat;
  ir.inner.validate();
  const qipm::LpProblem problem = load_input(s);
  auto solver = qipm::make_solver(solver_config(s), s.seed);
  const qipm::IrResult res = qipm::ir_solve(problem, ir, *solver);
  if (!s.trace.empty()) qipm::write_ir_trace_csv(res.rounds, s.trace);
  if (!s.solution.empty())
    write_solution(s.solution, res.converged ? "optimal" : qipm::to_string(res.status), res.composite,
                   res.refinement_rounds);
  const qipm::Residuals r = qipm::residuals(problem, res.composite);
  std::printf("converged: %s\nrefinement rounds: %d (bound %d)\nr: %.6e\nmu: %.6e\n||(R_P,R_D)||: %.6e\n",
              res.converged ? "yes" : "no", res.refinement_rounds, res.round_bound, res.final_r, r.mu, r.norm());
  if (!res.message.empty()) std::printf("note: %s\n", res.message.c_str());
  if (res.converged) return 0;
  return res.status == qipm::IpmStatus::Optimal ? 4 : exit_code(res.status);
}

int run_generate(const Settings& s) {
  qipm::GenConfig g;
  g.m = s.m;
  g.n = s.n;
  g.cond = s.cond;
  g.norm_A = s.norm_a;
  g.norm_b = s.norm_b;
  g.solution_norm = s.solution_norm;
  g.degenerate = s.degenerate;
  g.seed = s.seed;
  const qipm::LpProblem p = qipm::generate(g);
  if (s.output.empty()) {
    std::cout << qipm::problem_to_json(p).dump(2) << '\n';
  } else {
    qipm::write_json(p, s.output);
  }
  return 0;
}

int run_experiment(const Settings& s) {
  check_precisions(s);
  qipm::ExperimentConfig cfg;
  cfg.sweep = s.sweep;
  cfg.solver = solver_config(s);
  cfg.params = ipm_params(s);
  cfg.params.zeta_hat = s.zeta_hat > 0.0 ? s.zeta_hat : 0.1;
  cfg.seeds = s.seeds;
  cfg.seed = s.seed;
  cfg.values = s.values;
  cfg.base.m = s.m;
  cfg.base.n = s.n;
  cfg.base.cond = s.cond;
  cfg.base.norm_A = s.norm_a;
  cfg.base.norm_b = s.norm_b;
  cfg.base.solution_norm = s.solution_norm;
  const std::string out = s.output.empty() ? s.sweep : s.output;
  if (s.sweep == "condstudy") {
    cfg.zeta = s.zeta > 0.0 ? s.zeta : 1e-6;
    cfg.ir.zeta_hat = s.zeta_hat > 0.0 ? s.zeta_hat : 1e-2;
    cfg.ir.rho = s.rho;
    cfg.ir.omega_inner = s.omega_inner;
    cfg.ir.max_rounds = s.max_rounds;
    cfg.ir.inner.max_iterations = s.max_iterations;
    cfg.params.validate();
    const qipm::CondStudyResult res = qipm::run_condstudy(cfg);
    qipm::write_condstudy_csv(res, out + ".csv");
    std::printf("plain: %s after %d iterations, final kappa(NES) %.3e\nir: %s after %d rounds, max kappa(MNES) %.3e\n",
                qipm::to_string(res.plain.status).c_str(), res.plain.iterations, res.plain_final_kappa_nes,
                res.ir.converged ? "converged" : "not converged", res.ir.refinement_rounds, res.ir_max_kappa_mnes);
    return 0;
  }
  const auto rows = qipm::run_sweep(cfg);
  const auto summary = qipm::summarize(rows);
  qipm::write_sweep_csv(rows, out + ".csv");
  qipm::write_summary_csv(summary, out + "_summary.csv");
  std::printf("%-12s %-16s %-6s %s\n", "value", "mean_iterations", "runs", "optimal");
  for (const auto& r : summary) std::printf("%-12g %-16.3f %-6d %d\n", r.value, r.mean_iterations, r.runs, r.optimal);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Settings s;
  CLI::App app{"Inexact infeasible interior point method with simulated quantum linear solves"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Solve one problem");
  add_shared(solve, s);
  solve->add_option("--solution", s.solution, "Write the final iterate as JSON");

  auto* ir = app.add_subcommand("ir", "Solve with iterative refinement");
  add_shared(ir, s);
  ir->add_option("--solution", s.solution, "Write the composite solution as JSON");
  ir->add_option("--ir-mode", s.ir_mode, "literal or bounded-shift");
  ir->add_option("--shift-cap", s.shift_cap, "Largest bound shift in bounded-shift mode");
  ir->add_option("--max-rounds", s.max_rounds, "Refinement round cap");

  auto* gen = app.add_subcommand("generate", "Generate a random instance");
  gen->add_option("--m", s.m, "Constraints");
  gen->add_option("--n", s.n, "Variables");
  gen->add_option("--cond", s.cond, "Condition number of A");
  gen->add_option("--norm-a", s.norm_a, "||A||_2");
  gen->add_option("--norm-b", s.norm_b, "||b||_2");
  gen->add_option("--solution-norm", s.solution_norm, "||x*||_2 and ||s*||_2 before rescaling");
  gen->add_flag("--degenerate", s.degenerate, "Zero one basic coordinate of x*");
  gen->add_option("--seed", s.seed, "Random seed");
  gen->add_option("--output", s.output, "Output JSON (stdout if absent)");
  gen->add_option("--config", s.config, "JSON config mirroring the flags");

  auto* exp = app.add_subcommand("experiment", "Run an experiment sweep");
  exp->add_option("sweep", s.sweep, "vars | precision | normb | omega | condstudy")
      ->required()
      ->check(CLI::IsMember({"vars", "precision", "normb", "omega", "condstudy"}));
  add_shared(exp, s);
  exp->add_option("--seeds", s.seeds, "Instances per grid value");
  exp->add_option("--values", s.values, "Grid values (default per sweep)");
  exp->add_option("--output", s.output, "Output path prefix");
  exp->add_option("--m", s.m, "Constraints");
  exp->add_option("--n", s.n, "Variables");
  exp->add_option("--cond", s.cond, "Condition number of A");
  exp->add_option("--norm-a", s.norm_a, "||A||_2");
  exp->add_option("--norm-b", s.norm_b, "||b||_2");
  exp->add_option("--solution-norm", s.solution_norm, "Solution norm");
  exp->add_option("--max-rounds", s.max_rounds, "Refinement round cap (condstudy)");

  try {
    const std::string cfg = find_config(argc, argv);
    if (!cfg.empty()) {
      std::ifstream f(cfg);
      if (!f) {
        std::cerr << "error: cannot open config " << cfg << '\n';
        return kExitNoInput;
      }
      json j;
      try {
        f >> j;
      } catch (const json::parse_error& e) {
        std::cerr << "error: " << cfg << ": " << e.what() << '\n';
        return kExitUsage;
      }
      apply_config(s, j);
    }
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  } catch (const qipm::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*solve) return run_solve(s);
    if (*ir) return run_ir(s);
    if (*gen) return run_generate(s);
    if (*exp) return run_experiment(s);
  } catch (const qipm::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const qipm::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoInput;
  } catch (const qipm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
