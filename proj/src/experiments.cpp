#include "qipm/experiments.hpp"

#include <fstream>
#include <iomanip>
#include <map>

#include "qipm/errors.hpp"

namespace qipm {

std::unique_ptr<LinearSolver> make_solver(const SolverConfig& config, std::uint64_t seed) {
  if (config.kind == "exact") return std::make_unique<ExactSolver>();
  if (config.kind == "cg") return std::make_unique<CgSolver>();
  if (config.kind == "noisy") return std::make_unique<NoisyOracleSolver>(seed, config.rho_fill);
  if (config.kind == "hhl") return std::make_unique<qlsa::HhlSolver>(seed, config.qlsa);
  throw ConfigError("unknown solver \"" + config.kind + "\" (expected exact, cg, noisy or hhl)");
}

std::vector<double> default_sweep_values(const std::string& sweep) {
  if (sweep == "vars") return {6, 8, 10, 12, 14, 16};
  if (sweep == "precision") return {1e-1, 1e-2, 1e-3};
  if (sweep == "normb") return {1, 2, 4, 8};
  if (sweep == "omega") return {10, 20, 50, 100};
  if (sweep == "condstudy") return {};
  throw ConfigError("unknown sweep \"" + sweep + "\" (expected vars, precision, normb, omega or condstudy)");
}

std::vector<ExperimentRow> run_sweep(const ExperimentConfig& config) {
  const std::vector<double> values = config.values.empty() ? default_sweep_values(config.sweep) : config.values;
  if (config.sweep == "condstudy") throw ConfigError("condstudy is not a grid sweep");
  if (config.seeds <= 0) throw ConfigError("seeds must be positive");
  config.params.validate();
  make_solver(config.solver, 0);

  const int nv = static_cast<int>(values.size());
  const int total = nv * config.seeds;
  std::vector<ExperimentRow> rows(total);
#pragma omp parallel for schedule(dynamic)
  for (int job = 0; job < total; ++job) {
    const int vi = job / config.seeds;
    const int si = job % config.seeds;
    ExperimentRow& row = rows[job];
    row.sweep = config.sweep;
    row.value = values[vi];
    row.seed_index = si;
    row.instance_seed = mix_seed(config.seed, static_cast<std::uint64_t>(si));
    GenConfig gen = config.base;
    gen.seed = row.instance_seed;
    IpmParams params = config.params;
    if (config.sweep == "vars") {
      gen.n = static_cast<int>(row.value);
      gen.m = std::max(1, gen.n / 2);
    } else if (config.sweep == "precision") {
      params.zeta_hat = row.value;
    } else if (config.sweep == "normb") {
      gen.norm_b = row.value;
    } else if (config.sweep == "omega") {
      params.omega = row.value;
    }
    try {
      const LpProblem problem = generate(gen);
      auto solver = make_solver(config.solver, mix_seed(row.instance_seed, 0x51));
      const IpmResult res = solve(problem, params, *solver);
      row.status = res.status;
      row.iterations = res.iterations;
      row.final_mu = duality_measure(problem, res.iterate);
      if (res.status != IpmStatus::Optimal) row.error = res.message;
    } catch (const std::exception& e) {
      row.status = IpmStatus::StepFailure;
      row.error = e.what();
    }
  }
  return rows;
}

std::vector<SweepSummary> summarize(const std::vector<ExperimentRow>& rows) {
  std::vector<SweepSummary> out;
  std::map<double, std::size_t> where;
  for (const auto& r : rows) {
    auto [it, fresh] = where.try_emplace(r.value, out.size());
    if (fresh) out.push_back(SweepSummary{r.value, 0.0, 0, 0});
    SweepSummary& s = out[it->second];
    s.mean_iterations += r.iterations;
    s.runs += 1;
    s.optimal += r.status == IpmStatus::Optimal;
  }
  for (auto& s : out) s.mean_iterations /= std::max(1, s.runs);
  return out;
}

void write_sweep_csv(const std::vector<ExperimentRow>& rows, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << std::setprecision(17);
  f << "sweep,value,seed_index,instance_seed,status,iterations,final_mu\n";
  for (const auto& r : rows)
    f << r.sweep << ',' << r.value << ',' << r.seed_index << ',' << r.instance_seed << ',' << to_string(r.status)
      << ',' << r.iterations << ',' << r.final_mu << '\n';
  if (!f) throw IoError("failed writing " + path);
}

void write_summary_csv(const std::vector<SweepSummary>& summary, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << std::setprecision(17);
  f << "value,mean_iterations,runs,optimal\n";
  for (const auto& s : summary) f << s.value << ',' << s.mean_iterations << ',' << s.runs << ',' << s.optimal << '\n';
  if (!f) throw IoError("failed writing " + path);
}

CondStudyResult run_condstudy(const ExperimentConfig& config) {
  GenConfig gen = config.base;
  gen.degenerate = true;
  gen.seed = config.seed;
  CondStudyResult out;
  out.problem = generate(gen);

  IpmParams plain = config.params;
  plain.zeta_hat = config.zeta;
  auto solver = make_solver(config.solver, mix_seed(config.seed, 0xc0));
  out.plain = solve(out.problem, plain, *solver);
  if (!out.plain.trace.empty()) out.plain_final_kappa_nes = out.plain.trace.back().kappa_nes;

  IrParams ir = config.ir;
  ir.zeta = config.zeta;
  ir.inner.gamma1 = config.params.gamma1;
  ir.inner.beta1 = config.params.beta1;
  ir.inner.beta2 = config.params.beta2;
  ir.inner.eta = config.params.eta;
  ir.omega_initial = config.params.omega;
  auto ir_solver = make_solver(config.solver, mix_seed(config.seed, 0xc1));
  out.ir = ir_solve(out.problem, ir, *ir_solver);
  for (const auto& r : out.ir.rounds) out.ir_max_kappa_mnes = std::max(out.ir_max_kappa_mnes, r.max_kappa_mnes);
  return out;
}

void write_condstudy_csv(const CondStudyResult& result, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << std::setprecision(17);
  f << "phase,round,iter,mu,kappa_nes,kappa_mnes\n";
  for (const auto& row : result.plain.trace)
    f << "plain,0," << row.iter << ',' << row.mu << ',' << row.kappa_nes << ',' << row.kappa_mnes << '\n';
  for (const auto& round : result.ir.rounds)
    for (const auto& row : round.inner_trace)
      f << "ir," << round.round << ',' << row.iter << ',' << row.mu << ',' << row.kappa_nes << ',' << row.kappa_mnes
        << '\n';
  if (!f) throw IoError("failed writing " + path);
}

}  // namespace qipm
