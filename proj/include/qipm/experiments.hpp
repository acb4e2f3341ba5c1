#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qipm/instance_io.hpp"
#include "qipm/qlsa_sim.hpp"
#include "qipm/refine.hpp"

namespace qipm {

struct SolverConfig {
  std::string kind = "exact";  ///< exact | cg | noisy | hhl
  double rho_fill = 0.9;
  qlsa::QlsaOptions qlsa;
};

/// Throws ConfigError for an unknown solver name.
std::unique_ptr<LinearSolver> make_solver(const SolverConfig& config, std::uint64_t seed);

struct ExperimentConfig {
  std::string sweep;  ///< vars | precision | normb | omega | condstudy
  SolverConfig solver = {"noisy", 0.9, {}};
  IpmParams params;
  GenConfig base;
  int seeds = 10;
  std::uint64_t seed = 0;
  /// Empty selects the sweep's default grid.
  std::vector<double> values;
  /// condstudy: final precision and refinement settings.
  double zeta = 1e-6;
  IrParams ir;
};

struct ExperimentRow {
  std::string sweep;
  double value = 0.0;
  int seed_index = 0;
  std::uint64_t instance_seed = 0;
  IpmStatus status = IpmStatus::Optimal;
  int iterations = 0;
  double final_mu = 0.0;
  std::string error;
};

struct SweepSummary {
  double value = 0.0;
  double mean_iterations = 0.0;
  int runs = 0;
  int optimal = 0;
};

std::vector<double> default_sweep_values(const std::string& sweep);

/// One solve per (value, seed); instances are dispatched to an OpenMP worker
/// loop and each uses its own derived seed, so output does not depend on the
/// thread count. A failing instance is recorded and the sweep continues.
std::vector<ExperimentRow> run_sweep(const ExperimentConfig& config);

/// Mean iterations per value over every run of that value.
std::vector<SweepSummary> summarize(const std::vector<ExperimentRow>& rows);

void write_sweep_csv(const std::vector<ExperimentRow>& rows, const std::string& path);
void write_summary_csv(const std::vector<SweepSummary>& summary, const std::string& path);

struct CondStudyResult {
  LpProblem problem;
  IpmResult plain;
  IrResult ir;
  double plain_final_kappa_nes = 0.0;
  double ir_max_kappa_mnes = 0.0;
};

/// Degenerate instance (base.m x base.n with the degeneracy flag) solved to
/// config.zeta by a plain run and by refinement.
CondStudyResult run_condstudy(const ExperimentConfig& config);

/// Columns: phase, round, iter, mu, kappa_nes, kappa_mnes.
void write_condstudy_csv(const CondStudyResult& result, const std::string& path);

}  // namespace qipm
