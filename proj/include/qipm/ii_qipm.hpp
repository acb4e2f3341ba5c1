#pragma once

#include <string>
#include <vector>

#include "qipm/newton.hpp"
#include "qipm/solvers.hpp"

namespace qipm {

enum class IpmStatus { Optimal, InfeasibleDetected, IterationLimit, StepFailure };

std::string to_string(IpmStatus status);

/// One row per iteration. The first eleven fields form the trace CSV.
struct TraceRow {
  int iter = 0;
  double mu = 0.0;
  double alpha_hat = 0.0;
  double alpha_tilde = 0.0;
  double norm_rp = 0.0;
  double norm_rd = 0.0;
  double mnes_residual = 0.0;
  double kappa_mnes = 0.0;
  double kappa_nes = 0.0;
  int solver_calls = 0;
  double theta = 1.0;

  // Per-iteration checks.
  double eps_target = 0.0;
  double eq1_rel = 0.0;          ///< ||A dx - R_P|| / (||A|| ||dx|| + ||R_P||)
  double eq2_rel = 0.0;          ///< ||A^T dy + ds - R_D|| / (||A|| ||dy|| + ||ds|| + ||R_D||)
  double eq3_rel = 0.0;          ///< ||(X ds + S dx) - (b1 mu e - XSe - Sv)|| relative to the terms
  double sv_inf = 0.0;           ///< ||S v||_inf
  double eta_mu = 0.0;           ///< eta mu
  double collinearity_rel = 0.0; ///< ||R^k - theta^{k-1} R^0|| / ||R^0|| before the step
  bool in_neighborhood = true;   ///< the iterate produced by this step
  bool armijo = true;            ///< x(a)^T s(a) <= (1 - a(1 - beta2)) x^T s
};

struct IpmResult {
  IpmStatus status = IpmStatus::IterationLimit;
  Iterate iterate;
  std::vector<TraceRow> trace;
  int iterations = 0;
  double gamma2 = 1.0;
  int solver_calls = 0;
  std::string message;
};

/// x = s = omega e, y = 0 and gamma2 = max{params.gamma2, ||R^0|| / mu^0}.
std::pair<Iterate, double> initialize(const LpProblem& problem, const IpmParams& params);

IpmResult solve(const PreprocessedLp& pre, const IpmParams& params, LinearSolver& solver);
IpmResult solve(const LpProblem& problem, const IpmParams& params, LinearSolver& solver);

}  // namespace qipm
