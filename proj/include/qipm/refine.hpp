#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qipm/ii_qipm.hpp"

namespace qipm {

/// How a refinement round poses its inner problem.
enum class IrMode {
  /// (A, nabla b_bar, nabla c_bar) with x >= 0, composite x* + x_hat / nabla.
  Literal,
  /// Bounded shift of the variable bounds: the inner primal and dual variables
  /// may move each coordinate of the running solution down by at most
  /// min(nabla x*, shift_cap) (resp. nabla s*), so corrections can decrease
  /// components that should vanish while the composite stays nonnegative.
  BoundedShift,
};

struct IrParams {
  double zeta = 1e-8;
  double zeta_hat = 1e-2;
  double rho = 2.0;
  /// omega of the first (unscaled) solve and of the refined subproblems.
  double omega_initial = 10.0;
  double omega_inner = 1000.0;
  IrMode mode = IrMode::BoundedShift;
  double shift_cap = 4.0;
  int max_rounds = 64;
  /// gamma1, beta1, beta2, eta, max_iterations of the inner solves.
  IpmParams inner;

  /// Throws ConfigError unless 0 < zeta <= zeta_hat < 1, rho >= 2 and integral, omegas >= 1.
  void validate() const;
};

struct IrRound {
  int round = 0;
  double nabla = 1.0;
  double pi = 1.0;
  double r = 0.0;  ///< residual measure of the composite after this round
  int inner_iters = 0;
  double max_kappa_mnes = 0.0;
  IpmStatus inner_status = IpmStatus::Optimal;
  /// Composite is (zeta_hat / nabla)-optimal for the original problem.
  bool composite_ok = true;
  /// r did not decrease relative to the previous round.
  bool stagnated = false;
  std::vector<TraceRow> inner_trace;
};

struct IrResult {
  bool converged = false;
  IpmStatus status = IpmStatus::Optimal;
  Iterate composite;
  std::vector<IrRound> rounds;  ///< rounds[0] is the initial unscaled solve
  int refinement_rounds = 0;
  /// ceil(log zeta / log zeta_hat)
  int round_bound = 0;
  double final_r = 0.0;
  std::string message;
};

/// b_bar = b - A x*, c_bar = c - A^T y*.
std::pair<Vec, Vec> refining_data(const LpProblem& problem, const Vec& x_star, const Vec& y_star);

/// max{ max|b_bar|, max(-c_bar), sum |c_bar_i x*_i| }
double residual_measure(const Vec& b_bar, const Vec& c_bar, const Vec& x_star);

/// pi = max{r, 1/(rho nabla_prev)}, nabla = 2^max(0, ceil(log2(1/pi))).
std::pair<double, double> scaling_update(double r, double rho, double nabla_prev);

IrResult ir_solve(const LpProblem& problem, const IrParams& params, LinearSolver& solver);

}  // namespace qipm
