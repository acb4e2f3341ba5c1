#include "qipm/ii_qipm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qipm/errors.hpp"

namespace qipm {

namespace {

double rel(double defect, double scale) { return defect / std::max(scale, std::numeric_limits<double>::min()); }

}  // namespace

std::string to_string(IpmStatus status) {
  switch (status) {
    case IpmStatus::Optimal: return "optimal";
    case IpmStatus::InfeasibleDetected: return "infeasible";
    case IpmStatus::IterationLimit: return "iteration_limit";
    case IpmStatus::StepFailure: return "step_failure";
  }
  return "unknown";
}

std::pair<Iterate, double> initialize(const LpProblem& problem, const IpmParams& params) {
  Iterate it{Vec::Constant(problem.n(), params.omega), Vec::Zero(problem.m()), Vec::Constant(problem.n(), params.omega)};
  const Residuals r = residuals(problem, it);
  // The ratio is nudged up by a few ulps so the start passes the test it defines.
  const double gamma2 = std::max(params.gamma2, r.norm() / r.mu * (1.0 + 1e-12));
  return {it, gamma2};
}

IpmResult solve(const LpProblem& problem, const IpmParams& params, LinearSolver& solver) {
  return solve(preprocess(problem), params, solver);
}

IpmResult solve(const PreprocessedLp& pre, const IpmParams& params, LinearSolver& solver) {
  params.validate();
  const LpProblem& P = pre.problem;
  const int n = P.n();
  IpmResult result;
  auto [it, gamma2] = initialize(P, params);
  result.gamma2 = gamma2;
  const Residuals r0 = residuals(P, it);
  const double r0_norm = r0.norm();
  const double norm_A = condition_report(P.A).norm2;
  double theta = 1.0;

  for (int k = 0;; ++k) {
    if (is_zeta_optimal(P, it, params.zeta_hat)) {
      result.status = IpmStatus::Optimal;
      break;
    }
    if (k >= params.max_iterations) {
      result.status = IpmStatus::IterationLimit;
      result.message = "iteration cap of " + std::to_string(params.max_iterations) + " reached";
      break;
    }
    const Residuals r = residuals(P, it);
    TraceRow row;
    row.iter = k;
    row.mu = r.mu;
    row.norm_rp = r.rp.norm();
    row.norm_rd = r.rd.norm();
    row.eta_mu = params.eta * r.mu;
    if (r0_norm > 0.0) {
      const double dp = (r.rp - theta * r0.rp).squaredNorm();
      const double dd = (r.rd - theta * r0.rd).squaredNorm();
      row.collinearity_rel = std::sqrt(dp + dd) / r0_norm;
    }

    const MnesSystem sys = build_mnes(pre, it, params.beta1, params.eta, kernels::Exec::Parallel);
    row.eps_target = sys.eps_target;
    if (params.condition_diagnostics) {
      row.kappa_mnes = condition_report(sys.M).kappa;
      const Mat nes = P.A * sys.d.cwiseAbs2().asDiagonal() * P.A.transpose();
      row.kappa_nes = condition_report(nes).kappa;
    }

    SolveOutcome sol;
    try {
      sol = solver.solve(SolveRequest{sys.M, sys.sigma, sys.eps_target});
    } catch (const ResidualNotMetError& e) {
      result.solver_calls += 1;
      result.status = IpmStatus::StepFailure;
      result.message = std::string("linear solve failed: ") + e.what();
      break;
    }
    result.solver_calls += sol.attempts;
    row.solver_calls = result.solver_calls;

    const NewtonDirection dir = recover_direction(pre, it, sys, sol.z, params.beta1);
    row.mnes_residual = dir.r_hat.norm();
    {
      const Vec e1 = P.A * dir.dx - r.rp;
      row.eq1_rel = rel(e1.norm(), norm_A * dir.dx.norm() + r.rp.norm());
      const Vec aty = P.A.transpose() * dir.dy;
      const Vec e2 = aty + dir.ds - r.rd;
      row.eq2_rel = rel(e2.norm(), norm_A * dir.dy.norm() + dir.ds.norm() + r.rd.norm());
      const Vec xds = it.x.cwiseProduct(dir.ds);
      const Vec sdx = it.s.cwiseProduct(dir.dx);
      const Vec xs = it.x.cwiseProduct(it.s);
      const Vec sv = it.s.cwiseProduct(dir.v);
      const Vec rhs3 = Vec::Constant(n, params.beta1 * r.mu) - xs - sv;
      row.eq3_rel = rel((xds + sdx - rhs3).norm(),
                        xds.norm() + sdx.norm() + params.beta1 * r.mu * std::sqrt(n) + xs.norm() + sv.norm());
      row.sv_inf = sv.cwiseAbs().maxCoeff();
    }

    StepReport step;
    try {
      step = max_step_length(P, it, dir, params, gamma2, theta);
    } catch (const StepFailureError& e) {
      result.trace.push_back(row);
      result.status = IpmStatus::StepFailure;
      result.message = e.what();
      break;
    }
    row.alpha_hat = step.alpha_hat;
    row.alpha_tilde = step.alpha_tilde;
    theta = step.theta;
    row.theta = theta;

    const double xs_old = it.x.dot(it.s);
    it = take_step(it, dir, step.alpha_hat);
    result.iterations = k + 1;
    row.armijo = it.x.dot(it.s) <= (1.0 - step.alpha_hat * (1.0 - params.beta2)) * xs_old * (1.0 + 1e-12);
    try {
      row.in_neighborhood = in_neighborhood(P, it, params.gamma1, gamma2 * (1.0 + 1e-9));
    } catch (const InvalidIterateError&) {
      row.in_neighborhood = false;
    }
    result.trace.push_back(row);

    bool outside;
    if (params.infeasibility_test == InfeasibilityTest::Box) {
      outside = std::max(it.x.cwiseAbs().maxCoeff(), it.s.cwiseAbs().maxCoeff()) > params.omega;
    } else {
      const double nmu0 = n * params.omega * params.omega;
      const double lhs = theta * params.omega * (it.x.lpNorm<1>() + it.s.lpNorm<1>());
      const double rhs = theta * theta * nmu0 + 2.0 * theta * (1.0 - theta) * nmu0 + it.x.dot(it.s);
      outside = lhs > rhs * (1.0 + 1e-12);
    }
    if (outside) {
      result.status = IpmStatus::InfeasibleDetected;
      result.message = "iterates left the omega box: primal or dual infeasible, or omega too small";
      break;
    }
  }
  result.iterate = it;
  return result;
}

}  // namespace qipm
