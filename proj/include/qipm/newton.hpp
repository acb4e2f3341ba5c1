#pragma once

#include "qipm/kernels.hpp"
#include "qipm/lp_core.hpp"

namespace qipm {

/// Modified normal equation system  M_hat z = sigma_hat  with  M_hat = E E^T.
struct MnesSystem {
  Vec d;        ///< D = sqrt(x / s)
  Vec d_basis;  ///< D restricted to the basis columns, in basis order
  Mat E;        ///< D_B^{-1} A_hat D
  Mat M;        ///< E E^T
  Vec sigma;
  double mu = 0.0;
  double eps_target = 0.0;  ///< eta sqrt(mu) / sqrt(n)
};

struct NewtonDirection {
  Vec dx;
  Vec dy;
  Vec ds;
  Vec v;      ///< D_B r_hat on the basis coordinates, zero elsewhere
  Vec r_hat;  ///< M_hat z - sigma_hat
  Vec z;
};

struct StepReport {
  double alpha_hat = 0.0;
  double alpha_tilde = 0.0;
  double nu = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
  /// theta_prev * (1 - alpha_hat)
  double theta = 1.0;
};

struct StepFunctions {
  double G_min = 0.0;
  double g = 0.0;
  double h = 0.0;
};

/// Throws InvalidIterateError when x or s has a nonpositive entry.
MnesSystem build_mnes(const PreprocessedLp& pre, const Iterate& it, double beta1, double eta = 0.4,
                      kernels::Exec exec = kernels::Exec::Serial);

NewtonDirection recover_direction(const PreprocessedLp& pre, const Iterate& it, const MnesSystem& sys,
                                  const Vec& z, double beta1);
NewtonDirection recover_direction(const PreprocessedLp& pre, const Iterate& it, const Vec& z, double beta1);

StepFunctions eval_step_functions(const LpProblem& problem, const Iterate& it, const NewtonDirection& dir,
                                  double alpha, double gamma1, double beta2);

double compute_nu(const NewtonDirection& dir, double gamma1, int n);

/// min{1, delta * x^T s / nu}; 1 when nu = 0.
double compute_alpha_tilde(const Iterate& it, double nu, const IpmParams& params);

/// Largest alpha (backtracking, then bisection to 1e-3) such that every alpha'
/// in [0, alpha] keeps x, s > 0, the neighborhood N(gamma1, gamma2) and the
/// Armijo decrease h >= 0. gamma2 is the value in force for the run.
/// Throws StepFailureError when no alpha >= 1e-8 is admissible.
StepReport max_step_length(const LpProblem& problem, const Iterate& it, const NewtonDirection& dir,
                           const IpmParams& params, double gamma2, double theta_prev = 1.0);

Iterate take_step(const Iterate& it, const NewtonDirection& dir, double alpha);

}  // namespace qipm
