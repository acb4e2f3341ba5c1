#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace qipm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Standard-form linear optimization problem
///   min c^T x  s.t.  A x = b, x >= 0
/// with dual  max b^T y  s.t.  A^T y + s = c, s >= 0.
///
/// Construction checks that the dimensions agree and that m <= n; full row
/// rank is checked by preprocess().
struct LpProblem {
  Mat A;
  Vec b;
  Vec c;
  /// Set when the data is known to be integral (enables binary_length()).
  bool integer_data = false;
  /// Known optimal triple, when the source provides one (generator, JSON).
  std::optional<Vec> x_star;
  std::optional<Vec> y_star;
  std::optional<Vec> s_star;

  LpProblem() = default;
  LpProblem(Mat A_, Vec b_, Vec c_);

  int m() const { return static_cast<int>(A.rows()); }
  int n() const { return static_cast<int>(A.cols()); }

  /// Throws DimensionError when A, b, c (and any known solution) disagree.
  void validate() const;
};

/// Basis-normalized form of an LpProblem: A_hat = A_B^{-1} A, b_hat = A_B^{-1} b.
struct PreprocessedLp {
  LpProblem problem;
  /// Column indices of the chosen basis, in the order that makes A_hat(:, basis[k]) = e_k.
  std::vector<int> basis;
  Mat basis_inverse;
  Mat A_hat;
  Vec b_hat;
  /// Condition number of A_hat.
  double kappa_hat = 1.0;
  /// ||A_hat||_2 + ||b_hat||_2.
  double phi = 0.0;

  int m() const { return problem.m(); }
  int n() const { return problem.n(); }
};

struct Iterate {
  Vec x;
  Vec y;
  Vec s;
};

struct Residuals {
  Vec rp;  ///< b - A x
  Vec rd;  ///< c - A^T y - s
  double mu = 0.0;

  /// ||(R_P, R_D)||_2
  double norm() const;
};

/// How the main loop decides that no optimal solution lies in the omega box.
enum class InfeasibilityTest {
  /// theta omega ||(x,s)||_1 > theta^2 n mu^0 + 2 theta (1 - theta) n mu^0 + x^T s,
  /// which every iterate satisfies when an optimum with ||(x*,s*)||_inf <= omega exists.
  Certificate,
  /// ||(x,s)||_inf > omega.
  Box,
};

/// Parameters of the inexact infeasible interior point method.
struct IpmParams {
  double gamma1 = 0.5;
  /// Lower bound for gamma2; the solver uses max{gamma2, ||(R_P^0,R_D^0)|| / mu^0}.
  double gamma2 = 1.0;
  double beta1 = 0.5;
  double beta2 = 0.9995;
  double eta = 0.4;
  double omega = 10.0;
  double zeta_hat = 1e-1;
  int max_iterations = 500;
  InfeasibilityTest infeasibility_test = InfeasibilityTest::Certificate;
  /// Compute kappa(MNES) and kappa(NES) for the trace every iteration.
  bool condition_diagnostics = true;

  /// Throws ConfigError unless gamma1 in (0,1), gamma2 >= 1,
  /// 0 < eta < beta1 < beta2 < 1, omega >= 1, zeta_hat > 0, max_iterations > 0.
  void validate() const;
};

struct ConditionReport {
  double kappa = 1.0;
  double norm2 = 0.0;
  double norm_frobenius = 0.0;
  double sigma_min = 0.0;
  /// sigma_min < 1e-14 * sigma_max; kappa is +inf in that case.
  bool singular = false;
};

double duality_measure(const LpProblem& problem, const Iterate& it);

Residuals residuals(const LpProblem& problem, const Iterate& it);

/// Membership in N(gamma1, gamma2):
///   min_i x_i s_i >= gamma1 mu  and  ||(R_P, R_D)|| <= gamma2 mu.
/// Throws InvalidIterateError when x or s has a nonpositive component.
bool in_neighborhood(const LpProblem& problem, const Iterate& it, double gamma1, double gamma2);

/// (x, s) >= 0, x^T s / n <= zeta and ||(R_P, R_D)|| <= zeta.
bool is_zeta_optimal(const LpProblem& problem, const Iterate& it, double zeta);

/// Bit length L = mn + m + n + sum ceil(log2(|a_ij|+1)) + sum ceil(log2(|c_i|+1)) + sum ceil(log2(|b_j|+1)).
/// Throws NonIntegerDataError when any entry is not integral.
std::int64_t binary_length(const LpProblem& problem);

/// Choose a basis and normalize. Uses an identity block when A contains one,
/// otherwise the first m linearly independent columns in index order.
/// Throws RankDeficientError naming the dependent rows.
PreprocessedLp preprocess(const LpProblem& problem);

ConditionReport condition_report(const Mat& matrix);

Iterate make_iterate(const Vec& x, const Vec& y, const Vec& s);

}  // namespace qipm
