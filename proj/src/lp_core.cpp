#include "qipm/lp_core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "qipm/errors.hpp"

namespace qipm {

namespace {

void check_iterate_dims(const LpProblem& problem, const Iterate& it) {
  if (it.x.size() != problem.n() || it.s.size() != problem.n() || it.y.size() != problem.m()) {
    std::ostringstream os;
    os << "iterate dimensions (x=" << it.x.size() << ", y=" << it.y.size() << ", s=" << it.s.size()
       << ") do not match problem (m=" << problem.m() << ", n=" << problem.n() << ")";
    throw DimensionError(os.str());
  }
}

std::int64_t bits_of(double v) {
  const double a = std::abs(v);
  if (a < 9.0e15) {
    return static_cast<std::int64_t>(std::bit_width(static_cast<std::uint64_t>(a)));
  }
  return static_cast<std::int64_t>(std::ceil(std::log2(a + 1.0)));
}

bool is_integral(double v) { return std::isfinite(v) && std::floor(v) == v; }

// Identity columns e_0..e_{m-1}, smallest index first; empty when any row lacks one.
std::vector<int> find_identity_block(const Mat& A) {
  const int m = static_cast<int>(A.rows());
  std::vector<int> basis(m, -1);
  for (int j = 0; j < A.cols(); ++j) {
    int unit_row = -1;
    bool ok = true;
    for (int i = 0; i < m && ok; ++i) {
      if (A(i, j) == 1.0) {
        if (unit_row >= 0) ok = false;
        unit_row = i;
      } else if (A(i, j) != 0.0) {
        ok = false;
      }
    }
    if (ok && unit_row >= 0 && basis[unit_row] < 0) basis[unit_row] = j;
  }
  if (std::any_of(basis.begin(), basis.end(), [](int j) { return j < 0; })) return {};
  return basis;
}

// Greedy Gauss-Jordan scan: first m linearly independent columns in index order.
std::vector<int> first_independent_columns(const Mat& A) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  const double tol = 1e-12 * std::max(A.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  Mat W = A;
  std::vector<bool> used(m, false);
  std::vector<int> cols;
  for (int j = 0; j < n && static_cast<int>(cols.size()) < m; ++j) {
    int pivot = -1;
    double best = 0.0;
    for (int r = 0; r < m; ++r) {
      if (!used[r] && std::abs(W(r, j)) > best) {
        best = std::abs(W(r, j));
        pivot = r;
      }
    }
    if (pivot < 0 || best <= tol) continue;
    W.row(pivot) /= W(pivot, j);
    for (int r = 0; r < m; ++r) {
      if (r != pivot && W(r, j) != 0.0) W.row(r) -= W(r, j) * W.row(pivot);
    }
    used[pivot] = true;
    cols.push_back(j);
  }
  if (static_cast<int>(cols.size()) < m) {
    std::vector<int> dependent;
    for (int r = 0; r < m; ++r)
      if (!used[r]) dependent.push_back(r);
    std::ostringstream os;
    os << "constraint matrix is rank deficient (rank " << cols.size() << " < m=" << m
       << "); dependent rows:";
    for (int r : dependent) os << ' ' << r;
    throw RankDeficientError(os.str(), dependent);
  }
  return cols;
}

}  // namespace

LpProblem::LpProblem(Mat A_, Vec b_, Vec c_) : A(std::move(A_)), b(std::move(b_)), c(std::move(c_)) {
  validate();
}

void LpProblem::validate() const {
  if (A.rows() == 0 || A.cols() == 0) throw DimensionError("constraint matrix is empty");
  if (b.size() != A.rows()) throw DimensionError("b has length " + std::to_string(b.size()) + ", expected m=" + std::to_string(A.rows()));
  if (c.size() != A.cols()) throw DimensionError("c has length " + std::to_string(c.size()) + ", expected n=" + std::to_string(A.cols()));
  if (A.rows() > A.cols()) throw DimensionError("standard form requires m <= n");
  if (x_star && x_star->size() != A.cols()) throw DimensionError("x_star has wrong length");
  if (y_star && y_star->size() != A.rows()) throw DimensionError("y_star has wrong length");
  if (s_star && s_star->size() != A.cols()) throw DimensionError("s_star has wrong length");
}

double Residuals::norm() const { return std::sqrt(rp.squaredNorm() + rd.squaredNorm()); }

void IpmParams::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (!(gamma1 > 0.0 && gamma1 < 1.0)) fail("gamma1 must lie in (0,1)");
  if (!(gamma2 >= 1.0)) fail("gamma2 must be >= 1");
  if (!(eta > 0.0 && eta < beta1 && beta1 < beta2 && beta2 < 1.0))
    fail("parameters must satisfy 0 < eta < beta1 < beta2 < 1");
  if (!(omega >= 1.0)) fail("omega must be >= 1");
  if (!(zeta_hat > 0.0)) fail("zeta_hat must be positive");
  if (max_iterations <= 0) fail("max_iterations must be positive");
}

double duality_measure(const LpProblem& problem, const Iterate& it) {
  if (it.x.size() != problem.n() || it.s.size() != problem.n())
    throw DimensionError("x and s must have length n");
  return it.x.dot(it.s) / static_cast<double>(problem.n());
}

Residuals residuals(const LpProblem& problem, const Iterate& it) {
  check_iterate_dims(problem, it);
  Residuals r;
  r.rp = problem.b - problem.A * it.x;
  r.rd = problem.c - problem.A.transpose() * it.y - it.s;
  r.mu = it.x.dot(it.s) / static_cast<double>(problem.n());
  return r;
}

bool in_neighborhood(const LpProblem& problem, const Iterate& it, double gamma1, double gamma2) {
  check_iterate_dims(problem, it);
  if ((it.x.array() <= 0.0).any() || (it.s.array() <= 0.0).any())
    throw InvalidIterateError("neighborhood test requires x > 0 and s > 0");
  const Residuals r = residuals(problem, it);
  const double min_product = it.x.cwiseProduct(it.s).minCoeff();
  return min_product >= gamma1 * r.mu && r.norm() <= gamma2 * r.mu;
}

bool is_zeta_optimal(const LpProblem& problem, const Iterate& it, double zeta) {
  check_iterate_dims(problem, it);
  if ((it.x.array() < 0.0).any() || (it.s.array() < 0.0).any()) return false;
  const Residuals r = residuals(problem, it);
  return r.mu <= zeta && r.norm() <= zeta;
}

std::int64_t binary_length(const LpProblem& problem) {
  auto all_integral = [](const auto& v) {
    return std::all_of(v.data(), v.data() + v.size(), [](double e) { return is_integral(e); });
  };
  if (!all_integral(problem.A) || !all_integral(problem.b) || !all_integral(problem.c))
    throw NonIntegerDataError("binary length is defined for integer data only");
  const std::int64_t m = problem.m();
  const std::int64_t n = problem.n();
  std::int64_t L = m * n + m + n;
  for (Eigen::Index k = 0; k < problem.A.size(); ++k) L += bits_of(problem.A.data()[k]);
  for (Eigen::Index k = 0; k < problem.c.size(); ++k) L += bits_of(problem.c[k]);
  for (Eigen::Index k = 0; k < problem.b.size(); ++k) L += bits_of(problem.b[k]);
  return L;
}

PreprocessedLp preprocess(const LpProblem& problem) {
  problem.validate();
  PreprocessedLp pre;
  pre.problem = problem;
  const int m = problem.m();

  std::vector<int> basis = find_identity_block(problem.A);
  if (basis.empty()) {
    basis = first_independent_columns(problem.A);
    Mat AB(m, m);
    for (int k = 0; k < m; ++k) AB.col(k) = problem.A.col(basis[k]);
    pre.basis_inverse = AB.partialPivLu().inverse();
  } else {
    pre.basis_inverse = Mat::Identity(m, m);
  }
  pre.basis = basis;
  pre.A_hat = pre.basis_inverse * problem.A;
  for (int k = 0; k < m; ++k) {
    pre.A_hat.col(basis[k]).setZero();
    pre.A_hat(k, basis[k]) = 1.0;
  }
  pre.b_hat = pre.basis_inverse * problem.b;
  const ConditionReport rep = condition_report(pre.A_hat);
  pre.kappa_hat = rep.kappa;
  pre.phi = rep.norm2 + pre.b_hat.norm();
  return pre;
}

ConditionReport condition_report(const Mat& matrix) {
  if (matrix.size() == 0) throw DimensionError("condition_report needs a nonempty matrix");
  Eigen::BDCSVD<Mat> svd(matrix);
  const Vec& sv = svd.singularValues();
  ConditionReport rep;
  rep.norm2 = sv.size() > 0 ? sv[0] : 0.0;
  rep.sigma_min = sv.size() > 0 ? sv[sv.size() - 1] : 0.0;
  rep.norm_frobenius = matrix.norm();
  rep.singular = !(rep.sigma_min >= 1e-14 * rep.norm2) || rep.norm2 == 0.0;
  rep.kappa = rep.singular ? std::numeric_limits<double>::infinity() : rep.norm2 / rep.sigma_min;
  return rep;
}

Iterate make_iterate(const Vec& x, const Vec& y, const Vec& s) { return Iterate{x, y, s}; }

}  // namespace qipm
