#include "qipm/newton.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "qipm/errors.hpp"

namespace qipm {

namespace {

void require_interior(const Iterate& it) {
  if ((it.x.array() <= 0.0).any() || (it.s.array() <= 0.0).any())
    throw InvalidIterateError("x and s must be strictly positive");
}

// q(a) = c0 + c1 a + c2 a^2
struct Quadratic {
  double c0, c1, c2;
  double at(double a) const { return c0 + a * (c1 + a * c2); }
  // Minimum over [0, hi], exact: endpoints plus the vertex when it lies inside.
  double min_on(double hi) const {
    double lo_val = std::min(at(0.0), at(hi));
    if (c2 > 0.0) {
      const double v = -c1 / (2.0 * c2);
      if (v > 0.0 && v < hi) lo_val = std::min(lo_val, at(v));
    }
    return lo_val;
  }
};

struct StepModel {
  std::vector<Quadratic> G;
  Quadratic residual_gap;
  Quadratic h;
  Vec x, dx, s, ds;
  double tol;

  bool positive_at(double a) const {
    return ((x + a * dx).array() > 0.0).all() && ((s + a * ds).array() > 0.0).all();
  }

  bool admissible(double alpha) const {
    // x and s are linear in alpha, so the endpoint decides positivity.
    if (!positive_at(alpha)) return false;
    auto ok = [&](const Quadratic& q) {
      for (int k = 0; k <= 16; ++k)
        if (q.at(alpha * k / 16.0) < -tol) return false;
      return q.min_on(alpha) >= -tol;
    };
    for (const auto& q : G)
      if (!ok(q)) return false;
    return ok(residual_gap) && ok(h);
  }
};

StepModel make_model(const LpProblem& problem, const Iterate& it, const NewtonDirection& dir,
                     const IpmParams& params, double gamma2) {
  const int n = problem.n();
  const double xs = it.x.dot(it.s);
  const double lin = it.x.dot(dir.ds) + it.s.dot(dir.dx);
  const double quad = dir.dx.dot(dir.ds);
  const double g1n = params.gamma1 / n;
  StepModel model;
  model.G.reserve(n);
  for (int i = 0; i < n; ++i) {
    model.G.push_back({it.x[i] * it.s[i] - g1n * xs, it.x[i] * dir.ds[i] + it.s[i] * dir.dx[i] - g1n * lin,
                       dir.dx[i] * dir.ds[i] - g1n * quad});
  }
  const double rnorm = residuals(problem, it).norm();
  model.residual_gap = {gamma2 * xs / n - rnorm, gamma2 * lin / n + rnorm, gamma2 * quad / n};
  model.h = {0.0, -(1.0 - params.beta2) * xs - lin, -quad};
  model.x = it.x;
  model.dx = dir.dx;
  model.s = it.s;
  model.ds = dir.ds;
  model.tol = 1e-13 * std::max(xs, rnorm);
  return model;
}

}  // namespace

MnesSystem build_mnes(const PreprocessedLp& pre, const Iterate& it, double beta1, double eta,
                      kernels::Exec exec) {
  const LpProblem& P = pre.problem;
  if (it.x.size() != P.n() || it.s.size() != P.n() || it.y.size() != P.m())
    throw DimensionError("iterate dimensions do not match the problem");
  require_interior(it);
  const int m = P.m();
  const int n = P.n();
  MnesSystem sys;
  sys.mu = it.x.dot(it.s) / n;
  sys.eps_target = eta * std::sqrt(sys.mu) / std::sqrt(static_cast<double>(n));
  sys.d = (it.x.array() / it.s.array()).sqrt().matrix();
  sys.d_basis.resize(m);
  for (int k = 0; k < m; ++k) sys.d_basis[k] = sys.d[pre.basis[k]];
  const Vec inv_db = sys.d_basis.cwiseInverse();
  sys.E = inv_db.asDiagonal() * pre.A_hat * sys.d.asDiagonal();
  sys.M = kernels::gram(sys.E, exec);

  const Vec rd = P.c - P.A.transpose() * it.y - it.s;
  const Vec inv_s = it.s.cwiseInverse();
  const Vec d2 = sys.d.cwiseAbs2();
  const Vec inner = pre.b_hat - beta1 * sys.mu * (pre.A_hat * inv_s) + pre.A_hat * d2.cwiseProduct(rd);
  sys.sigma = inv_db.cwiseProduct(inner);
  return sys;
}

NewtonDirection recover_direction(const PreprocessedLp& pre, const Iterate& it, const MnesSystem& sys,
                                  const Vec& z, double beta1) {
  const LpProblem& P = pre.problem;
  const int m = P.m();
  const int n = P.n();
  if (z.size() != m) throw DimensionError("z must have length m");
  NewtonDirection dir;
  dir.z = z;
  dir.r_hat = sys.M * z - sys.sigma;
  dir.dy = pre.basis_inverse.transpose() * z.cwiseQuotient(sys.d_basis);
  dir.v = Vec::Zero(n);
  for (int k = 0; k < m; ++k) dir.v[pre.basis[k]] = sys.d_basis[k] * dir.r_hat[k];
  const Vec rd = P.c - P.A.transpose() * it.y - it.s;
  dir.ds = rd - P.A.transpose() * dir.dy;
  const double mu = it.x.dot(it.s) / n;
  dir.dx = (beta1 * mu) * it.s.cwiseInverse() - it.x - sys.d.cwiseAbs2().cwiseProduct(dir.ds) - dir.v;
  return dir;
}

NewtonDirection recover_direction(const PreprocessedLp& pre, const Iterate& it, const Vec& z, double beta1) {
  return recover_direction(pre, it, build_mnes(pre, it, beta1), z, beta1);
}

StepFunctions eval_step_functions(const LpProblem& problem, const Iterate& it, const NewtonDirection& dir,
                                  double alpha, double gamma1, double beta2) {
  const int n = problem.n();
  const Vec xa = it.x + alpha * dir.dx;
  const Vec sa = it.s + alpha * dir.ds;
  const double xs = it.x.dot(it.s);
  const double xsa = xa.dot(sa);
  StepFunctions f;
  f.G_min = (xa.cwiseProduct(sa).array() - gamma1 * xsa / n).minCoeff();
  f.g = xsa - (1.0 - alpha) * xs;
  f.h = (1.0 - alpha * (1.0 - beta2)) * xs - xsa;
  return f;
}

double compute_nu(const NewtonDirection& dir, double gamma1, int n) {
  const double q = dir.dx.dot(dir.ds);
  const double elem = (dir.dx.cwiseProduct(dir.ds).array() - (gamma1 / n) * q).abs().maxCoeff();
  return std::max(std::abs(q), elem);
}

double compute_alpha_tilde(const Iterate& it, double nu, const IpmParams& params) {
  const double n = static_cast<double>(it.x.size());
  const double d1 = (1.0 - params.gamma1) * (params.beta1 - params.eta) / n;
  const double d2 = params.beta1 - params.eta;
  const double d3 = params.beta2 - params.beta1 + params.eta;
  double delta = std::min({d1, d2, d3});
  const double d3_rigorous = params.beta2 - params.beta1 - params.eta;
  if (d3_rigorous > 0.0) delta = std::min(delta, d3_rigorous);
  if (nu <= 0.0) return 1.0;
  return std::min(1.0, delta * it.x.dot(it.s) / nu);
}

StepReport max_step_length(const LpProblem& problem, const Iterate& it, const NewtonDirection& dir,
                           const IpmParams& params, double gamma2, double theta_prev) {
  const int n = problem.n();
  StepReport rep;
  rep.delta1 = (1.0 - params.gamma1) * (params.beta1 - params.eta) / n;
  rep.delta2 = params.beta1 - params.eta;
  rep.delta3 = params.beta2 - params.beta1 + params.eta;
  rep.nu = compute_nu(dir, params.gamma1, n);
  rep.alpha_tilde = compute_alpha_tilde(it, rep.nu, params);

  const StepModel model = make_model(problem, it, dir, params, gamma2);
  double lo = 1.0;
  if (!model.admissible(1.0)) {
    lo = 0.5;
    while (lo >= 1e-8 && !model.admissible(lo)) lo *= 0.5;
    if (lo < 1e-8) {
      if (model.admissible(rep.alpha_tilde) && rep.alpha_tilde >= 1e-8) {
        lo = rep.alpha_tilde;
      } else {
        throw StepFailureError("no admissible step length >= 1e-8; the linear solve residual is likely too large");
      }
    }
    double hi = std::min(1.0, 2.0 * lo);
    while (hi - lo > 1e-3) {
      const double mid = 0.5 * (lo + hi);
      (model.admissible(mid) ? lo : hi) = mid;
    }
    if (rep.alpha_tilde > lo && model.admissible(rep.alpha_tilde)) lo = rep.alpha_tilde;
  }
  rep.alpha_hat = lo;
  rep.theta = theta_prev * (1.0 - lo);
  return rep;
}

Iterate take_step(const Iterate& it, const NewtonDirection& dir, double alpha) {
  return Iterate{it.x + alpha * dir.dx, it.y + alpha * dir.dy, it.s + alpha * dir.ds};
}

}  // namespace qipm
