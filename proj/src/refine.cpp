#include "qipm/refine.hpp"

#include <algorithm>
#include <cmath>

#include "qipm/errors.hpp"

namespace qipm {

namespace {

double max_kappa(const IpmResult& res) {
  double k = 0.0;
  for (const auto& row : res.trace) k = std::max(k, row.kappa_mnes);
  return k;
}

}  // namespace

void IrParams::validate() const {
  if (!(zeta > 0.0 && zeta <= zeta_hat && zeta_hat < 1.0)) throw ConfigError("need 0 < zeta <= zeta_hat < 1");
  if (!(rho >= 2.0) || std::floor(rho) != rho) throw ConfigError("rho must be an integer >= 2");
  if (!(omega_initial >= 1.0) || !(omega_inner >= 1.0)) throw ConfigError("omega must be >= 1");
  if (!(shift_cap > 0.0)) throw ConfigError("shift cap must be positive");
  if (max_rounds < 0) throw ConfigError("max_rounds must be nonnegative");
}

std::pair<Vec, Vec> refining_data(const LpProblem& problem, const Vec& x_star, const Vec& y_star) {
  if (x_star.size() != problem.n() || y_star.size() != problem.m())
    throw DimensionError("refining data: solution dimensions do not match the problem");
  return {problem.b - problem.A * x_star, problem.c - problem.A.transpose() * y_star};
}

double residual_measure(const Vec& b_bar, const Vec& c_bar, const Vec& x_star) {
  if (c_bar.size() != x_star.size()) throw DimensionError("residual measure: c_bar and x* differ in length");
  const double rb = b_bar.size() > 0 ? b_bar.cwiseAbs().maxCoeff() : 0.0;
  const double rc = c_bar.size() > 0 ? (-c_bar).maxCoeff() : 0.0;
  const double comp = c_bar.cwiseProduct(x_star).cwiseAbs().sum();
  return std::max({rb, rc, comp});
}

std::pair<double, double> scaling_update(double r, double rho, double nabla_prev) {
  if (!(r > 0.0)) throw ConfigError("scaling update needs r > 0");
  const double pi = std::max(r, 1.0 / (rho * nabla_prev));
  const int e = std::max(0, static_cast<int>(std::ceil(std::log2(1.0 / pi) - 1e-12)));
  return {pi, std::ldexp(1.0, e)};
}

IrResult ir_solve(const LpProblem& problem, const IrParams& params, LinearSolver& solver) {
  params.validate();
  IrResult out;
  out.round_bound = static_cast<int>(std::ceil(std::log(params.zeta) / std::log(params.zeta_hat) - 1e-12));
  const PreprocessedLp pre = preprocess(problem);

  IpmParams ip = params.inner;
  ip.zeta_hat = params.zeta_hat;
  ip.omega = params.omega_initial;
  const IpmResult first = solve(pre, ip, solver);
  IrRound r0;
  r0.inner_iters = first.iterations;
  r0.max_kappa_mnes = max_kappa(first);
  r0.inner_status = first.status;
  r0.inner_trace = first.trace;
  if (first.status != IpmStatus::Optimal) {
    out.status = first.status;
    out.composite = first.iterate;
    out.rounds.push_back(r0);
    out.message = "initial solve: " + first.message;
    return out;
  }
  Vec x = first.iterate.x;
  Vec y = first.iterate.y;
  Vec s = first.iterate.s;
  {
    const auto [bb, cb] = refining_data(problem, x, y);
    r0.r = residual_measure(bb, cb, x);
  }
  out.rounds.push_back(r0);

  double nabla_prev = 1.0;
  double r_prev = r0.r;
  ip.omega = params.omega_inner;

  for (int round = 1;; ++round) {
    const auto [b_bar, c_bar] = refining_data(problem, x, y);
    const double r = residual_measure(b_bar, c_bar, x);
    if (r <= params.zeta) {
      out.converged = true;
      break;
    }
    if (round > params.max_rounds) {
      out.message = "refinement round cap of " + std::to_string(params.max_rounds) + " reached";
      break;
    }
    const auto [pi, nabla] = scaling_update(r, params.rho, nabla_prev);

    LpProblem inner;
    Vec lower, kappa;
    if (params.mode == IrMode::Literal) {
      inner = LpProblem(problem.A, nabla * b_bar, nabla * c_bar);
    } else {
      lower = (nabla * x).cwiseMin(params.shift_cap);
      kappa = (nabla * s).cwiseMin(params.shift_cap);
      const Vec d = c_bar - s;
      inner = LpProblem(problem.A, nabla * b_bar + problem.A * lower, nabla * d + kappa);
    }
    PreprocessedLp inner_pre = pre;
    inner_pre.problem = inner;
    inner_pre.b_hat = pre.basis_inverse * inner.b;
    inner_pre.phi = pre.phi - pre.b_hat.norm() + inner_pre.b_hat.norm();
    const IpmResult res = solve(inner_pre, ip, solver);

    IrRound rec;
    rec.round = round;
    rec.nabla = nabla;
    rec.pi = pi;
    rec.inner_iters = res.iterations;
    rec.max_kappa_mnes = max_kappa(res);
    rec.inner_status = res.status;
    rec.inner_trace = res.trace;
    if (res.status != IpmStatus::Optimal) {
      out.status = res.status;
      out.message = "refinement round " + std::to_string(round) + ": " + res.message;
      rec.r = r;
      out.rounds.push_back(rec);
      break;
    }
    const Iterate& h = res.iterate;
    if (params.mode == IrMode::Literal) {
      x += h.x / nabla;
      y += h.y / nabla;
      s = h.s / nabla;
    } else {
      x += (h.x - lower) / nabla;
      y += h.y / nabla;
      s += (h.s - kappa) / nabla;
    }
    // Rounding can leave -1e-17 where a coordinate was shifted to its bound.
    x = x.cwiseMax(0.0);
    s = s.cwiseMax(0.0);
    nabla_prev = nabla;
    ++out.refinement_rounds;

    const auto [bb, cb] = refining_data(problem, x, y);
    rec.r = residual_measure(bb, cb, x);
    rec.composite_ok = is_zeta_optimal(problem, Iterate{x, y, s}, params.zeta_hat / nabla + 1e-12);
    rec.stagnated = rec.r >= r_prev;
    r_prev = rec.r;
    out.rounds.push_back(rec);
  }
  out.composite = Iterate{x, y, s};
  const auto [bb, cb] = refining_data(problem, x, y);
  out.final_r = residual_measure(bb, cb, x);
  return out;
}

}  // namespace qipm
