#include "qipm/solvers.hpp"

#include <cmath>
#include <random>

#include "qipm/errors.hpp"

namespace qipm {

namespace {

void check_request(const SolveRequest& r) {
  if (r.M.rows() != r.M.cols()) throw DimensionError("coefficient matrix must be square");
  if (r.rhs.size() != r.M.rows()) throw DimensionError("right-hand side has the wrong length");
  if (!(r.eps > 0.0)) throw ConfigError("residual target must be positive");
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SolveOutcome solve_exact(const SolveRequest& request) {
  check_request(request);
  Eigen::LLT<Mat> llt(request.M);
  if (llt.info() != Eigen::Success) throw FactorizationError("Cholesky factorization failed: matrix is not positive definite");
  SolveOutcome out;
  out.z = llt.solve(request.rhs);
  out.z += llt.solve(request.rhs - request.M * out.z);
  out.residual = (request.M * out.z - request.rhs).norm();
  out.iterations = 1;
  out.solver = "exact";
  return out;
}

SolveOutcome solve_cg(const SolveRequest& request) {
  check_request(request);
  const Mat& M = request.M;
  const Eigen::Index dim = M.rows();
  const int cap = static_cast<int>(10 * dim);
  Vec z = Vec::Zero(dim);
  Vec r = request.rhs;
  Vec p = r;
  double rr = r.squaredNorm();
  Vec best = z;
  double best_res = std::sqrt(rr);
  int it = 0;
  while (std::sqrt(rr) > request.eps && it < cap) {
    const Vec Mp = M * p;
    const double pMp = p.dot(Mp);
    if (!(pMp > 0.0)) break;
    const double a = rr / pMp;
    z += a * p;
    r -= a * Mp;
    ++it;
    // Recompute the true residual now and then to limit drift.
    if (it % 50 == 0) r = request.rhs - M * z;
    const double rr_new = r.squaredNorm();
    p = r + (rr_new / rr) * p;
    rr = rr_new;
    const double true_res = (M * z - request.rhs).norm();
    if (true_res < best_res) {
      best_res = true_res;
      best = z;
    }
  }
  const double res = (M * z - request.rhs).norm();
  if (res > request.eps) {
    if (res < best_res) {
      best = z;
      best_res = res;
    }
    throw ResidualNotMetError("conjugate gradient hit the iteration cap of " + std::to_string(cap) +
                                  " with residual " + std::to_string(best_res),
                              best, best_res);
  }
  SolveOutcome out;
  out.z = z;
  out.residual = res;
  out.iterations = it;
  out.solver = "cg";
  return out;
}

SolveOutcome solve_noisy_oracle(const SolveRequest& request, NoiseMode mode, std::uint64_t seed, double rho_fill) {
  SolveOutcome out = solve_exact(request);
  out.solver = "noisy";
  if (rho_fill == 0.0) return out;
  const Eigen::Index dim = request.M.rows();
  const double target = rho_fill * request.eps;
  Vec p;
  if (mode == NoiseMode::Uniform) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec u(dim);
    do {
      for (Eigen::Index i = 0; i < dim; ++i) u[i] = normal(rng);
    } while (u.norm() == 0.0);
    u.normalize();
    Eigen::LLT<Mat> llt(request.M);
    p = llt.solve(u * target);
  } else {
    Eigen::SelfAdjointEigenSolver<Mat> eig(request.M);
    const double lmin = eig.eigenvalues()[0];
    Vec v = eig.eigenvectors().col(0);
    std::mt19937_64 rng(seed);
    if (std::bernoulli_distribution(0.5)(rng)) v = -v;
    p = v * (target / lmin);
  }
  out.z += p;
  out.residual = (request.M * out.z - request.rhs).norm();
  return out;
}

SolveOutcome NoisyOracleSolver::solve(const SolveRequest& request) {
  return solve_noisy_oracle(request, mode_, mix_seed(seed_, calls_++), rho_fill_);
}

}  // namespace qipm
