#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "qipm/lp_core.hpp"

namespace qipm {

/// Inexact linear solve  M z = rhs  with target ||M z - rhs||_2 <= eps.
struct SolveRequest {
  Mat M;
  Vec rhs;
  double eps = 0.0;
};

struct SolveOutcome {
  Vec z;
  double residual = 0.0;
  int iterations = 0;
  std::string solver;
  // Quantum path statistics (zero for classical solvers).
  int system_qubits = 0;
  int clock_qubits = 0;
  std::int64_t shots = 0;
  double success_probability = 0.0;
  int attempts = 1;
};

/// Cholesky solve plus one refinement step. Throws FactorizationError unless M is PD.
SolveOutcome solve_exact(const SolveRequest& request);

/// Conjugate gradient until the residual target; cap 10 * dim iterations.
/// Throws ResidualNotMetError carrying the best iterate at the cap.
SolveOutcome solve_cg(const SolveRequest& request);

enum class NoiseMode { Uniform, Adversarial };

/// Exact solution plus p with ||M p|| = rho_fill * eps. In Uniform mode M p is
/// uniform on the sphere; in Adversarial mode p follows the smallest eigenvector of M.
SolveOutcome solve_noisy_oracle(const SolveRequest& request, NoiseMode mode, std::uint64_t seed,
                                double rho_fill = 0.9);

/// Uniform contract used by the interior point loop.
class LinearSolver {
 public:
  virtual ~LinearSolver() = default;
  virtual SolveOutcome solve(const SolveRequest& request) = 0;
  virtual std::string name() const = 0;
};

class ExactSolver : public LinearSolver {
 public:
  SolveOutcome solve(const SolveRequest& request) override { return solve_exact(request); }
  std::string name() const override { return "exact"; }
};

class CgSolver : public LinearSolver {
 public:
  SolveOutcome solve(const SolveRequest& request) override { return solve_cg(request); }
  std::string name() const override { return "cg"; }
};

/// Advances its seed on every call so a run is deterministic given the base seed.
class NoisyOracleSolver : public LinearSolver {
 public:
  explicit NoisyOracleSolver(std::uint64_t seed, double rho_fill = 0.9, NoiseMode mode = NoiseMode::Uniform)
      : seed_(seed), rho_fill_(rho_fill), mode_(mode) {}
  SolveOutcome solve(const SolveRequest& request) override;
  std::string name() const override { return "noisy"; }

 private:
  std::uint64_t seed_;
  std::uint64_t calls_ = 0;
  double rho_fill_;
  NoiseMode mode_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace qipm
