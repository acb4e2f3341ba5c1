#pragma once

#include <cstdint>

#include "qipm/kernels.hpp"
#include "qipm/lp_core.hpp"
#include "qipm/solvers.hpp"

namespace qipm::qlsa {

/// Normalized Hermitian form of M z = sigma.
///
/// M_bar = H / ||M|| padded with an identity block to a power of two, where H
/// is M itself when symmetric and the dilation [[0, M], [M^T, 0]] otherwise.
/// sigma_bar = (sigma or (sigma; 0), zero padded) / ||M||, so M_bar^{-1} sigma_bar
/// carries the original solution. The QLSP solution is w = M_bar^{-1} |sigma_bar>.
struct QlspInstance {
  Mat M_bar;
  Vec sigma_bar;
  Vec sigma_state;  ///< |sigma_bar>
  double norm_M = 0.0;
  double norm_sigma = 0.0;
  double norm_sigma_bar = 0.0;
  bool dilated = false;
  int p = 0;         ///< original dimension
  int p_padded = 0;  ///< power of two
  double eps_lsp = 0.0;
  double eps_qlsp = 0.0;
  double eps_qlsa = 0.0;
  double eps_qta = 0.0;
  /// sigma = 0: the solution is zero and no quantum solve is needed.
  bool zero_rhs = false;
};

struct QuantumSolveStats {
  int system_qubits = 0;
  int clock_qubits = 0;
  int total_qubits = 0;
  std::int64_t shots = 0;
  double success_probability = 0.0;
};

QlspInstance to_qlsp(const Mat& M, const Vec& sigma, double eps_lsp);

/// Total circuit qubits for condition number kappa from the sizing table
/// (kappa rounded up to the next power of two). Throws ConditionError for kappa > 2^11.
int clock_qubits_for_condition(double kappa);

struct HhlOptions {
  /// 0 selects the default from the spectrum and the error budget.
  int clock_qubits = 0;
  kernels::Exec exec = kernels::Exec::Parallel;
};

struct HhlResult {
  Vec state;  ///< normalized, real
  QuantumSolveStats stats;
};

/// Clock register size chosen when HhlOptions::clock_qubits is 0.
int default_clock_qubits(const QlspInstance& qlsp);

/// Gate-level statevector simulation of phase estimation, eigenvalue inversion
/// and uncomputation, post-selected on ancilla = 1 and clock = 0.
/// Register layout (most significant first): ancilla | clock | system.
/// Throws SizeError beyond 2^12 system amplitudes or 24 qubits, ConditionError
/// when an eigenvalue lies below 2^-c.
HhlResult hhl_statevector_solve(const QlspInstance& qlsp, const HhlOptions& options = {});

/// In-place QFT (or its inverse) on bits [offset, offset + bits).
void apply_qft(kernels::StateVector& psi, int offset, int bits, bool inverse,
               kernels::Exec exec = kernels::Exec::Serial);

struct TomographyResult {
  Vec magnitudes;
  std::int64_t shots = 0;
};

/// N = ceil(C p' / eps_qta^2) computational-basis shots (shots > 0 overrides N).
/// exact_amplitudes returns |state| directly.
TomographyResult sample_tomography(const Vec& state, double eps_qta, std::uint64_t seed,
                                   bool exact_amplitudes = false, double shot_constant = 4.0,
                                   std::int64_t shots = 0);

/// Sign recovery by interfering the state with the magnitude estimate: outcome
/// (0, i) occurs with probability |z_i + m_i|^2 / 4. Coordinate i is positive
/// when its count exceeds 0.4 m_i^2 N. Returns the signed estimate.
Vec estimate_signs(const Vec& state, const Vec& magnitudes, std::int64_t shots, std::uint64_t seed,
                   bool exact_amplitudes = false);

/// Scale so ||M z|| = ||sigma||, then keep whichever of +z, -z has the smaller residual.
/// Throws ZeroSolutionError for a zero candidate.
Vec postprocess(const Vec& candidate, const Mat& M, const Vec& sigma);

/// ||sigma_bar|| * w, then drop padding and the dilation's upper block.
Vec scale_back(const QlspInstance& qlsp, const Vec& w);

struct QlsaOptions {
  int clock_qubits = 0;
  bool exact_amplitudes = false;
  std::int64_t shots = 0;
  double shot_constant = 4.0;
  int retries = 3;
  kernels::Exec exec = kernels::Exec::Parallel;
};

/// to_qlsp -> hhl -> tomography + signs -> postprocess -> scale_back, retried
/// with doubled shots. Throws ResidualNotMetError after the last retry.
SolveOutcome solve_lsp_via_qlsa(const SolveRequest& request, std::uint64_t seed, const QlsaOptions& options = {});

class HhlSolver : public LinearSolver {
 public:
  explicit HhlSolver(std::uint64_t seed, QlsaOptions options = {}) : seed_(seed), options_(options) {}
  SolveOutcome solve(const SolveRequest& request) override;
  std::string name() const override { return "hhl"; }

 private:
  std::uint64_t seed_;
  std::uint64_t calls_ = 0;
  QlsaOptions options_;
};

}  // namespace qipm::qlsa
