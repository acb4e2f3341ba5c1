#include "qipm/qlsa_sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "qipm/errors.hpp"

namespace qipm::qlsa {

namespace {

using kernels::Complex;
using kernels::Exec;
using kernels::StateVector;

constexpr int kMaxQubits = 24;
// Default sizing stays below this so a solve takes well under a second.
constexpr int kDefaultQubitBudget = 20;
constexpr int kMaxSystemDim = 1 << 12;

int ceil_log2(std::int64_t v) {
  int k = 0;
  while ((std::int64_t{1} << k) < v) ++k;
  return k;
}

std::int64_t shots_for(double eps, int dim, double constant) {
  const double n = std::ceil(constant * dim / (eps * eps));
  return static_cast<std::int64_t>(std::clamp(n, 1.0, 1e15));
}

// Multinomial draw through sequential binomials.
std::vector<std::int64_t> multinomial(const std::vector<double>& probs, std::int64_t shots, std::mt19937_64& rng) {
  std::vector<std::int64_t> counts(probs.size(), 0);
  double rest = 0.0;
  for (double p : probs) rest += p;
  std::int64_t remaining = shots;
  for (std::size_t i = 0; i < probs.size() && remaining > 0; ++i) {
    if (i + 1 == probs.size()) {
      counts[i] = remaining;
      break;
    }
    const double q = rest > 0.0 ? std::clamp(probs[i] / rest, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::int64_t> bin(remaining, q);
    counts[i] = bin(rng);
    remaining -= counts[i];
    rest -= probs[i];
  }
  return counts;
}

bool is_symmetric(const Mat& M) {
  const double scale = std::max(M.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  return (M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

}  // namespace

QlspInstance to_qlsp(const Mat& M, const Vec& sigma, double eps_lsp) {
  if (M.rows() != M.cols() || M.rows() == 0) throw DimensionError("QLSP translation needs a nonempty square matrix");
  if (sigma.size() != M.rows()) throw DimensionError("right-hand side has the wrong length");
  QlspInstance q;
  q.p = static_cast<int>(M.rows());
  q.eps_lsp = eps_lsp;
  q.dilated = !is_symmetric(M);
  Mat H;
  Vec rhs;
  if (q.dilated) {
    const Eigen::Index p = M.rows();
    H = Mat::Zero(2 * p, 2 * p);
    H.topRightCorner(p, p) = M;
    H.bottomLeftCorner(p, p) = M.transpose();
    rhs = Vec::Zero(2 * p);
    rhs.head(p) = sigma;
  } else {
    H = 0.5 * (M + M.transpose());
    rhs = sigma;
  }
  q.norm_M = condition_report(M).norm2;
  if (!(q.norm_M > 0.0)) throw ConditionError("coefficient matrix is zero");
  const int dim = static_cast<int>(H.rows());
  q.p_padded = 1 << ceil_log2(dim);
  q.M_bar = Mat::Identity(q.p_padded, q.p_padded);
  q.M_bar.topLeftCorner(dim, dim) = H / q.norm_M;
  q.sigma_bar = Vec::Zero(q.p_padded);
  q.sigma_bar.head(dim) = rhs / q.norm_M;
  q.norm_sigma = sigma.norm();
  q.norm_sigma_bar = q.sigma_bar.norm();
  q.zero_rhs = q.norm_sigma == 0.0;
  if (q.zero_rhs) {
    q.sigma_state = Vec::Zero(q.p_padded);
    q.eps_qlsp = q.eps_qlsa = q.eps_qta = std::numeric_limits<double>::infinity();
  } else {
    q.sigma_state = q.sigma_bar / q.norm_sigma_bar;
    q.eps_qlsp = eps_lsp / q.norm_sigma;
    q.eps_qlsa = eps_lsp / (2.0 * q.norm_sigma);
    q.eps_qta = q.eps_qlsa;
  }
  return q;
}

int clock_qubits_for_condition(double kappa) {
  static constexpr std::array<int, 11> table{6, 6, 7, 8, 9, 10, 11, 12, 12, 13, 15};
  if (!(kappa >= 1.0)) throw ConditionError("condition number must be >= 1");
  int e = static_cast<int>(std::ceil(std::log2(kappa) - 1e-12));
  e = std::max(e, 1);
  if (e > 11) throw ConditionError("condition number above 2^11 is outside the sizing table");
  return table[static_cast<std::size_t>(e - 1)];
}

int default_clock_qubits(const QlspInstance& qlsp) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(qlsp.M_bar, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().cwiseAbs().minCoeff();
  const int sys = ceil_log2(qlsp.p_padded);
  if (!(lmin > 0.0)) return std::max(2, kDefaultQubitBudget - sys - 1);
  const double kappa = 1.0 / lmin;
  const double eps = std::isfinite(qlsp.eps_qlsa) && qlsp.eps_qlsa > 0.0 ? std::min(qlsp.eps_qlsa, 0.5) : 0.5;
  int c = static_cast<int>(std::ceil(std::log2(kappa))) + static_cast<int>(std::ceil(std::log2(1.0 / eps))) + 3;
  if (kappa <= 2048.0) c = std::max(c, clock_qubits_for_condition(kappa) - sys - 1);
  c = std::max(c, static_cast<int>(std::ceil(std::log2(1.0 / lmin))) + 1);
  return std::clamp(c, 2, std::max(2, kDefaultQubitBudget - sys - 1));
}

void apply_qft(StateVector& psi, int offset, int bits, bool inverse, Exec exec) {
  const double pi = std::numbers::pi;
  if (!inverse) {
    for (int j = bits - 1; j >= 0; --j) {
      kernels::apply_hadamard(psi, offset + j, exec);
      for (int k = j - 1; k >= 0; --k)
        kernels::apply_controlled_phase(psi, offset + k, offset + j, pi / std::ldexp(1.0, j - k), exec);
    }
    for (int i = 0; i < bits / 2; ++i) kernels::apply_swap(psi, offset + i, offset + bits - 1 - i, exec);
  } else {
    for (int i = 0; i < bits / 2; ++i) kernels::apply_swap(psi, offset + i, offset + bits - 1 - i, exec);
    for (int j = 0; j < bits; ++j) {
      for (int k = 0; k < j; ++k)
        kernels::apply_controlled_phase(psi, offset + k, offset + j, -pi / std::ldexp(1.0, j - k), exec);
      kernels::apply_hadamard(psi, offset + j, exec);
    }
  }
}

HhlResult hhl_statevector_solve(const QlspInstance& qlsp, const HhlOptions& options) {
  const Mat& M = qlsp.M_bar;
  const int dim = static_cast<int>(M.rows());
  if (dim > kMaxSystemDim) throw SizeError("system dimension " + std::to_string(dim) + " exceeds 2^12");
  if (qlsp.zero_rhs) throw ZeroSolutionError("right-hand side is zero");
  const int sys = ceil_log2(dim);
  const int c = options.clock_qubits > 0 ? options.clock_qubits : default_clock_qubits(qlsp);
  const int total = sys + c + 1;
  if (total > kMaxQubits)
    throw SizeError("circuit needs " + std::to_string(total) + " qubits, above the cap of " + std::to_string(kMaxQubits));

  Eigen::SelfAdjointEigenSolver<Mat> eig(M);
  const Vec& lambda = eig.eigenvalues();
  const Mat& V = eig.eigenvectors();
  const double lmin = lambda.cwiseAbs().minCoeff();
  if (lmin < std::ldexp(1.0, -c))
    throw ConditionError("eigenvalue " + std::to_string(lmin) + " is below the clock resolution 2^-" + std::to_string(c));
  const bool indefinite = lambda.minCoeff() < 0.0;

  const double pi = std::numbers::pi;
  const double t = indefinite ? pi * (1.0 - std::ldexp(1.0, 1 - c)) : pi;
  const std::int64_t clock_dim = std::int64_t{1} << c;
  const std::int64_t half_clock = clock_dim / 2;

  StateVector psi = StateVector::Zero(std::int64_t{1} << total);
  for (int j = 0; j < dim; ++j) psi[j] = qlsp.sigma_state[j];

  const Exec exec = options.exec;
  auto controlled_evolutions = [&](double sign) {
    for (int k = 0; k < c; ++k) {
      const double tk = sign * t * std::ldexp(1.0, k);
      Eigen::VectorXcd phases(dim);
      for (int j = 0; j < dim; ++j) phases[j] = std::polar(1.0, lambda[j] * tk);
      const Eigen::MatrixXcd U = V.cast<Complex>() * phases.asDiagonal() * V.transpose().cast<Complex>();
      kernels::apply_controlled_system_unitary(psi, sys + k, U, exec);
    }
  };

  for (int k = 0; k < c; ++k) kernels::apply_hadamard(psi, sys + k, exec);
  controlled_evolutions(1.0);
  apply_qft(psi, sys, c, true, exec);

  const double C = std::ldexp(1.0, -(c - 1));
  std::vector<double> f(static_cast<std::size_t>(clock_dim), 0.0);
  for (std::int64_t l = 0; l < clock_dim; ++l) {
    double lt;
    if (indefinite) {
      const std::int64_t ls = l < half_clock ? l : l - clock_dim;
      lt = static_cast<double>(ls) / static_cast<double>(half_clock - 1);
    } else {
      const std::int64_t ls = l <= half_clock ? l : l - clock_dim;
      lt = static_cast<double>(ls) / static_cast<double>(half_clock);
    }
    if (std::abs(lt) < 0.5 * lmin) continue;
    f[static_cast<std::size_t>(l)] = std::clamp(C / lt, -1.0, 1.0);
  }
  kernels::apply_eigen_rotation(psi, sys + c, sys, f, exec);

  apply_qft(psi, sys, c, false, exec);
  controlled_evolutions(-1.0);
  for (int k = 0; k < c; ++k) kernels::apply_hadamard(psi, sys + k, exec);

  const std::int64_t base = std::int64_t{1} << (sys + c);
  Vec out(dim);
  for (int j = 0; j < dim; ++j) out[j] = psi[base + j].real();
  HhlResult res;
  res.stats.success_probability = out.squaredNorm();
  if (!(res.stats.success_probability > 0.0)) throw ZeroSolutionError("post-selection probability is zero");
  res.state = out / out.norm();
  res.stats.system_qubits = sys;
  res.stats.clock_qubits = c;
  res.stats.total_qubits = total;
  return res;
}

TomographyResult sample_tomography(const Vec& state, double eps_qta, std::uint64_t seed, bool exact_amplitudes,
                                   double shot_constant, std::int64_t shots) {
  TomographyResult res;
  if (exact_amplitudes) {
    res.magnitudes = state.cwiseAbs() / state.norm();
    return res;
  }
  const int dim = static_cast<int>(state.size());
  res.shots = shots > 0 ? shots : shots_for(eps_qta, dim, shot_constant);
  const double norm2 = state.squaredNorm();
  std::vector<double> probs(dim);
  for (int i = 0; i < dim; ++i) probs[i] = state[i] * state[i] / norm2;
  std::mt19937_64 rng(seed);
  const auto counts = multinomial(probs, res.shots, rng);
  res.magnitudes.resize(dim);
  for (int i = 0; i < dim; ++i)
    res.magnitudes[i] = std::sqrt(static_cast<double>(counts[i]) / static_cast<double>(res.shots));
  return res;
}

Vec estimate_signs(const Vec& state, const Vec& magnitudes, std::int64_t shots, std::uint64_t seed,
                   bool exact_amplitudes) {
  const int dim = static_cast<int>(state.size());
  const Vec z = state / state.norm();
  Vec out = magnitudes;
  if (exact_amplitudes) {
    for (int i = 0; i < dim; ++i)
      if (z[i] < 0.0) out[i] = -out[i];
    return out;
  }
  std::vector<double> probs(2 * dim);
  for (int i = 0; i < dim; ++i) {
    probs[i] = 0.25 * (z[i] + magnitudes[i]) * (z[i] + magnitudes[i]);
    probs[dim + i] = 0.25 * (z[i] - magnitudes[i]) * (z[i] - magnitudes[i]);
  }
  std::mt19937_64 rng(seed);
  const auto counts = multinomial(probs, shots, rng);
  for (int i = 0; i < dim; ++i) {
    const double threshold = 0.4 * magnitudes[i] * magnitudes[i] * static_cast<double>(shots);
    if (!(static_cast<double>(counts[i]) > threshold)) out[i] = -out[i];
  }
  return out;
}

Vec postprocess(const Vec& candidate, const Mat& M, const Vec& sigma) {
  if (candidate.size() != M.cols() || sigma.size() != M.rows()) throw DimensionError("postprocess dimension mismatch");
  const Vec Mz = M * candidate;
  if (candidate.isZero(0.0) || Mz.norm() == 0.0) throw ZeroSolutionError("candidate solution is zero");
  const Vec z = candidate * (sigma.norm() / Mz.norm());
  const double plus = (sigma - M * z).norm();
  const double minus = (sigma + M * z).norm();
  return minus < plus ? Vec(-z) : z;
}

Vec scale_back(const QlspInstance& qlsp, const Vec& w) {
  if (w.size() != qlsp.p_padded) throw DimensionError("QLSP solution has the wrong length");
  const Vec full = qlsp.norm_sigma_bar * w;
  return qlsp.dilated ? Vec(full.segment(qlsp.p, qlsp.p)) : Vec(full.head(qlsp.p));
}

SolveOutcome solve_lsp_via_qlsa(const SolveRequest& request, std::uint64_t seed, const QlsaOptions& options) {
  if (request.M.rows() != request.M.cols()) throw DimensionError("coefficient matrix must be square");
  if (request.rhs.size() != request.M.rows()) throw DimensionError("right-hand side has the wrong length");
  if (!(request.eps > 0.0)) throw ConfigError("residual target must be positive");
  SolveOutcome out;
  out.solver = "hhl";
  const double norm_sigma = request.rhs.norm();
  if (norm_sigma == 0.0 || request.eps >= norm_sigma) {
    out.z = Vec::Zero(request.M.cols());
    out.residual = norm_sigma;
    out.iterations = 0;
    return out;
  }

  const QlspInstance qlsp = to_qlsp(request.M, request.rhs, request.eps);
  HhlOptions hopt;
  hopt.clock_qubits = options.clock_qubits;
  hopt.exec = options.exec;
  const HhlResult hhl = hhl_statevector_solve(qlsp, hopt);
  out.system_qubits = hhl.stats.system_qubits;
  out.clock_qubits = hhl.stats.clock_qubits;
  out.success_probability = hhl.stats.success_probability;

  std::int64_t shots = options.shots > 0 ? options.shots : shots_for(qlsp.eps_qta, qlsp.p_padded, options.shot_constant);
  const int attempts = options.exact_amplitudes ? 1 : options.retries + 1;
  Vec best;
  double best_res = std::numeric_limits<double>::infinity();
  for (int a = 0; a < attempts; ++a) {
    const TomographyResult tomo =
        sample_tomography(hhl.state, qlsp.eps_qta, mix_seed(seed, 2 * a), options.exact_amplitudes, options.shot_constant, shots);
    const Vec signed_est = estimate_signs(hhl.state, tomo.magnitudes, shots, mix_seed(seed, 2 * a + 1), options.exact_amplitudes);
    out.attempts = a + 1;
    out.shots += options.exact_amplitudes ? 0 : 2 * shots;
    Vec z;
    try {
      z = scale_back(qlsp, postprocess(signed_est, qlsp.M_bar, qlsp.sigma_state));
    } catch (const ZeroSolutionError&) {
      shots *= 2;
      continue;
    }
    const double res = (request.M * z - request.rhs).norm();
    if (res < best_res) {
      best_res = res;
      best = z;
    }
    if (res <= request.eps) {
      out.z = z;
      out.residual = res;
      out.iterations = a + 1;
      return out;
    }
    shots *= 2;
  }
  if (best.size() == 0) best = Vec::Zero(request.M.cols());
  throw ResidualNotMetError("quantum solve missed the residual target after " + std::to_string(attempts) + " attempts",
                            best, best_res);
}

SolveOutcome HhlSolver::solve(const SolveRequest& request) {
  return solve_lsp_via_qlsa(request, mix_seed(seed_, calls_++), options_);
}

}  // namespace qipm::qlsa
