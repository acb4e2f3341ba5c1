#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qipm/errors.hpp"
#include "qipm/qlsa_sim.hpp"

using namespace qipm;
using namespace qipm::qlsa;

namespace {

// Q diag(ev) Q^T with a seeded orthogonal Q.
Mat with_spectrum(const Vec& ev, unsigned seed) {
  std::srand(seed);
  const Mat R = Mat::Random(ev.size(), ev.size());
  const Mat Q = Eigen::HouseholderQR<Mat>(R).householderQ();
  return Q * ev.asDiagonal() * Q.transpose();
}

}  // namespace

TEST_SUITE("qlsa_sim") {
  TEST_CASE("qlsp translation of a symmetric system") {
    Mat M(3, 3);
    M << 4, 1, 0, 1, 3, 0, 0, 0, 2;
    const Vec sigma = (Vec(3) << 1, 2, 2).finished();
    const QlspInstance q = to_qlsp(M, sigma, 0.3);
    CHECK_FALSE(q.dilated);
    CHECK(q.p == 3);
    CHECK(q.p_padded == 4);
    CHECK(q.norm_sigma == doctest::Approx(3.0));
    CHECK(q.eps_qlsp == doctest::Approx(0.1));
    CHECK(q.eps_qlsa == doctest::Approx(0.05));
    CHECK(q.M_bar(3, 3) == 1.0);
    CHECK(q.sigma_state.norm() == doctest::Approx(1.0));
    Eigen::SelfAdjointEigenSolver<Mat> eig(q.M_bar);
    CHECK(eig.eigenvalues().cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
    const Vec w = q.M_bar.inverse() * q.sigma_state;
    CHECK((scale_back(q, w) - M.inverse() * sigma).norm() <= 1e-12);
  }

  TEST_CASE("non-symmetric systems are dilated") {
    Mat M(2, 2);
    M << 1, 2, 0, 1;
    const Vec sigma = (Vec(2) << 1, -1).finished();
    const QlspInstance q = to_qlsp(M, sigma, 0.1);
    CHECK(q.dilated);
    CHECK(q.p_padded == 4);
    CHECK((q.M_bar - q.M_bar.transpose()).norm() <= 1e-15);
    const Vec w = q.M_bar.inverse() * q.sigma_state;
    CHECK((scale_back(q, w) - M.inverse() * sigma).norm() <= 1e-12);
  }

  TEST_CASE("zero right-hand side") {
    const QlspInstance q = to_qlsp(Mat::Identity(2, 2), Vec::Zero(2), 0.1);
    CHECK(q.zero_rhs);
    const SolveOutcome out = solve_lsp_via_qlsa(SolveRequest{Mat::Identity(2, 2), Vec::Zero(2), 0.1}, 1);
    CHECK(out.z.norm() == 0.0);
    CHECK_THROWS_AS(hhl_statevector_solve(q), ZeroSolutionError);
  }

  TEST_CASE("clock sizing table") {
    CHECK(clock_qubits_for_condition(2.0) == 6);
    CHECK(clock_qubits_for_condition(3.0) == 6);
    CHECK(clock_qubits_for_condition(16.0) == 8);
    CHECK(clock_qubits_for_condition(2048.0) == 15);
    CHECK(clock_qubits_for_condition(1.0) == 6);
    CHECK_THROWS_AS(clock_qubits_for_condition(4096.0), ConditionError);
  }

  TEST_CASE("hhl on a representable diagonal system") {
    Mat M(2, 2);
    M << 1, 0, 0, 0.5;
    const QlspInstance q = to_qlsp(M, Vec::Ones(2), 0.01);
    HhlOptions opt;
    opt.clock_qubits = 2;
    const HhlResult r = hhl_statevector_solve(q, opt);
    const Vec expect = (Vec(2) << 1, 2).finished() / std::sqrt(5.0);
    CHECK((r.state - expect).norm() <= 1e-12);
    CHECK(r.stats.system_qubits == 1);
    CHECK(r.stats.clock_qubits == 2);
    CHECK(r.stats.total_qubits == 4);
    CHECK(r.stats.success_probability > 0.0);
  }

  TEST_CASE("hhl serial and parallel agree") {
    const Mat M = with_spectrum((Vec(4) << 1, 0.5, 0.75, 0.25).finished(), 5);
    const QlspInstance q = to_qlsp(M, Vec::LinSpaced(4, 1, 4), 0.01);
    HhlOptions s{4, kernels::Exec::Serial};
    HhlOptions p{4, kernels::Exec::Parallel};
    CHECK((hhl_statevector_solve(q, s).state - hhl_statevector_solve(q, p).state).norm() <= 1e-12);
  }

  TEST_CASE("hhl on an indefinite system") {
    Mat M(2, 2);
    M << 0, 1, 1, 0;
    const QlspInstance q = to_qlsp(M, (Vec(2) << 1, 0).finished(), 0.01);
    HhlOptions opt;
    opt.clock_qubits = 8;
    const HhlResult r = hhl_statevector_solve(q, opt);
    const Vec w = M.inverse() * q.sigma_state;
    CHECK(std::abs(r.state.dot(w / w.norm())) >= 0.99);
  }

  TEST_CASE("eigenvalue below the clock resolution") {
    Mat M(2, 2);
    M << 1, 0, 0, 0.01;
    HhlOptions opt;
    opt.clock_qubits = 2;
    CHECK_THROWS_AS(hhl_statevector_solve(to_qlsp(M, Vec::Ones(2), 0.1), opt), ConditionError);
  }

  TEST_CASE("size limits") {
    QlspInstance q;
    q.M_bar = Mat::Zero(8192, 1);
    q.p = q.p_padded = 8192;
    CHECK_THROWS_AS(hhl_statevector_solve(q), SizeError);
    HhlOptions opt;
    opt.clock_qubits = 23;
    CHECK_THROWS_AS(hhl_statevector_solve(to_qlsp(Mat::Identity(2, 2), Vec::Ones(2), 0.1), opt), SizeError);
  }

  TEST_CASE("tomography") {
    const Vec state = (Vec(4) << 0.5, -0.5, 0.7, -0.1).finished().normalized();
    const TomographyResult exact = sample_tomography(state, 0.1, 1, true);
    CHECK((exact.magnitudes - state.cwiseAbs()).norm() <= 1e-15);
    const TomographyResult t = sample_tomography(state, 0.05, 3);
    CHECK(t.shots == static_cast<std::int64_t>(std::ceil(4.0 * 4 / 0.0025)));
    CHECK((t.magnitudes - state.cwiseAbs()).norm() <= 0.05);
    CHECK(t.magnitudes.norm() == doctest::Approx(1.0));
    const TomographyResult a = sample_tomography(state, 0.05, 3);
    CHECK((a.magnitudes - t.magnitudes).norm() == 0.0);
  }

  TEST_CASE("sign estimation") {
    const Vec state = (Vec(4) << 0.5, -0.5, 0.7, -0.1).finished().normalized();
    const Vec exact = estimate_signs(state, state.cwiseAbs(), 0, 1, true);
    CHECK((exact - state).norm() <= 1e-15);
    const Vec est = estimate_signs(state, state.cwiseAbs(), 20000, 2);
    for (int i = 0; i < 4; ++i) CHECK(est[i] * state[i] > 0.0);
  }

  TEST_CASE("postprocess") {
    const Mat M = Mat::Constant(1, 1, 1.0);
    const Vec z = postprocess(Vec::Constant(1, -1.0), M, Vec::Constant(1, 2.0));
    CHECK(z[0] == doctest::Approx(2.0));
    CHECK_THROWS_AS(postprocess(Vec::Zero(1), M, Vec::Constant(1, 2.0)), ZeroSolutionError);
  }

  TEST_CASE("exact amplitudes reproduce the direct solve") {
    const Mat M = with_spectrum((Vec(4) << 1, 0.5, 0.75, 0.25).finished(), 11);
    const Vec rhs = (Vec(4) << 1, -2, 0.5, 3).finished();
    QlsaOptions opt;
    opt.exact_amplitudes = true;
    opt.clock_qubits = 3;
    const SolveOutcome out = solve_lsp_via_qlsa(SolveRequest{M, rhs, 1e-6}, 1, opt);
    CHECK((out.z - oracle::direct_solve(M, rhs)).norm() <= 1e-8);
    CHECK(out.solver == "hhl");
  }

  TEST_CASE("sampled solve meets its residual target") {
    const Mat M = with_spectrum((Vec(2) << 1, 0.5).finished(), 2);
    const Vec rhs = (Vec(2) << 1, 1).finished();
    const double eps = 0.1 * rhs.norm();
    HhlSolver solver(4);
    const SolveOutcome out = solver.solve(SolveRequest{M, rhs, eps});
    CHECK((M * out.z - rhs).norm() <= eps);
    CHECK(out.shots > 0);
    CHECK(out.attempts >= 1);
  }
}
