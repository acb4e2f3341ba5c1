#include <doctest.h>

#include "qipm/errors.hpp"
#include "qipm/instance_io.hpp"
#include "qipm/refine.hpp"

using namespace qipm;

namespace {

LpProblem two_var() {
  Mat A(1, 2);
  A << 1, 1;
  return LpProblem(A, Vec::Constant(1, 2.0), (Vec(2) << 1, 2).finished());
}

}  // namespace

TEST_SUITE("refine") {
  TEST_CASE("refining data") {
    const LpProblem P = two_var();
    auto [bb, cb] = refining_data(P, (Vec(2) << 2, 0).finished(), Vec::Constant(1, 1.0));
    CHECK(bb.norm() == 0.0);
    CHECK(cb[0] == 0.0);
    CHECK(cb[1] == 1.0);
    auto [b0, c0] = refining_data(P, Vec::Zero(2), Vec::Zero(1));
    CHECK(b0 == P.b);
    CHECK(c0 == P.c);
    CHECK_THROWS_AS(refining_data(P, Vec::Zero(3), Vec::Zero(1)), DimensionError);
  }

  TEST_CASE("residual measure") {
    CHECK(residual_measure(Vec::Constant(1, 0.01), (Vec(2) << -0.02, 0.5).finished(), (Vec(2) << 2, 0).finished()) ==
          doctest::Approx(0.04));
    CHECK(residual_measure(Vec::Zero(1), (Vec(2) << 0, 1).finished(), (Vec(2) << 2, 0).finished()) == 0.0);
  }

  TEST_CASE("scaling update") {
    auto [pi, nabla] = scaling_update(0.04, 2, 1);
    CHECK(pi == doctest::Approx(0.5));
    CHECK(nabla == 2.0);
    std::tie(pi, nabla) = scaling_update(1e-3, 2, 4);
    CHECK(pi == doctest::Approx(0.125));
    CHECK(nabla == 8.0);
    std::tie(pi, nabla) = scaling_update(3.0, 2, 1);
    CHECK(pi == 3.0);
    CHECK(nabla == 1.0);
    CHECK_THROWS_AS(scaling_update(0.0, 2, 1), ConfigError);
  }

  TEST_CASE("parameter validation") {
    IrParams p;
    p.rho = 1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = IrParams{};
    p.rho = 2.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = IrParams{};
    p.zeta = 0.1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK_NOTHROW(IrParams{}.validate());
  }

  TEST_CASE("round bound") {
    ExactSolver exact;
    IrParams p;
    const IrResult r = ir_solve(two_var(), p, exact);
    CHECK(r.round_bound == 4);
  }

  TEST_CASE("two-variable problem to high precision") {
    for (int s = 0; s < 2; ++s) {
      ExactSolver exact;
      NoisyOracleSolver noisy(3);
      LinearSolver& solver = s == 0 ? static_cast<LinearSolver&>(exact) : noisy;
      IrParams p;
      const IrResult r = ir_solve(two_var(), p, solver);
      CHECK(r.converged);
      CHECK(r.final_r <= 1e-8);
      CHECK(r.composite.x[0] == doctest::Approx(2.0).epsilon(1e-8));
      CHECK(r.rounds.size() == static_cast<std::size_t>(r.refinement_rounds + 1));
      for (const IrRound& rd : r.rounds) CHECK(rd.inner_status == IpmStatus::Optimal);
    }
  }

  TEST_CASE("generated instance, bounded shift") {
    GenConfig g;
    g.seed = 5;
    const LpProblem P = generate(g);
    ExactSolver exact;
    const IrResult r = ir_solve(P, IrParams{}, exact);
    REQUIRE(r.converged);
    CHECK(r.final_r <= 1e-8);
    CHECK((r.composite.x.array() >= 0.0).all());
    double prev = 0.0;
    for (std::size_t k = 1; k < r.rounds.size(); ++k) {
      CHECK(r.rounds[k].nabla >= 1.0);
      CHECK(r.rounds[k].nabla >= prev);
      prev = r.rounds[k].nabla;
      CHECK(r.rounds[k].composite_ok);
    }
  }

  TEST_CASE("zeta equal to zeta hat needs no rounds when the start is good enough") {
    IrParams p;
    p.zeta = p.zeta_hat = 0.5;
    ExactSolver exact;
    const IrResult r = ir_solve(two_var(), p, exact);
    CHECK(r.converged);
    CHECK(r.refinement_rounds <= 1);
  }

  TEST_CASE("round cap") {
    IrParams p;
    p.max_rounds = 1;
    ExactSolver exact;
    const IrResult r = ir_solve(generate(GenConfig{}), p, exact);
    CHECK_FALSE(r.converged);
    CHECK(r.refinement_rounds == 1);
    CHECK_FALSE(r.message.empty());
  }

  TEST_CASE("infeasible inner problem propagates") {
    Mat A(1, 2);
    A << 1, 1;
    const LpProblem P(A, Vec::Constant(1, -1.0), (Vec(2) << 1, 2).finished());
    ExactSolver exact;
    const IrResult r = ir_solve(P, IrParams{}, exact);
    CHECK_FALSE(r.converged);
    CHECK(r.status == IpmStatus::InfeasibleDetected);
  }
}
