#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qipm/errors.hpp"
#include "qipm/instance_io.hpp"
#include "qipm/lp_core.hpp"

using namespace qipm;

namespace {

LpProblem two_var() {
  Mat A(1, 2);
  A << 1, 1;
  return LpProblem(A, Vec::Constant(1, 2.0), (Vec(2) << 1, 2).finished());
}

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

}  // namespace

TEST_SUITE("lp_core") {
  TEST_CASE("duality measure") {
    Mat A = Mat::Identity(1, 4);
    LpProblem p(A, Vec::Ones(1), Vec::Ones(4));
    Iterate it{Vec::Constant(4, 10.0), Vec::Zero(1), Vec::Constant(4, 10.0)};
    CHECK(duality_measure(p, it) == doctest::Approx(100.0));
    const LpProblem q = two_var();
    CHECK(duality_measure(q, Iterate{v2(1, 2), Vec::Zero(1), v2(2, 1)}) == doctest::Approx(2.0));
    CHECK(duality_measure(q, Iterate{v2(2, 0), Vec::Zero(1), v2(0, 1)}) == 0.0);
    CHECK_THROWS_AS(duality_measure(q, Iterate{Vec::Ones(3), Vec::Zero(1), Vec::Ones(2)}), DimensionError);
  }

  TEST_CASE("residuals") {
    const LpProblem p = two_var();
    Residuals r = residuals(p, Iterate{v2(1, 1), Vec::Zero(1), v2(1, 1)});
    CHECK(r.rp.norm() == 0.0);
    CHECK(r.rd[0] == 0.0);
    CHECK(r.rd[1] == 1.0);

    const auto vx = oracle::vertex_enumeration(p.A, p.b, p.c);
    REQUIRE(vx);
    CHECK(vx->x[0] == doctest::Approx(2.0));
    CHECK(vx->x[1] == doctest::Approx(0.0));
    r = residuals(p, Iterate{vx->x, vx->y, p.c - p.A.transpose() * vx->y});
    CHECK(r.norm() == doctest::Approx(0.0));
    CHECK(vx->y[0] == doctest::Approx(1.0));

    r = residuals(p, Iterate{Vec::Zero(2), Vec::Zero(1), Vec::Zero(2)});
    CHECK(r.rp[0] == 2.0);
    CHECK(r.rd == p.c);
  }

  TEST_CASE("neighborhood") {
    const LpProblem p = two_var();
    IpmParams params;
    Iterate start{Vec::Constant(2, 10.0), Vec::Zero(1), Vec::Constant(2, 10.0)};
    const Residuals r0 = residuals(p, start);
    const double g2 = std::max(1.0, r0.norm() / r0.mu);
    CHECK(in_neighborhood(p, start, params.gamma1, g2 * (1 + 1e-12)));

    CHECK_FALSE(in_neighborhood(p, Iterate{v2(1, 1), Vec::Zero(1), v2(1, 0.1)}, 0.5, 1e6));

    // Central and feasible: x = (1.5, 0.5), y = 0.5, s = c - y = (0.5, 1.5); x_i s_i = 0.75.
    Iterate central{v2(1.5, 0.5), Vec::Constant(1, 0.5), v2(0.5, 1.5)};
    CHECK(in_neighborhood(p, central, 0.99, 1.0));
    CHECK_THROWS_AS(in_neighborhood(p, Iterate{v2(1, 0), Vec::Zero(1), v2(1, 1)}, 0.5, 1.0), InvalidIterateError);
  }

  TEST_CASE("zeta optimality") {
    const LpProblem p = two_var();
    CHECK(is_zeta_optimal(p, Iterate{v2(2, 0), Vec::Constant(1, 1.0), v2(0, 1)}, 1e-12));
    CHECK_FALSE(is_zeta_optimal(p, Iterate{Vec::Constant(2, 10), Vec::Zero(1), Vec::Constant(2, 10)}, 0.1));
    Mat A = Mat::Identity(2, 2);
    LpProblem q(A, Vec::Constant(2, 1e-3), Vec::Constant(2, 1e-3));
    CHECK(is_zeta_optimal(q, Iterate{Vec::Constant(2, 1e-3), Vec::Zero(2), Vec::Constant(2, 1e-3)}, 1e-2));
    CHECK_FALSE(is_zeta_optimal(q, Iterate{Vec::Constant(2, -1e-3), Vec::Zero(2), Vec::Constant(2, 1e-3)}, 1e-2));
  }

  TEST_CASE("binary length") {
    LpProblem one(Mat::Ones(1, 1), Vec::Ones(1), Vec::Ones(1));
    CHECK(binary_length(one) == 6);
    LpProblem zero(Mat::Zero(1, 1), Vec::Zero(1), Vec::Zero(1));
    CHECK(binary_length(zero) == 3);
    CHECK(binary_length(two_var()) == 12);
    LpProblem frac(Mat::Ones(1, 1), Vec::Constant(1, 0.5), Vec::Ones(1));
    CHECK_THROWS_AS(binary_length(frac), NonIntegerDataError);

    Mat A(2, 3);
    A << 1, 5, -3, 7, 0, 2;
    LpProblem p(A, (Vec(2) << 4, -9).finished(), (Vec(3) << 1, 2, 3).finished());
    Mat Ar = A;
    Ar.row(0).swap(Ar.row(1));
    LpProblem q(Ar, (Vec(2) << -9, 4).finished(), p.c);
    CHECK(binary_length(p) == binary_length(q));
  }

  TEST_CASE("preprocess") {
    Mat A(2, 4);
    A << 1, 0, 2, 3, 0, 1, 4, 5;
    LpProblem canon(A, (Vec(2) << 1, 2).finished(), Vec::Ones(4));
    PreprocessedLp pre = preprocess(canon);
    CHECK(pre.basis == std::vector<int>{0, 1});
    CHECK((pre.A_hat - A).norm() == 0.0);
    CHECK((pre.b_hat - canon.b).norm() == 0.0);
    PreprocessedLp again = preprocess(LpProblem(pre.A_hat, pre.b_hat, canon.c));
    CHECK((again.A_hat - pre.A_hat).norm() == 0.0);

    LpProblem scalar(Mat::Constant(1, 2, 2.0), Vec::Constant(1, 4.0), Vec::Ones(2));
    pre = preprocess(scalar);
    CHECK(pre.basis == std::vector<int>{0});
    CHECK(pre.A_hat(0, 1) == doctest::Approx(1.0));
    CHECK(pre.b_hat[0] == doctest::Approx(2.0));

    std::srand(3);
    const Mat R = Mat::Random(3, 6);
    pre = preprocess(LpProblem(R, Vec::Ones(3), Vec::Ones(6)));
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i) CHECK(std::abs(pre.A_hat(i, pre.basis[k]) - (i == k ? 1.0 : 0.0)) <= 1e-10);
    CHECK((pre.basis_inverse * R - pre.A_hat).norm() <= 1e-10);

    Mat D(3, 4);
    D << 2, 4, 6, 8, 1, 2, 3, 4, 0, 1, 0, 1;
    try {
      preprocess(LpProblem(D, Vec::Ones(3), Vec::Ones(4)));
      FAIL("expected rank deficiency");
    } catch (const RankDeficientError& e) {
      CHECK(e.dependent_rows() == std::vector<int>{1});
    }
  }

  TEST_CASE("condition report") {
    CHECK(condition_report(Mat::Identity(3, 3)).kappa == doctest::Approx(1.0));
    Mat D = Mat::Zero(2, 2);
    D.diagonal() << 2, 1;
    const ConditionReport rep = condition_report(D);
    CHECK(rep.kappa == doctest::Approx(2.0));
    CHECK(rep.norm2 == doctest::Approx(2.0));
    CHECK(rep.norm_frobenius == doctest::Approx(std::sqrt(5.0)));
    GenConfig g;
    g.seed = 11;
    const double k = condition_report(generate(g).A).kappa;
    CHECK(k >= 1.9);
    CHECK(k <= 2.1);
    Mat S = Mat::Zero(2, 2);
    S(0, 0) = 1.0;
    CHECK(condition_report(S).singular);
    CHECK(std::isinf(condition_report(S).kappa));
  }

  TEST_CASE("parameter validation") {
    IpmParams p;
    CHECK_NOTHROW(p.validate());
    p.eta = 0.6;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = IpmParams{};
    p.gamma2 = 0.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = IpmParams{};
    p.omega = 0.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
  }

  TEST_CASE("dimension checks") {
    CHECK_THROWS_AS(LpProblem(Mat::Ones(2, 3), Vec::Ones(3), Vec::Ones(3)), DimensionError);
    CHECK_THROWS_AS(LpProblem(Mat::Ones(3, 2), Vec::Ones(3), Vec::Ones(2)), DimensionError);
  }
}
