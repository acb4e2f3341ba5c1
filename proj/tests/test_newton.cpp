#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qipm/errors.hpp"
#include "qipm/ii_qipm.hpp"
#include "qipm/instance_io.hpp"
#include "qipm/newton.hpp"
#include "qipm/solvers.hpp"

using namespace qipm;

namespace {

PreprocessedLp two_var() {
  Mat A(1, 2);
  A << 1, 1;
  return preprocess(LpProblem(A, Vec::Constant(1, 2.0), (Vec(2) << 1, 2).finished()));
}

Iterate unit_iterate() { return Iterate{Vec::Ones(2), Vec::Zero(1), Vec::Ones(2)}; }

// Newton equation defects, each relative to the size of its terms.
struct Defects {
  double eq1, eq2, eq3;
};

Defects defects(const PreprocessedLp& pre, const Iterate& it, const NewtonDirection& d, double beta1) {
  const LpProblem& P = pre.problem;
  const Residuals r = residuals(P, it);
  const int n = P.n();
  Defects out;
  const double na = condition_report(P.A).norm2;
  out.eq1 = (P.A * d.dx - r.rp).norm() / (na * d.dx.norm() + r.rp.norm() + 1e-300);
  const Vec aty = P.A.transpose() * d.dy;
  out.eq2 = (aty + d.ds - r.rd).norm() / (na * d.dy.norm() + d.ds.norm() + r.rd.norm() + 1e-300);
  const Vec lhs = it.x.cwiseProduct(d.ds) + it.s.cwiseProduct(d.dx);
  const Vec rhs = Vec::Constant(n, beta1 * r.mu) - it.x.cwiseProduct(it.s) - it.s.cwiseProduct(d.v);
  out.eq3 = (lhs - rhs).norm() / (lhs.norm() + rhs.norm() + 1e-300);
  return out;
}

}  // namespace

TEST_SUITE("newton") {
  TEST_CASE("mnes of the worked example") {
    const PreprocessedLp pre = two_var();
    const MnesSystem sys = build_mnes(pre, unit_iterate(), 0.5);
    CHECK((sys.d - Vec::Ones(2)).norm() == 0.0);
    CHECK(sys.d_basis[0] == 1.0);
    CHECK(sys.E(0, 0) == 1.0);
    CHECK(sys.E(0, 1) == 1.0);
    CHECK(sys.M(0, 0) == doctest::Approx(2.0));
    CHECK(sys.sigma[0] == doctest::Approx(2.0));
    CHECK(sys.eps_target == doctest::Approx(0.4 / std::sqrt(2.0)));
  }

  TEST_CASE("unit scaling gives E = A_hat") {
    GenConfig g;
    g.seed = 4;
    const PreprocessedLp pre = preprocess(generate(g));
    Iterate it{Vec::Ones(pre.n()), Vec::Zero(pre.m()), Vec::Ones(pre.n())};
    const MnesSystem sys = build_mnes(pre, it, 0.5);
    CHECK((sys.E - pre.A_hat).norm() <= 1e-14);
    CHECK((sys.M - sys.M.transpose()).norm() <= 1e-12);
  }

  TEST_CASE("feasible iterate drops the dual residual term") {
    const PreprocessedLp pre = two_var();
    // x = (1.5, 0.5), y = 0.5, s = (0.5, 1.5) is primal and dual feasible.
    Iterate it{(Vec(2) << 1.5, 0.5).finished(), Vec::Constant(1, 0.5), (Vec(2) << 0.5, 1.5).finished()};
    const MnesSystem sys = build_mnes(pre, it, 0.5);
    const double mu = it.x.dot(it.s) / 2;
    const Vec expect = sys.d_basis.cwiseInverse().cwiseProduct(pre.b_hat - 0.5 * mu * pre.A_hat * it.s.cwiseInverse());
    CHECK((sys.sigma - expect).norm() <= 1e-14);
  }

  TEST_CASE("mnes rejects non-interior iterates") {
    Iterate it = unit_iterate();
    it.s[1] = 0.0;
    CHECK_THROWS_AS(build_mnes(two_var(), it, 0.5), InvalidIterateError);
  }

  TEST_CASE("direction recovery on the worked example") {
    const PreprocessedLp pre = two_var();
    const NewtonDirection d = recover_direction(pre, unit_iterate(), Vec::Ones(1), 0.5);
    CHECK(d.dy[0] == doctest::Approx(1.0));
    CHECK(d.v.norm() == 0.0);
    CHECK(d.ds[0] == doctest::Approx(-1.0));
    CHECK(d.ds[1] == doctest::Approx(0.0));
    CHECK(d.dx[0] == doctest::Approx(0.5));
    CHECK(d.dx[1] == doctest::Approx(-0.5));
    const Defects e = defects(pre, unit_iterate(), d, 0.5);
    CHECK(e.eq1 <= 1e-15);
    CHECK(e.eq2 <= 1e-15);
    CHECK(e.eq3 <= 1e-15);
  }

  TEST_CASE("residual lands in the complementarity equation") {
    GenConfig g;
    g.m = 5;
    g.n = 10;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      g.seed = seed;
      const PreprocessedLp pre = preprocess(generate(g));
      const Iterate it = initialize(pre.problem, IpmParams{}).first;
      const MnesSystem sys = build_mnes(pre, it, 0.5, 0.4);
      // Exact solve: the Newton system of the unperturbed method.
      const Vec z = solve_exact(SolveRequest{sys.M, sys.sigma, 1.0}).z;
      NewtonDirection d = recover_direction(pre, it, sys, z, 0.5);
      CHECK(d.v.cwiseAbs().maxCoeff() <= 1e-10 * it.x.norm());
      // Perturbed to the full residual budget.
      const Vec zp = solve_noisy_oracle(SolveRequest{sys.M, sys.sigma, sys.eps_target}, NoiseMode::Uniform, seed, 1.0).z;
      d = recover_direction(pre, it, sys, zp, 0.5);
      CHECK(d.r_hat.norm() == doctest::Approx(sys.eps_target).epsilon(1e-6));
      const Defects e = defects(pre, it, d, 0.5);
      CHECK(e.eq1 <= 1e-10);
      CHECK(e.eq2 <= 1e-10);
      CHECK(e.eq3 <= 1e-10);
      CHECK(it.s.cwiseProduct(d.v).cwiseAbs().maxCoeff() <= 0.4 * sys.mu);
      for (int i = 0; i < pre.n(); ++i) {
        const bool basic = std::find(pre.basis.begin(), pre.basis.end(), i) != pre.basis.end();
        if (!basic) CHECK(d.v[i] == 0.0);
      }
    }
  }

  TEST_CASE("perturbation at the budget keeps S v below eta mu") {
    const PreprocessedLp pre = two_var();
    const Iterate it = unit_iterate();
    const MnesSystem sys = build_mnes(pre, it, 0.5, 0.4);
    const Vec z = Vec::Constant(1, 1.0 + sys.eps_target / 2.0);
    const NewtonDirection d = recover_direction(pre, it, sys, z, 0.5);
    CHECK(d.r_hat.norm() == doctest::Approx(sys.eps_target));
    CHECK(it.s.cwiseProduct(d.v).cwiseAbs().maxCoeff() <= 0.4 * sys.mu);
  }

  TEST_CASE("step functions") {
    const PreprocessedLp pre = two_var();
    const Iterate it = unit_iterate();
    const NewtonDirection d = recover_direction(pre, it, Vec::Ones(1), 0.5);
    StepFunctions f = eval_step_functions(pre.problem, it, d, 0.0, 0.5, 0.9995);
    CHECK(f.g == 0.0);
    CHECK(f.h == 0.0);
    CHECK(f.G_min == doctest::Approx(0.5));
    const double root = (-1.0 + std::sqrt(13.0)) / 3.0;
    f = eval_step_functions(pre.problem, it, d, root, 0.5, 0.9995);
    CHECK(std::abs(f.G_min) <= 1e-12);
    f = eval_step_functions(pre.problem, it, d, root + 0.01, 0.5, 0.9995);
    CHECK(f.G_min < 0.0);

    GenConfig g;
    g.seed = 2;
    const PreprocessedLp big = preprocess(generate(g));
    const Iterate s0 = initialize(big.problem, IpmParams{}).first;
    const MnesSystem sys = build_mnes(big, s0, 0.5);
    const NewtonDirection e = recover_direction(big, s0, sys, solve_exact(SolveRequest{sys.M, sys.sigma, 1.0}).z, 0.5);
    const double xs = s0.x.dot(s0.s);
    for (double a : {0.1, 0.37, 0.8}) {
      const double expect = a * 0.5 * xs + a * a * e.dx.dot(e.ds);
      CHECK(eval_step_functions(big.problem, s0, e, a, 0.5, 0.9995).g == doctest::Approx(expect).epsilon(1e-10));
    }
  }

  TEST_CASE("nu and alpha tilde") {
    NewtonDirection d;
    d.dx = (Vec(2) << 0.5, -0.5).finished();
    d.ds = (Vec(2) << -1.0, 0.0).finished();
    CHECK(compute_nu(d, 0.5, 2) == doctest::Approx(0.5));
    NewtonDirection z;
    z.dx = Vec::Zero(2);
    z.ds = (Vec(2) << 3.0, 1.0).finished();
    CHECK(compute_nu(z, 0.5, 2) == 0.0);
    NewtonDirection o;
    o.dx = (Vec(2) << 1.0, 0.0).finished();
    o.ds = (Vec(2) << 0.0, 1.0).finished();
    CHECK(compute_nu(o, 0.5, 2) == 0.0);

    IpmParams p;
    CHECK(compute_alpha_tilde(unit_iterate(), 0.5, p) == doctest::Approx(0.1));
    CHECK(compute_alpha_tilde(unit_iterate(), 0.0, p) == 1.0);
  }

  TEST_CASE("step length on the worked example") {
    const PreprocessedLp pre = two_var();
    const Iterate it = unit_iterate();
    const NewtonDirection d = recover_direction(pre, it, Vec::Ones(1), 0.5);
    const StepReport rep = max_step_length(pre.problem, it, d, IpmParams{}, 1.0);
    CHECK(rep.alpha_hat >= 0.867);
    CHECK(rep.alpha_hat <= 0.869);
    CHECK(rep.alpha_tilde == doctest::Approx(0.1));
    CHECK(rep.nu == doctest::Approx(0.5));
    CHECK(rep.delta1 == doctest::Approx(0.025));
    CHECK(rep.delta2 == doctest::Approx(0.1));
    CHECK(rep.delta3 == doctest::Approx(0.8995));
    CHECK(rep.theta == doctest::Approx(1.0 - rep.alpha_hat));
  }

  TEST_CASE("adversarial residual still admits alpha tilde") {
    IpmParams p;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      GenConfig g;
      g.seed = 100 + seed;
      g.m = seed % 2 ? 10 : 5;
      g.n = 2 * g.m;
      const PreprocessedLp pre = preprocess(generate(g));
      auto [it, gamma2] = initialize(pre.problem, p);
      for (int k = 0; k < 6; ++k) {
        const MnesSystem sys = build_mnes(pre, it, p.beta1, p.eta);
        const Vec z = solve_noisy_oracle(SolveRequest{sys.M, sys.sigma, sys.eps_target}, NoiseMode::Adversarial, seed, 1.0).z;
        const NewtonDirection d = recover_direction(pre, it, sys, z, p.beta1);
        const StepReport rep = max_step_length(pre.problem, it, d, p, gamma2);
        CHECK(rep.alpha_hat >= rep.alpha_tilde);
        it = take_step(it, d, rep.alpha_hat);
      }
    }
  }

  TEST_CASE("step failure when nothing is admissible") {
    const PreprocessedLp pre = two_var();
    const Iterate it = unit_iterate();
    NewtonDirection d;
    d.dx = (Vec(2) << -1e12, 0.0).finished();
    d.ds = (Vec(2) << 0.0, 0.0).finished();
    d.dy = Vec::Zero(1);
    CHECK_THROWS_AS(max_step_length(pre.problem, it, d, IpmParams{}, 1.0), StepFailureError);
  }
}
