#include "swe_carleman/carleman.hpp"
#include "swe_carleman/euler_lse.hpp"
#include "swe_carleman/solver.hpp"

#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace swe;

namespace {

PhysParams params(int n, double dt = 0.1, int steps = 4) {
  PhysParams p;
  p.grid_points = n;
  p.dt = dt;
  p.timesteps = steps;
  return p;
}

// exp(C t) v by its Taylor series.
Eigen::VectorXd exp_apply(const SparseMatrix& C, const Eigen::VectorXd& v, double t) {
  Eigen::VectorXd term = v, sum = v;
  for (int k = 1; k < 200; ++k) {
    term = (C * term) * (t / k);
    sum += term;
    if (term.norm() <= 1e-18 * sum.norm()) break;
  }
  return sum;
}

Eigen::VectorXd step_ic(int n, double base, double d) {
  std::vector<double> h(n, base), u(n, 0.0);
  for (int a = 0; a < n / 2; ++a) h[a] += d;
  return embed_state(initial_field(h, u));
}

}  // namespace

TEST_CASE("Euler system shape and blocks") {
  const auto p = params(3);
  const auto C = build_carleman(p);
  const Eigen::VectorXd V0 = step_ic(3, 1.0, 0.01);
  const auto sys = assemble(C.total, V0, p.dt, 4);
  CHECK(sys.dim() == 4095);
  CHECK(sys.block_dim == 819);
  CHECK(sys.b.head(819) == V0);
  CHECK(sys.b.tail(4095 - 819).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXd E = sys.E;
  const Eigen::MatrixXd C_dense = C.total;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(819, 819);
  for (int j = 0; j <= 4; ++j) CHECK(E.block(819 * j, 819 * j, 819, 819) == I);
  for (int j = 1; j <= 4; ++j) {
    CHECK((E.block(819 * j, 819 * (j - 1), 819, 819) + I + p.dt * C_dense).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(E.block(0, 819 * j, 819 * j, 819).cwiseAbs().maxCoeff() == 0.0);  // lower triangular
  }
  CHECK(E.block(819 * 2, 0, 819, 819).cwiseAbs().maxCoeff() == 0.0);  // bidiagonal
  CHECK(sys.E.nonZeros() == 5 * 819 + 4 * (Eigen::MatrixXd(I + p.dt * C_dense).array() != 0.0).count());

  CHECK_THROWS_AS(assemble(C.total, Eigen::VectorXd::Zero(10), 0.1, 2), std::invalid_argument);
  CHECK_THROWS_AS(assemble(C.total, V0, 0.0, 2), std::invalid_argument);
}

TEST_CASE("zero dynamics keep the state constant") {
  const auto p = params(3);
  const auto C = build_carleman(p, {false, false});
  const Eigen::VectorXd V0 = step_ic(3, 0.7, 0.0);
  const auto sys = assemble(C.total, V0, p.dt, 3);
  for (auto m : {SolveMethod::block_forward, SolveMethod::sparse_direct}) {
    const auto rep = solve(sys, m);
    for (int j = 0; j <= 3; ++j) CHECK((rep.x.segment(819 * j, 819) - V0).cwiseAbs().maxCoeff() == 0.0);
    const auto obs = extract_observables(rep.x, 3, 3);
    for (int j = 0; j <= 3; ++j) CHECK((obs.h[j].array() - 0.7).abs().maxCoeff() <= 1e-15);
  }
  const auto states = step_explicitly(C.total, V0, p.dt, 3);
  for (const auto& s : states) CHECK(s == V0);
}

TEST_CASE("block forward, sparse LU and the explicit stepper agree") {
  const auto p = params(3);
  const auto C = build_carleman(p);
  const Eigen::VectorXd V0 = step_ic(3, 1.0, 0.05);
  const auto sys = assemble(C.total, V0, p.dt, 4);
  const auto fwd = solve(sys, SolveMethod::block_forward);
  const auto lu = solve(sys, SolveMethod::sparse_direct);
  const auto states = step_explicitly(C.total, V0, p.dt, 4);
  CHECK(fwd.residual <= 1e-10);
  CHECK(lu.residual <= 1e-10);
  for (int j = 0; j <= 4; ++j) {
    const Eigen::VectorXd ref = states[j];
    CHECK((fwd.x.segment(819 * j, 819) - ref).norm() <= 1e-12 * ref.norm());
    CHECK((lu.x.segment(819 * j, 819) - ref).norm() <= 1e-10 * ref.norm());
  }
  CHECK(states[1] == V0 + p.dt * (C.total * V0));
}

TEST_CASE("residual contract raises ResidualError") {
  const auto p = params(3);
  const auto C = build_carleman(p);
  const auto sys = assemble(C.total, step_ic(3, 1.0, 0.05), p.dt, 2);
  CHECK_THROWS_AS(solve(sys, SolveMethod::sparse_direct, 0.0), ResidualError);
}

TEST_CASE("single-step error is second order in dt") {
  const auto C = build_carleman(params(3));
  const Eigen::VectorXd V0 = step_ic(3, 1.0, 0.05);
  auto local = [&](double dt) {
    return (exp_apply(C.total, V0, dt) - step_explicitly(C.total, V0, dt, 1)[1]).norm();
  };
  const double ratio = local(0.02) / local(0.01);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("error over a fixed horizon is first order in dt") {
  const auto C = build_carleman(params(3));
  const Eigen::VectorXd V0 = step_ic(3, 1.0, 0.05);
  const double T = 0.4;
  const Eigen::VectorXd exact = exp_apply(C.total, V0, T);
  auto global = [&](int steps) {
    return (step_explicitly(C.total, V0, T / steps, steps).back() - exact).norm();
  };
  const double ratio = global(20) / global(40);
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("total depth is constant along the Carleman trajectory") {
  const int n = 4;
  const auto C = build_carleman(params(n));
  const auto states = step_explicitly(C.total, step_ic(n, 1.0, 0.01), 0.1, 8);
  const auto obs = observables_from_states(states, n);
  const double total0 = obs.h[0].sum();
  for (const auto& h : obs.h) CHECK(std::abs(h.sum() - total0) <= 1e-10);
}

TEST_CASE("observable extraction") {
  const std::vector<double> h{1.0, 0.5, 2.0}, u{0.1, -0.2, 0.0};
  const auto f = initial_field(h, u);
  Eigen::VectorXd x(2 * 819);
  x << embed_state(f), embed_state(f);
  const auto obs = extract_observables(x, 3, 1);
  CHECK(obs.steps() == 1);
  for (int a = 0; a < 3; ++a) {
    CHECK(obs.h[1](a) == doctest::Approx(h[a]));
    CHECK(obs.u[1](a) == doctest::Approx(u[a]));
  }
  CHECK_THROWS_AS(extract_observables(x, 3, 2), std::invalid_argument);
  std::ostringstream os;
  write_observables_csv(os, obs);
  CHECK(os.str().rfind("t_index,x_index,h,u\n", 0) == 0);
}

TEST_CASE("explicit stepper reports blow-up with the step index") {
  SparseMatrix C = sparse_identity(3) * 1e200;
  try {
    step_explicitly(C, Eigen::VectorXd::Ones(3) * 1e200, 1.0, 5);
    FAIL("expected InstabilityError");
  } catch (const InstabilityError& e) {
    CHECK(e.step() == 1);
  }
}

TEST_CASE("condition number examples") {
  const SparseMatrix I = sparse_identity(7);
  CHECK(condition_number(Eigen::MatrixXd(I)).kappa == doctest::Approx(1.0));
  CHECK(condition_number(I, KappaMethod::power_iter).kappa == doctest::Approx(1.0).epsilon(1e-6));

  Eigen::MatrixXd D = Eigen::Vector3d(2.0, 1.0, 0.5).asDiagonal();
  CHECK(condition_number(D).kappa == doctest::Approx(4.0).epsilon(1e-14));
  const SparseMatrix Ds = D.sparseView();
  const auto pw = condition_number(Ds, KappaMethod::power_iter);
  CHECK(pw.kappa == doctest::Approx(4.0).epsilon(1e-5));
  CHECK(pw.sigma_max == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(pw.sigma_min == doctest::Approx(0.5).epsilon(1e-6));

  Eigen::MatrixXd sing = Eigen::Vector2d(1.0, 0.0).asDiagonal();
  CHECK(std::isinf(condition_number(sing).kappa));
}

TEST_CASE("condition number is scale invariant") {
  for (int k = 0; k < 10; ++k) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(20, 20);
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < i; ++j) A(i, j) = swe::test::uniform(-0.3, 0.3);
    const double c = swe::test::uniform(-5.0, 5.0);
    const double k1 = condition_number(A).kappa;
    CHECK(condition_number(Eigen::MatrixXd(c * A)).kappa == doctest::Approx(k1).epsilon(1e-12));
    const SparseMatrix As = A.sparseView();
    const SparseMatrix cAs = (c * A).sparseView();
    CHECK(condition_number(cAs, KappaMethod::power_iter).kappa == doctest::Approx(k1).epsilon(1e-4));
    CHECK(condition_number(As, KappaMethod::power_iter).kappa == doctest::Approx(k1).epsilon(1e-4));
  }
}

TEST_CASE("dense and power condition numbers agree on a small Euler matrix") {
  const auto p = params(3);
  const auto C = build_carleman(p);
  const auto sys = assemble(C.total, Eigen::VectorXd::Zero(819), p.dt, 1);
  const auto dense = condition_number(Eigen::MatrixXd(sys.E));
  const auto power = condition_number(sys.E, KappaMethod::power_iter);
  CHECK(dense.kappa >= 1.0);
  CHECK(std::abs(dense.kappa - power.kappa) <= 1e-4 * dense.kappa);
  CHECK(dense.rows == 1638);
}

TEST_CASE("the identity block of a zero-step system has condition number 1") {
  const auto C = build_carleman(params(3));
  const auto sys = assemble(C.total, Eigen::VectorXd::Zero(819), 0.1, 0);
  CHECK(sys.dim() == 819);
  CHECK(condition_number(sys.E, KappaMethod::power_iter).kappa == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("method names round-trip") {
  for (auto m : {SolveMethod::block_forward, SolveMethod::sparse_direct})
    CHECK(solve_method_from_string(to_string(m)) == m);
  for (auto m : {KappaMethod::dense_svd, KappaMethod::power_iter})
    CHECK(kappa_method_from_string(to_string(m)) == m);
  CHECK_THROWS_AS(solve_method_from_string("cg"), std::invalid_argument);
}
