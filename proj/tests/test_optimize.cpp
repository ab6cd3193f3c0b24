#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ocp/errors.hpp"
#include "ocp/fespace.hpp"
#include "ocp/mesh.hpp"
#include "ocp/optimize.hpp"

using namespace ocp;

namespace {

ControlEval constant_eval(double value) {
  return [value](int, const std::array<double, 3>&, const Eigen::Vector2d&) { return value; };
}

ControlEval p0_eval(const Eigen::VectorXd& cells) {
  return [cells](int k, const std::array<double, 3>&, const Eigen::Vector2d&) {
    return cells[k];
  };
}

ControlProblem zero_target_problem() {
  ControlProblem p;
  p.f = [](const Eigen::Vector2d&) { return Eigen::Vector2d::Zero().eval(); };
  p.yOmega = [](const Eigen::Vector2d&) { return Eigen::Vector2d::Zero().eval(); };
  p.alpha = 1.0;
  p.lower = 0.1;
  p.upper = 0.2;
  return p;
}

ControlProblem tracking_problem() {
  ControlProblem p;
  p.f = [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(32.0 * x.y() * (1.0 - x.y()), 32.0 * x.x() * (1.0 - x.x()));
  };
  p.yOmega = [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(std::sin(M_PI * x.x()) * std::sin(M_PI * x.y()),
                           x.x() * (1.0 - x.x()) * x.y() * (1.0 - x.y()));
  };
  p.alpha = 1.0;
  p.lower = 0.1;
  p.upper = 0.2;
  return p;
}

}  // namespace

TEST_CASE("cost closed forms with a zero load") {
  const TriMesh mesh = build_unit_square(2);
  const SpacePair spaces = make_spaces(mesh, Family::MiniElement);
  const QuadratureRule mq = make_quadrature(6), dq = make_quadrature(8);

  ControlProblem p = zero_target_problem();
  p.yOmega = [](const Eigen::Vector2d&) { return Eigen::Vector2d(1.0, 0.0); };
  // f = 0 forces y = 0, so J = 1/2 |Omega| + alpha/2 u^2 |Omega|.
  CHECK(cost(mesh, spaces, p, constant_eval(0.1), mq, dq) ==
        doctest::Approx(0.505).epsilon(1e-13));

  const ControlProblem q = zero_target_problem();
  CHECK(cost(mesh, spaces, q, constant_eval(0.1), mq, dq) ==
        doctest::Approx(0.005).epsilon(1e-13));
}

TEST_CASE("zero target drives the control to the lower bound") {
  const TriMesh mesh = build_unit_square(2);
  const ControlProblem p = zero_target_problem();
  for (Family family : {Family::MiniElement, Family::TaylorHood}) {
    const SpacePair spaces = make_spaces(mesh, family);

    const OptimalSolution fully = solve_fully_discrete(mesh, spaces, p);
    CHECK((fully.control.coeffs.array() - p.lower).abs().maxCoeff() <= 1e-14);
    CHECK(fully.cost == doctest::Approx(0.5 * p.lower * p.lower).epsilon(1e-12));
    CHECK(fully.iterations <= 3);
    CHECK(fully.residual <= 1e-8);
    CHECK(fully.state.velocity.coeffs.norm() == 0.0);

    const OptimalSolution semi = solve_semidiscrete(mesh, spaces, p);
    CHECK((semi.control.coeffs.array() - p.lower).abs().maxCoeff() <= 1e-13);
    CHECK(semi.cost == doctest::Approx(0.5 * p.lower * p.lower).epsilon(1e-12));
    CHECK(semi.iterations <= 3);
  }
}

TEST_CASE("reduced gradient matches central differences") {
  const TriMesh mesh = build_unit_square(2);
  const SpacePair spaces = make_spaces(mesh, Family::MiniElement);
  const QuadratureRule mq = make_quadrature(6), dq = make_quadrature(8);

  ControlProblem p = tracking_problem();
  p.alpha = 0.5;
  p.lower = 0.01;  // wide box: the finite-difference path stays inside
  p.upper = 50.0;

  std::mt19937 rng(23);
  std::uniform_real_distribution<double> uDist(0.5, 1.5), vDist(-1.0, 1.0);
  Eigen::VectorXd u(mesh.nCells()), v(mesh.nCells());
  for (int k = 0; k < mesh.nCells(); ++k) {
    u[k] = uDist(rng);
    v[k] = vDist(rng);
  }

  const StokesOperator op(mesh, spaces, p0_eval(u), mq);
  const StokesSolution y = op.solve_state(p.f, dq);
  const StokesSolution z = op.solve_adjoint(y.velocity, p.yOmega, dq);

  // j'(u) v = sum_K v_K (alpha u_K |K| - int_K y.z).
  const Eigen::VectorXd means = cell_mean_velocity_dot(y.velocity, z.velocity, dq);
  double directional = 0.0;
  for (int k = 0; k < mesh.nCells(); ++k)
    directional += v[k] * mesh.area(k) * (p.alpha * u[k] - means[k]);

  const double t = 1e-4;
  const double jPlus = cost(mesh, spaces, p, p0_eval(u + t * v), mq, dq);
  const double jMinus = cost(mesh, spaces, p, p0_eval(u - t * v), mq, dq);
  const double fd = (jPlus - jMinus) / (2.0 * t);
  CHECK(directional == doctest::Approx(fd).epsilon(1e-5));
}

TEST_CASE("curvature matches second differences") {
  const TriMesh mesh = build_unit_square(2);
  const SpacePair spaces = make_spaces(mesh, Family::MiniElement);
  const QuadratureRule mq = make_quadrature(6), dq = make_quadrature(8);

  ControlProblem p = tracking_problem();
  p.lower = 0.01;
  p.upper = 50.0;

  std::mt19937 rng(29);
  std::uniform_real_distribution<double> uDist(0.6, 1.4), vDist(-1.0, 1.0);
  Eigen::VectorXd u(mesh.nCells()), v(mesh.nCells());
  for (int k = 0; k < mesh.nCells(); ++k) {
    u[k] = uDist(rng);
    v[k] = vDist(rng);
  }

  const StokesOperator op(mesh, spaces, p0_eval(u), mq);
  const StokesSolution y = op.solve_state(p.f, dq);
  const StokesSolution z = op.solve_adjoint(y.velocity, p.yOmega, dq);
  const double form = hessian_quadratic_form(op, y.velocity, z.velocity, p0_eval(v), p.alpha, dq);

  const double t = 1e-3;
  const double jPlus = cost(mesh, spaces, p, p0_eval(u + t * v), mq, dq);
  const double jMid = cost(mesh, spaces, p, p0_eval(u), mq, dq);
  const double jMinus = cost(mesh, spaces, p, p0_eval(u - t * v), mq, dq);
  const double fd = (jPlus - 2.0 * jMid + jMinus) / (t * t);
  CHECK(form == doctest::Approx(fd).epsilon(1e-3));
  CHECK(form > 0.0);
}

TEST_CASE("fully discrete solver: monotone cost and converged projection") {
  const TriMesh mesh = build_unit_square(3);
  const ControlProblem p = tracking_problem();
  for (Family family : {Family::MiniElement, Family::TaylorHood}) {
    const SpacePair spaces = make_spaces(mesh, family);
    const OptimalSolution sol = solve_fully_discrete(mesh, spaces, p);

    // Decrease up to the solver's relative noise floor on the cost.
    for (std::size_t i = 0; i + 1 < sol.costHistory.size(); ++i)
      CHECK(sol.costHistory[i + 1] <=
            sol.costHistory[i] + 1e-12 * (1.0 + std::abs(sol.costHistory[i])));
    CHECK(sol.residual <= 1e-8);
    CHECK(sol.iterations >= 2);
    CHECK((sol.control.coeffs.array() >= p.lower - 1e-15).all());
    CHECK((sol.control.coeffs.array() <= p.upper + 1e-15).all());

    const QuadratureRule dq = make_quadrature(8);
    CHECK(vi_residual_P0(mesh, sol.control.coeffs, sol.state.velocity, sol.adjoint.velocity,
                         p.alpha, p.lower, p.upper, dq) <= sol.residual + 1e-12);

    const OptimalityReport report = check_optimality(sol, p, dq);
    CHECK(report.residual <= 1e-8);
    CHECK(report.lowerActiveFraction >= 0.0);
    CHECK(report.upperActiveFraction <= 1.0);
  }
}

TEST_CASE("semidiscrete solver: exact projection identity at the returned iterate") {
  const TriMesh mesh = build_unit_square(3);
  const ControlProblem p = tracking_problem();
  const SpacePair spaces = make_spaces(mesh, Family::TaylorHood);
  const OptimalSolution sol = solve_semidiscrete(mesh, spaces, p);
  const QuadratureRule dq = make_quadrature(8);

  CHECK(sol.residual <= 1e-8);
  const ControlEval u = control_eval(sol, p);
  CHECK(vi_residual_pointwise(mesh, u, sol.state.velocity, sol.adjoint.velocity, p.alpha,
                              p.lower, p.upper, dq) == 0.0);

  // Cell means stay admissible, so the P0 shadow of the control assembles.
  CHECK((sol.control.coeffs.array() >= p.lower - 1e-13).all());
  CHECK((sol.control.coeffs.array() <= p.upper + 1e-13).all());

  // Re-solving at the returned control reproduces the returned state within
  // a factor of the fixed-point tolerance.
  const StokesSolution resolved =
      solve_state(mesh, spaces, u, p.f, make_quadrature(6), make_quadrature(8));
  const double scale = std::max(1.0, sol.state.velocity.coeffs.norm());
  CHECK((resolved.velocity.coeffs - sol.state.velocity.coeffs).norm() <= 1e-6 * scale);
}

TEST_CASE("solvers are deterministic") {
  const TriMesh mesh = build_unit_square(2);
  const SpacePair spaces = make_spaces(mesh, Family::MiniElement);
  const ControlProblem p = tracking_problem();

  const OptimalSolution a = solve_fully_discrete(mesh, spaces, p);
  const OptimalSolution b = solve_fully_discrete(mesh, spaces, p);
  CHECK((a.control.coeffs - b.control.coeffs).norm() == 0.0);
  CHECK((a.state.velocity.coeffs - b.state.velocity.coeffs).norm() == 0.0);
  CHECK(a.cost == b.cost);
  CHECK(a.iterations == b.iterations);

  const OptimalSolution c = solve_semidiscrete(mesh, spaces, p);
  const OptimalSolution d = solve_semidiscrete(mesh, spaces, p);
  CHECK((c.control.coeffs - d.control.coeffs).norm() == 0.0);
  CHECK(c.cost == d.cost);
}

TEST_CASE("tiny penalty produces active bounds") {
  const TriMesh mesh = build_unit_square(3);
  const SpacePair spaces = make_spaces(mesh, Family::MiniElement);
  ControlProblem p = tracking_problem();
  p.alpha = 1e-8;

  SolverOptions options;
  options.tol = 1e-6;
  const OptimalSolution sol = solve_fully_discrete(mesh, spaces, p, options);
  const OptimalityReport report = check_optimality(sol, p, make_quadrature(8));
  CHECK(report.lowerActiveFraction + report.upperActiveFraction >= 0.5);
}

TEST_CASE("iteration budget raises the dedicated error") {
  const TriMesh mesh = build_unit_square(2);
  const SpacePair spaces = make_spaces(mesh, Family::MiniElement);
  const ControlProblem p = tracking_problem();

  SolverOptions strict;
  strict.tol = 1e-15;
  strict.maxIterations = 1;
  CHECK_THROWS_AS(solve_fully_discrete(mesh, spaces, p, strict), IterationLimitError);
  CHECK_THROWS_AS(solve_semidiscrete(mesh, spaces, p, strict), IterationLimitError);
  try {
    solve_fully_discrete(mesh, spaces, p, strict);
  } catch (const IterationLimitError& e) {
    CHECK(e.iterations() == 1);
    CHECK(e.lastResidual() > 0.0);
  }
}

TEST_CASE("invalid bounds and initial controls are rejected") {
  const TriMesh mesh = build_unit_square(2);
  const SpacePair spaces = make_spaces(mesh, Family::MiniElement);

  ControlProblem bad = tracking_problem();
  bad.lower = 0.0;  // must be strictly positive
  CHECK_THROWS_AS(solve_fully_discrete(mesh, spaces, bad), std::invalid_argument);
  bad.lower = 0.3;
  bad.upper = 0.2;
  CHECK_THROWS_AS(solve_fully_discrete(mesh, spaces, bad), std::invalid_argument);

  SolverOptions options;
  options.initialControl = Eigen::VectorXd::Constant(mesh.nCells(), 5.0);
  CHECK_THROWS_AS(solve_fully_discrete(mesh, spaces, tracking_problem(), options),
                  std::invalid_argument);
}
