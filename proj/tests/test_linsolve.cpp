#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <vector>

#include "ocp/assembly.hpp"
#include "ocp/errors.hpp"
#include "ocp/fespace.hpp"
#include "ocp/linsolve.hpp"
#include "ocp/mesh.hpp"

using namespace ocp;

namespace {

Eigen::SparseMatrix<double> sparse_from(const Eigen::MatrixXd& a) {
  Eigen::SparseMatrix<double> s(a.rows(), a.cols());
  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0) trips.emplace_back(i, j, a(i, j));
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

BlockSaddleSystem taylor_hood_system() {
  static const TriMesh mesh = build_unit_square(2);
  const SpacePair spaces = make_spaces(mesh, Family::TaylorHood);
  return assemble_system(
      mesh, spaces,
      [](int, const std::array<double, 3>&, const Eigen::Vector2d&) { return 0.1; },
      make_quadrature(6));
}

}  // namespace

TEST_CASE("scalar system") {
  Eigen::MatrixXd a(1, 1);
  a << 2.0;
  Factorization fact(sparse_from(a));
  Eigen::VectorXd b(1);
  b << 4.0;
  const Eigen::VectorXd x = fact.solve(b);
  CHECK(x[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(fact.size() == 1);
}

TEST_CASE("symmetric indefinite 3x3 against the hand solution") {
  // 2 x0 + x1 = 1, x0 + x2 = 2, x1 + 2 x2 = 3  =>  x = (1/2, 0, 3/2).
  Eigen::MatrixXd a(3, 3);
  a << 2, 1, 0, 1, 0, 1, 0, 1, 2;
  Eigen::VectorXd b(3);
  b << 1, 2, 3;
  const Eigen::VectorXd x = Factorization(sparse_from(a)).solve(b);
  CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(x[1]) <= 1e-14);
  CHECK(x[2] == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("forward-multiply recovery on an assembled saddle system") {
  const BlockSaddleSystem sys = taylor_hood_system();
  const Factorization fact = factorize(sys);

  Eigen::VectorXd xStar(sys.size());
  for (int i = 0; i < xStar.size(); ++i) xStar[i] = std::sin(0.7 * i + 0.3) + 0.1 * i / xStar.size();
  const Eigen::VectorXd b = sys.matrix * xStar;
  const Eigen::VectorXd x = solve_linear(fact, b);

  CHECK((x - xStar).norm() / xStar.norm() <= 1e-10);
  CHECK(fact.lastResidual() <= 1e-9);
}

TEST_CASE("zero right-hand side gives the zero solution") {
  const Factorization fact = factorize(taylor_hood_system());
  const Eigen::VectorXd x = fact.solve(Eigen::VectorXd::Zero(fact.size()));
  CHECK(x.norm() == 0.0);
}

TEST_CASE("repeated solves are deterministic across factorizations") {
  const BlockSaddleSystem sys = taylor_hood_system();
  Eigen::VectorXd b1 = Eigen::VectorXd::Zero(sys.size());
  Eigen::VectorXd b2 = b1;
  for (int i = 0; i < sys.size(); ++i) {
    b1[i] = std::cos(0.3 * i);
    b2[i] = 1.0 / (1.0 + i);
  }

  const Factorization shared = factorize(sys);
  const Eigen::VectorXd x1 = shared.solve(b1);
  const Eigen::VectorXd x2 = shared.solve(b2);

  const Eigen::VectorXd y1 = factorize(sys).solve(b1);
  const Eigen::VectorXd y2 = factorize(sys).solve(b2);
  CHECK((x1 - y1).cwiseAbs().maxCoeff() <= 1e-12 * x1.norm());
  CHECK((x2 - y2).cwiseAbs().maxCoeff() <= 1e-12 * x2.norm());

  // Same binary, same inputs: the shared-factorization path is bitwise stable.
  CHECK((x1 - shared.solve(b1)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("singular matrices raise the dedicated error with a pivot index") {
  Eigen::MatrixXd rankOne(2, 2);
  rankOne << 1, 1, 1, 1;
  CHECK_THROWS_AS(Factorization(sparse_from(rankOne)), SingularSystemError);
  try {
    Factorization fact(sparse_from(rankOne));
  } catch (const SingularSystemError& e) {
    CHECK(e.pivotIndex() >= 0);
    CHECK(e.pivotIndex() < 2);
    CHECK(std::string(e.what()).find("SINGULAR") != std::string::npos);
  }

  // A structurally empty column is reported the same way.
  Eigen::SparseMatrix<double> emptyColumn(2, 2);
  std::vector<Eigen::Triplet<double>> trips{{0, 0, 1.0}, {1, 0, 3.0}};
  emptyColumn.setFromTriplets(trips.begin(), trips.end());
  CHECK_THROWS_AS(Factorization{emptyColumn}, SingularSystemError);
}

TEST_CASE("mismatched right-hand side size is rejected") {
  const Factorization fact = factorize(taylor_hood_system());
  CHECK_THROWS_AS(fact.solve(Eigen::VectorXd::Zero(fact.size() + 1)), std::invalid_argument);
}
