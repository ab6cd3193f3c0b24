#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ocp/fespace.hpp"
#include "ocp/mesh.hpp"
#include "ocp/quadrature.hpp"

using namespace ocp;

TEST_CASE("dof counts and boundary sets") {
  const TriMesh m = build_unit_square(2);
  const SpacePair mini = make_spaces(m, Family::MiniElement);
  CHECK(mini.nVelDofs == m.nVertices() + m.nCells());
  CHECK(mini.nPressDofs == m.nVertices());
  CHECK(mini.velLocalSize == 4);
  // Bubbles are never constrained; all 8 boundary vertices are.
  int constrained = 0;
  for (char c : mini.boundaryVelDofs) constrained += c;
  CHECK(constrained == 8);
  CHECK(mini.nVelInterior == mini.nVelDofs - 8);

  const SpacePair th = make_spaces(m, Family::TaylorHood);
  CHECK(th.nVelDofs == m.nVertices() + m.nEdges());
  CHECK(th.velLocalSize == 6);
  int thConstrained = 0;
  for (char c : th.boundaryVelDofs) thConstrained += c;
  // 8 boundary vertices + 8 boundary edge midpoints.
  CHECK(thConstrained == 16);
}

TEST_CASE("Lagrange delta property and partition of unity") {
  const TriMesh m = build_unit_square(1);
  const CellGeometry geo = cell_geometry(m, 0);

  // P1 hats at the vertices.
  const std::array<std::array<double, 3>, 3> corners = {
      {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
  for (int i = 0; i < 3; ++i) {
    const BasisEval b = eval_velocity_basis(Family::MiniElement, geo, corners[i]);
    for (int j = 0; j < 3; ++j) CHECK(b.value[j] == doctest::Approx(i == j ? 1.0 : 0.0));
    CHECK(b.value[3] == doctest::Approx(0.0));  // bubble vanishes at vertices
  }

  // Bubble normalization at the barycenter.
  const BasisEval bc = eval_velocity_basis(Family::MiniElement, geo,
                                           {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  CHECK(bc.value[3] == doctest::Approx(1.0).epsilon(1e-15));

  // P2 delta property at vertices and edge midpoints.
  const std::array<std::array<double, 3>, 6> nodes = {{{1, 0, 0},
                                                       {0, 1, 0},
                                                       {0, 0, 1},
                                                       {0, 0.5, 0.5},
                                                       {0.5, 0, 0.5},
                                                       {0.5, 0.5, 0}}};
  for (int i = 0; i < 6; ++i) {
    const BasisEval b = eval_velocity_basis(Family::TaylorHood, geo, nodes[i]);
    for (int j = 0; j < 6; ++j) {
      CHECK(b.value[j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14));
    }
  }

  // Partition of unity at random interior points (P1 trio and full P2 set).
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int t = 0; t < 25; ++t) {
    double l0 = uni(rng), l1 = uni(rng) * (1.0 - l0);
    const std::array<double, 3> l = {l0, l1, 1.0 - l0 - l1};
    const BasisEval p1 = eval_velocity_basis(Family::MiniElement, geo, l);
    CHECK(p1.value[0] + p1.value[1] + p1.value[2] == doctest::Approx(1.0).epsilon(1e-14));
    const BasisEval p2 = eval_velocity_basis(Family::TaylorHood, geo, l);
    double sum = 0.0;
    for (int j = 0; j < 6; ++j) sum += p2.value[j];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("basis gradients and Laplacians match finite differences") {
  const TriMesh m = build_lshape();
  const int cell = 2;
  const CellGeometry geo = cell_geometry(m, cell);
  const double h = 1e-6;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> uni(0.1, 0.4);
  for (Family fam : {Family::MiniElement, Family::TaylorHood}) {
    for (int t = 0; t < 10; ++t) {
      const double l0 = uni(rng), l1 = uni(rng);
      const std::array<double, 3> l = {l0, l1, 1.0 - l0 - l1};
      const Eigen::Vector2d x = m.point(cell, l);
      const BasisEval b = eval_velocity_basis(fam, geo, l);
      for (int i = 0; i < b.n; ++i) {
        for (int dir = 0; dir < 2; ++dir) {
          Eigen::Vector2d xp = x, xm = x;
          xp[dir] += h;
          xm[dir] -= h;
          const BasisEval bp = eval_velocity_basis(fam, geo, m.barycentric(cell, xp));
          const BasisEval bm = eval_velocity_basis(fam, geo, m.barycentric(cell, xm));
          const double fd = (bp.value[i] - bm.value[i]) / (2.0 * h);
          CHECK(b.grad[i][dir] == doctest::Approx(fd).epsilon(1e-5));
          const double fd2 =
              (bp.grad[i][dir] - bm.grad[i][dir]) / (2.0 * h);
          // Sum of the two second derivatives = Laplacian; accumulate below.
          (void)fd2;
        }
        // Laplacian via 5-point stencil on the value; the stencil is exact
        // for the cubic basis polynomials, so only roundoff remains.
        const double h2 = 1e-4;
        double lap = 0.0;
        for (int dir = 0; dir < 2; ++dir) {
          Eigen::Vector2d xp = x, xm = x;
          xp[dir] += h2;
          xm[dir] -= h2;
          const BasisEval bp = eval_velocity_basis(fam, geo, m.barycentric(cell, xp));
          const BasisEval bm = eval_velocity_basis(fam, geo, m.barycentric(cell, xm));
          lap += (bp.value[i] - 2.0 * b.value[i] + bm.value[i]) / (h2 * h2);
        }
        CHECK(std::abs(b.laplacian[i] - lap) <= 1e-5 * std::max(1.0, std::abs(lap)));
      }
    }
  }
}

TEST_CASE("P0 projection of constants, linears, and its orthogonality") {
  const TriMesh m = build_unit_square(1);
  const QuadratureRule quad = make_quadrature(10);

  const Eigen::VectorXd c = project_P0([](const Eigen::Vector2d&) { return 3.25; }, m, quad);
  for (int k = 0; k < m.nCells(); ++k) CHECK(c[k] == doctest::Approx(3.25).epsilon(1e-14));

  // Mean of a linear function over a triangle is its centroid value.
  const Eigen::VectorXd lin =
      project_P0([](const Eigen::Vector2d& x) { return x.x(); }, m, quad);
  for (int k = 0; k < m.nCells(); ++k) {
    CHECK(lin[k] == doctest::Approx(m.centroid(k).x()).epsilon(1e-13));
  }

  // Orthogonality (f - P0 f, 1_K) = 0 per cell, and idempotence on P0 inputs.
  auto f = [](const Eigen::Vector2d& x) { return std::sin(2 * M_PI * x.x()) + x.y() * x.y(); };
  const Eigen::VectorXd pf = project_P0(f, m, quad);
  for (int k = 0; k < m.nCells(); ++k) {
    double defect = 0.0;
    for (int q = 0; q < quad.size(); ++q) {
      defect += quad.weights[q] * (f(m.point(k, quad.points[q])) - pf[k]);
    }
    CHECK(std::abs(2.0 * m.area(k) * defect) <= 1e-12);
  }
  const Eigen::VectorXd ppf = project_P0(
      [&](const Eigen::Vector2d&) { return pf[0]; }, m, quad);
  CHECK(ppf[0] == doctest::Approx(pf[0]).epsilon(1e-14));
}

TEST_CASE("P0 projection error of a smooth field decays at first order") {
  const QuadratureRule quad = make_quadrature(10);
  auto f = [](const Eigen::Vector2d& x) {
    return std::sin(2 * M_PI * x.x()) * std::sin(2 * M_PI * x.y());
  };
  TriMesh m = build_unit_square(4);
  std::vector<double> errs, hs;
  for (int level = 0; level < 4; ++level) {
    const Eigen::VectorXd pf = project_P0(f, m, quad);
    double e2 = 0.0;
    for (int k = 0; k < m.nCells(); ++k) {
      for (int q = 0; q < quad.size(); ++q) {
        const double d = f(m.point(k, quad.points[q])) - pf[k];
        e2 += 2.0 * m.area(k) * quad.weights[q] * d * d;
      }
    }
    errs.push_back(std::sqrt(e2));
    hs.push_back(m.hMax());
    if (level < 3) m = uniform_refine(m).mesh;
  }
  // Least-squares slope of log(err) against log(h) over the 4 levels.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int l = 0; l < 4; ++l) {
    const double x = std::log(hs[l]), y = std::log(errs[l]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
  CHECK(slope >= 0.9);
  CHECK(slope <= 1.1);
}

TEST_CASE("clamp_admissible") {
  Eigen::VectorXd v(3);
  v << 0.05, 0.15, 5.0;
  const Eigen::VectorXd c1 = clamp_admissible(v, 0.1, 0.2);
  CHECK(c1[0] == 0.1);
  CHECK(c1[1] == 0.15);
  CHECK(c1[2] == 0.2);
  const Eigen::VectorXd c2 = clamp_admissible(v, 1.0, 5.0);
  CHECK(c2[2] == 5.0);
  // Idempotence and monotonicity.
  const Eigen::VectorXd c3 = clamp_admissible(c1, 0.1, 0.2);
  CHECK((c3 - c1).lpNorm<Eigen::Infinity>() == 0.0);
  Eigen::VectorXd w = v;
  w.array() += 0.03;
  const Eigen::VectorXd cw = clamp_admissible(w, 0.1, 0.2);
  for (int i = 0; i < 3; ++i) CHECK(cw[i] >= c1[i]);
  CHECK_THROWS_AS(clamp_admissible(v, 0.2, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(clamp_admissible(v, 0.2, 0.2), std::invalid_argument);
}

TEST_CASE("zero_mean") {
  const TriMesh m = build_unit_square(4);
  const SpacePair sp = make_spaces(m, Family::MiniElement);

  FieldFunction ones = make_pressure_field(sp);
  ones.coeffs.setOnes();
  zero_mean(ones);
  CHECK(ones.coeffs.lpNorm<Eigen::Infinity>() <= 1e-14);

  // p = xy(x-1)(y-1) - 1/36 is already zero-mean on (0,1)^2; its P1
  // interpolant is not exactly, but the interpolant mean must match the
  // interpolant's own quadrature mean: after zero_mean the mean is 0.
  FieldFunction p = make_pressure_field(sp);
  for (int v = 0; v < m.nVertices(); ++v) {
    const auto& x = m.vertices[v];
    p.coeffs[v] = x.x() * x.y() * (x.x() - 1.0) * (x.y() - 1.0) - 1.0 / 36.0;
  }
  const Eigen::VectorXd before = p.coeffs;
  zero_mean(p);
  CHECK(std::abs(pressure_mean(p)) <= 1e-14);
  // Idempotence.
  const Eigen::VectorXd after = p.coeffs;
  zero_mean(p);
  CHECK((p.coeffs - after).lpNorm<Eigen::Infinity>() <= 1e-14);
  // The analytic field is zero-mean, so the interpolant needs only a small
  // shift (the mean of its own O(h^2) interpolation error).
  CHECK((before - after).lpNorm<Eigen::Infinity>() <= 5e-3);
}

TEST_CASE("velocity field evaluation round trip") {
  const TriMesh m = build_unit_square(2);
  for (Family fam : {Family::MiniElement, Family::TaylorHood}) {
    const SpacePair sp = make_spaces(m, fam);
    FieldFunction u = make_velocity_field(sp);
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int d = 0; d < 2 * sp.nVelDofs; ++d) u.coeffs[d] = uni(rng);

    // A linear function is reproduced exactly when interpolated on vertex
    // dofs (and edge midpoints for P2; bubble coefficients zero).
    FieldFunction lin = make_velocity_field(sp);
    auto exact = [](const Eigen::Vector2d& x) {
      return Eigen::Vector2d(2.0 * x.x() - x.y() + 0.5, x.x() + 3.0 * x.y());
    };
    for (int v = 0; v < m.nVertices(); ++v) {
      const Eigen::Vector2d val = exact(m.vertices[v]);
      lin.coeffs[v] = val.x();
      lin.coeffs[sp.nVelDofs + v] = val.y();
    }
    if (fam == Family::TaylorHood) {
      for (int e = 0; e < m.nEdges(); ++e) {
        const Eigen::Vector2d mid =
            0.5 * (m.vertices[m.edges[e][0]] + m.vertices[m.edges[e][1]]);
        const Eigen::Vector2d val = exact(mid);
        lin.coeffs[m.nVertices() + e] = val.x();
        lin.coeffs[sp.nVelDofs + m.nVertices() + e] = val.y();
      }
    }
    std::uniform_real_distribution<double> bary01(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
      const int k = static_cast<int>(rng() % m.nCells());
      double l0 = bary01(rng), l1 = bary01(rng) * (1.0 - l0);
      const std::array<double, 3> l = {l0, l1, 1.0 - l0 - l1};
      const Eigen::Vector2d x = m.point(k, l);
      const Eigen::Vector2d v = evaluate_velocity(lin, k, l);
      CHECK(v.x() == doctest::Approx(exact(x).x()).epsilon(1e-13));
      CHECK(v.y() == doctest::Approx(exact(x).y()).epsilon(1e-13));
      const Eigen::Matrix2d g = evaluate_velocity_gradient(lin, k, l);
      CHECK(g(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
      CHECK(g(0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
      CHECK(g(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(g(1, 1) == doctest::Approx(3.0).epsilon(1e-12));
      CHECK(evaluate_velocity_divergence(lin, k, l) == doctest::Approx(5.0).epsilon(1e-12));
    }
  }
}
