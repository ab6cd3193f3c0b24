#include "ocp/assembly.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace ocp {

namespace {

/// Shared load-vector loop: accumulates (g, phi_i) for an integrand evaluated
/// per quadrature point as a vector value.
template <class Integrand>
Eigen::VectorXd velocity_moments_impl(const TriMesh& mesh, const SpacePair& spaces,
                                      const QuadratureRule& quad, Integrand&& g) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * spaces.nVelDofs);
  for (int k = 0; k < mesh.nCells(); ++k) {
    const CellGeometry geo = cell_geometry(mesh, k);
    for (int q = 0; q < quad.size(); ++q) {
      const auto& bary = quad.points[q];
      const BasisEval basis = eval_velocity_basis(spaces.family, geo, bary);
      const Eigen::Vector2d xy = mesh.point(k, bary);
      const Eigen::Vector2d value = g(k, bary, xy);
      const double w = 2.0 * geo.area * quad.weights[q];
      for (int i = 0; i < basis.n; ++i) {
        const int dof = spaces.velDofMap[k][i];
        out[dof] += w * basis.value[i] * value.x();
        out[spaces.nVelDofs + dof] += w * basis.value[i] * value.y();
      }
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd local_velocity_matrix(const TriMesh& mesh, const SpacePair& spaces, int cell,
                                      const ControlEval& control, const QuadratureRule& quad) {
  const CellGeometry geo = cell_geometry(mesh, cell);
  const int n = spaces.velLocalSize;
  Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n, n);
  for (int q = 0; q < quad.size(); ++q) {
    const auto& bary = quad.points[q];
    const BasisEval basis = eval_velocity_basis(spaces.family, geo, bary);
    const Eigen::Vector2d xy = mesh.point(cell, bary);
    const double u = control(cell, bary, xy);
    const double w = 2.0 * geo.area * quad.weights[q];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        local(i, j) += w * (basis.grad[i].dot(basis.grad[j]) + u * basis.value[i] * basis.value[j]);
  }
  return local;
}

BlockSaddleSystem assemble_system(const TriMesh& mesh, const SpacePair& spaces,
                                  const ControlEval& control, const QuadratureRule& quad) {
  const int ni = spaces.nVelInterior;
  const int np = spaces.nPressDofs;
  const int n = spaces.velLocalSize;
  const int size = 2 * ni + np + 1;
  const int multRow = size - 1;

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.nCells()) * (2 * n * n + 12 * n + 6));

  Eigen::MatrixXd bx(3, n), by(3, n);
  for (int k = 0; k < mesh.nCells(); ++k) {
    const CellGeometry geo = cell_geometry(mesh, k);
    Eigen::MatrixXd avv = Eigen::MatrixXd::Zero(n, n);
    bx.setZero();
    by.setZero();
    for (int q = 0; q < quad.size(); ++q) {
      const auto& bary = quad.points[q];
      const BasisEval basis = eval_velocity_basis(spaces.family, geo, bary);
      const Eigen::Vector2d xy = mesh.point(k, bary);
      const double u = control(k, bary, xy);
      const double w = 2.0 * geo.area * quad.weights[q];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          avv(i, j) +=
              w * (basis.grad[i].dot(basis.grad[j]) + u * basis.value[i] * basis.value[j]);
      for (int p = 0; p < 3; ++p)
        for (int j = 0; j < n; ++j) {
          bx(p, j) -= w * bary[p] * basis.grad[j].x();
          by(p, j) -= w * bary[p] * basis.grad[j].y();
        }
    }

    for (int i = 0; i < n; ++i) {
      const int ri = spaces.velReduced[spaces.velDofMap[k][i]];
      if (ri < 0) continue;
      for (int j = 0; j < n; ++j) {
        const int rj = spaces.velReduced[spaces.velDofMap[k][j]];
        if (rj < 0) continue;
        trips.emplace_back(ri, rj, avv(i, j));
        trips.emplace_back(ni + ri, ni + rj, avv(i, j));
      }
    }
    for (int p = 0; p < 3; ++p) {
      const int prow = 2 * ni + mesh.cells[k][p];
      for (int j = 0; j < n; ++j) {
        const int rj = spaces.velReduced[spaces.velDofMap[k][j]];
        if (rj < 0) continue;
        trips.emplace_back(prow, rj, bx(p, j));
        trips.emplace_back(rj, prow, bx(p, j));
        trips.emplace_back(prow, ni + rj, by(p, j));
        trips.emplace_back(ni + rj, prow, by(p, j));
      }
      // (psi_p, 1) = |K|/3 exactly for the P1 pressure hat.
      trips.emplace_back(multRow, prow, geo.area / 3.0);
      trips.emplace_back(prow, multRow, geo.area / 3.0);
    }
  }

  BlockSaddleSystem system;
  system.nVelInterior = ni;
  system.nPressure = np;
  system.matrix.resize(size, size);
  system.matrix.setFromTriplets(trips.begin(), trips.end());
  system.matrix.makeCompressed();
  return system;
}

BlockSaddleSystem assemble_system(const TriMesh& mesh, const SpacePair& spaces,
                                  const Eigen::VectorXd& controlCellValues, double lower,
                                  double upper, const QuadratureRule& quad) {
  if (controlCellValues.size() != mesh.nCells())
    throw std::invalid_argument("control vector size does not match the mesh");
  const double slack = 1e-12 * std::max(1.0, std::max(std::abs(lower), std::abs(upper)));
  for (int k = 0; k < mesh.nCells(); ++k) {
    const double v = controlCellValues[k];
    if (!(v >= lower - slack && v <= upper + slack))
      throw std::invalid_argument("control value " + std::to_string(v) + " on cell " +
                                  std::to_string(k) + " violates the admissible bounds");
  }
  return assemble_system(
      mesh, spaces,
      [&controlCellValues](int k, const std::array<double, 3>&, const Eigen::Vector2d&) {
        return controlCellValues[k];
      },
      quad);
}

Eigen::VectorXd assemble_velocity_moments(const TriMesh& mesh, const SpacePair& spaces,
                                          const VectorField& g, const QuadratureRule& quad) {
  return velocity_moments_impl(
      mesh, spaces, quad,
      [&g](int, const std::array<double, 3>&, const Eigen::Vector2d& xy) { return g(xy); });
}

Eigen::VectorXd reduce_velocity_vector(const SpacePair& spaces, const Eigen::VectorXd& moments) {
  if (moments.size() != 2 * spaces.nVelDofs)
    throw std::invalid_argument("moment vector size does not match the space");
  const int ni = spaces.nVelInterior;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * ni + spaces.nPressDofs + 1);
  for (int d = 0; d < spaces.nVelDofs; ++d) {
    const int r = spaces.velReduced[d];
    if (r < 0) continue;
    out[r] = moments[d];
    out[ni + r] = moments[spaces.nVelDofs + d];
  }
  return out;
}

Eigen::VectorXd assemble_state_rhs(const TriMesh& mesh, const SpacePair& spaces,
                                   const VectorField& f, const QuadratureRule& quad) {
  return reduce_velocity_vector(spaces, assemble_velocity_moments(mesh, spaces, f, quad));
}

Eigen::VectorXd assemble_adjoint_rhs(const TriMesh& mesh, const SpacePair& spaces,
                                     const FieldFunction& yh, const VectorField& yOmega,
                                     const QuadratureRule& quad) {
  const Eigen::VectorXd moments = velocity_moments_impl(
      mesh, spaces, quad,
      [&yh, &yOmega](int k, const std::array<double, 3>& bary, const Eigen::Vector2d& xy) {
        return Eigen::Vector2d(evaluate_velocity(yh, k, bary) - yOmega(xy));
      });
  return reduce_velocity_vector(spaces, moments);
}

Eigen::VectorXd assemble_linearized_rhs(const TriMesh& mesh, const SpacePair& spaces,
                                        const ControlEval& v, const FieldFunction& yh,
                                        const QuadratureRule& quad) {
  const Eigen::VectorXd moments = velocity_moments_impl(
      mesh, spaces, quad,
      [&v, &yh](int k, const std::array<double, 3>& bary, const Eigen::Vector2d& xy) {
        return Eigen::Vector2d(-v(k, bary, xy) * evaluate_velocity(yh, k, bary));
      });
  return reduce_velocity_vector(spaces, moments);
}

void dump_matrix(const BlockSaddleSystem& system, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("cannot open " + path + " for writing");
  std::fprintf(fp, "# rows %d cols %d nnz %ld\n", system.size(), system.size(),
               static_cast<long>(system.matrix.nonZeros()));
  for (int col = 0; col < system.matrix.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.matrix, col); it; ++it)
      std::fprintf(fp, "%d %d %.17g\n", static_cast<int>(it.row()), static_cast<int>(it.col()),
                   it.value());
  std::fclose(fp);
}

}  // namespace ocp
