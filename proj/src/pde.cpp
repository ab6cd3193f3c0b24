#include "ocp/pde.hpp"

#include <cmath>

namespace ocp {

namespace {

/// Expands a reduced solution vector into velocity/pressure fields (boundary
/// velocity dofs zero) and returns the mean-constraint multiplier.
StokesSolution expand_solution(const SpacePair& spaces, const Eigen::VectorXd& x,
                               double residual) {
  const int ni = spaces.nVelInterior;
  StokesSolution out;
  out.velocity = make_velocity_field(spaces);
  out.pressure = make_pressure_field(spaces);
  for (int r = 0; r < ni; ++r) {
    const int d = spaces.velFull[r];
    out.velocity.coeffs[d] = x[r];
    out.velocity.coeffs[spaces.nVelDofs + d] = x[ni + r];
  }
  out.pressure.coeffs = x.segment(2 * ni, spaces.nPressDofs);
  out.multiplier = x[x.size() - 1];
  out.solveResidual = residual;
  return out;
}

/// Accumulates int_Omega g(cell, bary, xy) by mapped quadrature.
template <class Integrand>
double integrate(const TriMesh& mesh, const QuadratureRule& quad, Integrand&& g) {
  double acc = 0.0;
  for (int k = 0; k < mesh.nCells(); ++k) {
    const double area = mesh.area(k);
    for (int q = 0; q < quad.size(); ++q) {
      const auto& bary = quad.points[q];
      acc += 2.0 * area * quad.weights[q] * g(k, bary, mesh.point(k, bary));
    }
  }
  return acc;
}

}  // namespace

StokesOperator::StokesOperator(const TriMesh& mesh, const SpacePair& spaces,
                               const ControlEval& control, const QuadratureRule& matrixQuad)
    : mesh_(&mesh),
      spaces_(&spaces),
      fact_(assemble_system(mesh, spaces, control, matrixQuad).matrix) {}

StokesSolution StokesOperator::solve_raw(const Eigen::VectorXd& rhs) const {
  const Eigen::VectorXd x = fact_.solve(rhs);
  return expand_solution(*spaces_, x, fact_.lastResidual());
}

StokesSolution StokesOperator::solve_state(const VectorField& f,
                                           const QuadratureRule& dataQuad) const {
  return solve_raw(assemble_state_rhs(*mesh_, *spaces_, f, dataQuad));
}

StokesSolution StokesOperator::solve_adjoint(const FieldFunction& yh, const VectorField& yOmega,
                                             const QuadratureRule& dataQuad) const {
  StokesSolution z = solve_raw(assemble_adjoint_rhs(*mesh_, *spaces_, yh, yOmega, dataQuad));
  // The factorized system carries -(p, div v); the adjoint pressure enters
  // with +(r, div v), so the recovered multiplier is negated.
  z.pressure.coeffs = -z.pressure.coeffs;
  z.multiplier = -z.multiplier;
  return z;
}

StokesSolution StokesOperator::solve_linearized(const ControlEval& v, const FieldFunction& yh,
                                                const QuadratureRule& dataQuad) const {
  return solve_raw(assemble_linearized_rhs(*mesh_, *spaces_, v, yh, dataQuad));
}

StokesSolution solve_state(const TriMesh& mesh, const SpacePair& spaces, const ControlEval& u,
                           const VectorField& f, const QuadratureRule& matrixQuad,
                           const QuadratureRule& dataQuad) {
  return StokesOperator(mesh, spaces, u, matrixQuad).solve_state(f, dataQuad);
}

StokesSolution solve_adjoint(const TriMesh& mesh, const SpacePair& spaces, const ControlEval& u,
                             const FieldFunction& yh, const VectorField& yOmega,
                             const QuadratureRule& matrixQuad, const QuadratureRule& dataQuad) {
  return StokesOperator(mesh, spaces, u, matrixQuad).solve_adjoint(yh, yOmega, dataQuad);
}

StokesSolution solve_linearized(const TriMesh& mesh, const SpacePair& spaces,
                                const ControlEval& u, const ControlEval& v,
                                const FieldFunction& yh, const QuadratureRule& matrixQuad,
                                const QuadratureRule& dataQuad) {
  return StokesOperator(mesh, spaces, u, matrixQuad).solve_linearized(v, yh, dataQuad);
}

double l2_error_velocity(const FieldFunction& vh, const VectorField& exact,
                         const QuadratureRule& quad) {
  const TriMesh& mesh = *vh.space->mesh;
  return std::sqrt(integrate(
      mesh, quad, [&](int k, const std::array<double, 3>& bary, const Eigen::Vector2d& xy) {
        return (evaluate_velocity(vh, k, bary) - exact(xy)).squaredNorm();
      }));
}

double h1_error_velocity(const FieldFunction& vh, const MatrixField& exactGrad,
                         const QuadratureRule& quad) {
  const TriMesh& mesh = *vh.space->mesh;
  return std::sqrt(integrate(
      mesh, quad, [&](int k, const std::array<double, 3>& bary, const Eigen::Vector2d& xy) {
        return (evaluate_velocity_gradient(vh, k, bary) - exactGrad(xy)).squaredNorm();
      }));
}

double l2_error_pressure(const FieldFunction& ph, const ScalarField& exact,
                         const QuadratureRule& quad) {
  const TriMesh& mesh = *ph.space->mesh;
  return std::sqrt(integrate(
      mesh, quad, [&](int k, const std::array<double, 3>& bary, const Eigen::Vector2d& xy) {
        const double d = evaluate_pressure(ph, k, bary) - exact(xy);
        return d * d;
      }));
}

double l2_error_scalar(const TriMesh& mesh, const ControlEval& approx, const ScalarField& exact,
                       const QuadratureRule& quad) {
  return std::sqrt(integrate(
      mesh, quad, [&](int k, const std::array<double, 3>& bary, const Eigen::Vector2d& xy) {
        const double d = approx(k, bary, xy) - exact(xy);
        return d * d;
      }));
}

double l2_norm_divergence(const FieldFunction& vh, const QuadratureRule& quad) {
  const TriMesh& mesh = *vh.space->mesh;
  return std::sqrt(
      integrate(mesh, quad, [&](int k, const std::array<double, 3>& bary, const Eigen::Vector2d&) {
        const double d = evaluate_velocity_divergence(vh, k, bary);
        return d * d;
      }));
}

}  // namespace ocp
