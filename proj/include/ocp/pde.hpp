// State, adjoint, and linearized solves of the velocity/pressure system with
// a reaction-coefficient control, sharing one factorization per control, plus
// quadrature-based error norms against smooth references.
#pragma once

#include <functional>

#include "ocp/assembly.hpp"
#include "ocp/linsolve.hpp"

namespace ocp {

using ScalarField = std::function<double(const Eigen::Vector2d&)>;
/// Reference velocity gradient, rows = components, cols = d/dx_j.
using MatrixField = std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>;

/// Velocity/pressure pair from one solve. The pressure carries zero
/// area-weighted mean by the multiplier construction; `multiplier` is the
/// mean-constraint multiplier (vanishes for compatible loads) and
/// `solveResidual` the audited relative residual of the linear solve.
struct StokesSolution {
  FieldFunction velocity;
  FieldFunction pressure;
  double solveResidual = 0.0;
  double multiplier = 0.0;
};

/// System matrix at a fixed control, factorized once and reused by the
/// state, adjoint, and linearized solves.
class StokesOperator {
public:
  StokesOperator(const TriMesh& mesh, const SpacePair& spaces, const ControlEval& control,
                 const QuadratureRule& matrixQuad);

  /// Weak solution of  (grad y, grad v) + (u y, v) - (p, div v) = (f, v).
  StokesSolution solve_state(const VectorField& f, const QuadratureRule& dataQuad) const;

  /// Weak solution of  (grad w, grad z) + (u w, z) + (r, div w) = (yh - yOmega, w);
  /// the returned pressure is r (note the flipped sign of the divergence term).
  StokesSolution solve_adjoint(const FieldFunction& yh, const VectorField& yOmega,
                               const QuadratureRule& dataQuad) const;

  /// Weak solution of  (grad phi, grad w) + (u phi, w) - (pi, div w) = -(v yh, w),
  /// the derivative of the control-to-state map in direction v.
  StokesSolution solve_linearized(const ControlEval& v, const FieldFunction& yh,
                                  const QuadratureRule& dataQuad) const;

  /// Solution for an arbitrary reduced right-hand side (shared plumbing).
  StokesSolution solve_raw(const Eigen::VectorXd& rhs) const;

  const SpacePair& spaces() const { return *spaces_; }
  const TriMesh& mesh() const { return *mesh_; }

private:
  const TriMesh* mesh_;
  const SpacePair* spaces_;
  Factorization fact_;
};

StokesSolution solve_state(const TriMesh& mesh, const SpacePair& spaces, const ControlEval& u,
                           const VectorField& f, const QuadratureRule& matrixQuad,
                           const QuadratureRule& dataQuad);
StokesSolution solve_adjoint(const TriMesh& mesh, const SpacePair& spaces, const ControlEval& u,
                             const FieldFunction& yh, const VectorField& yOmega,
                             const QuadratureRule& matrixQuad, const QuadratureRule& dataQuad);
StokesSolution solve_linearized(const TriMesh& mesh, const SpacePair& spaces,
                                const ControlEval& u, const ControlEval& v,
                                const FieldFunction& yh, const QuadratureRule& matrixQuad,
                                const QuadratureRule& dataQuad);

// Quadrature-based norms and errors (H1 means the H1 seminorm throughout).
double l2_error_velocity(const FieldFunction& vh, const VectorField& exact,
                         const QuadratureRule& quad);
double h1_error_velocity(const FieldFunction& vh, const MatrixField& exactGrad,
                         const QuadratureRule& quad);
double l2_error_pressure(const FieldFunction& ph, const ScalarField& exact,
                         const QuadratureRule& quad);
/// L2 distance between a pointwise coefficient and a smooth reference.
double l2_error_scalar(const TriMesh& mesh, const ControlEval& approx, const ScalarField& exact,
                       const QuadratureRule& quad);
double l2_norm_divergence(const FieldFunction& vh, const QuadratureRule& quad);

}  // namespace ocp
