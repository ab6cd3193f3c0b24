// Assembly of the velocity/pressure saddle-point system with the control
// acting as a reaction coefficient, plus the load vectors used by the state,
// adjoint, and linearized solves. Velocity Dirichlet dofs are eliminated by
// row/column removal; a single scalar Lagrange multiplier pins the pressure
// mean.
#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <string>

#include "ocp/fespace.hpp"
#include "ocp/mesh.hpp"
#include "ocp/quadrature.hpp"

namespace ocp {

/// Pointwise scalar coefficient: (cell, barycentric coords, physical point).
using ControlEval =
    std::function<double(int, const std::array<double, 3>&, const Eigen::Vector2d&)>;
/// Pointwise vector-valued data field.
using VectorField = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;

/// Assembled system in the reduced ordering
/// [vx interior | vy interior | pressure | mean multiplier]:
///
///   [ A   B^T  0 ] [v]   A   = (grad phi_j, grad phi_i) + (u phi_j, phi_i)
///   [ B   0    m ] [p],  B   = -(psi_k, div phi_j)
///   [ 0  m^T   0 ] [s]   m_k = (psi_k, 1)
struct BlockSaddleSystem {
  Eigen::SparseMatrix<double> matrix;
  int nVelInterior = 0;  ///< interior scalar velocity dofs per component
  int nPressure = 0;

  int size() const { return 2 * nVelInterior + nPressure + 1; }
  int pressureOffset() const { return 2 * nVelInterior; }
};

/// Local velocity block (stiffness + reaction) of one cell, for both
/// components' shared scalar basis; rows/cols follow the local dof order.
Eigen::MatrixXd local_velocity_matrix(const TriMesh& mesh, const SpacePair& spaces, int cell,
                                      const ControlEval& control, const QuadratureRule& quad);

BlockSaddleSystem assemble_system(const TriMesh& mesh, const SpacePair& spaces,
                                  const ControlEval& control, const QuadratureRule& quad);

/// Piecewise-constant control given per cell. Throws std::invalid_argument if
/// the vector size does not match the mesh or any value leaves [lower, upper]
/// beyond roundoff slack.
BlockSaddleSystem assemble_system(const TriMesh& mesh, const SpacePair& spaces,
                                  const Eigen::VectorXd& controlCellValues, double lower,
                                  double upper, const QuadratureRule& quad);

/// Unreduced moments (g, phi_i) for every scalar velocity dof, stacked
/// [x-component | y-component]; size 2*nVelDofs.
Eigen::VectorXd assemble_velocity_moments(const TriMesh& mesh, const SpacePair& spaces,
                                          const VectorField& g, const QuadratureRule& quad);

/// Scatter unreduced velocity moments into a system-sized vector (pressure
/// and multiplier entries zero).
Eigen::VectorXd reduce_velocity_vector(const SpacePair& spaces, const Eigen::VectorXd& moments);

/// State load [(f, phi_i) | 0 | 0].
Eigen::VectorXd assemble_state_rhs(const TriMesh& mesh, const SpacePair& spaces,
                                   const VectorField& f, const QuadratureRule& quad);

/// Adjoint load [(yh - yOmega, phi_i) | 0 | 0].
Eigen::VectorXd assemble_adjoint_rhs(const TriMesh& mesh, const SpacePair& spaces,
                                     const FieldFunction& yh, const VectorField& yOmega,
                                     const QuadratureRule& quad);

/// Linearized-state load [-(v yh, phi_i) | 0 | 0] for a scalar direction v.
Eigen::VectorXd assemble_linearized_rhs(const TriMesh& mesh, const SpacePair& spaces,
                                        const ControlEval& v, const FieldFunction& yh,
                                        const QuadratureRule& quad);

/// ASCII coordinate dump `row col value` per nonzero, 17 significant digits.
void dump_matrix(const BlockSaddleSystem& system, const std::string& path);

}  // namespace ocp
