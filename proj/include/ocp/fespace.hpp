// Finite-element spaces: mini element and lowest-order Taylor-Hood velocity
// with continuous P1 pressure, piecewise-constant controls, dof maps, basis
// evaluation, L2 projection onto P0, and pressure mean correction.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "ocp/mesh.hpp"
#include "ocp/quadrature.hpp"

namespace ocp {

enum class Family { MiniElement, TaylorHood };

/// Velocity/pressure dof maps for one mesh. Scalar velocity dofs are numbered
/// per component: vertices first, then cell bubbles (mini) or edge midpoints
/// (Taylor-Hood). Pressure is continuous P1 on the vertices. All velocity
/// dofs on the boundary are Dirichlet-constrained (homogeneous).
struct SpacePair {
  Family family = Family::MiniElement;
  const TriMesh* mesh = nullptr;

  int nVelDofs = 0;    ///< scalar dofs per velocity component
  int nPressDofs = 0;  ///< P1 pressure dofs (= vertices)
  int velLocalSize = 0;  ///< 4 for mini, 6 for Taylor-Hood

  std::vector<std::array<int, 6>> velDofMap;  ///< per cell: local -> global scalar dof
  std::vector<char> boundaryVelDofs;          ///< per scalar dof: on the Dirichlet boundary

  // Reduced (interior) numbering used by the assembled systems.
  std::vector<int> velReduced;  ///< scalar dof -> interior index or -1
  std::vector<int> velFull;     ///< interior index -> scalar dof
  int nVelInterior = 0;
};

SpacePair make_spaces(const TriMesh& mesh, Family family);

/// Constant-per-cell geometry data shared by basis evaluation and assembly.
struct CellGeometry {
  std::array<Eigen::Vector2d, 3> gradLambda;
  double area = 0.0;
};
CellGeometry cell_geometry(const TriMesh& mesh, int k);

/// All local scalar velocity basis functions of the space family evaluated at
/// one barycentric point: values, physical gradients, and Laplacians (exact
/// from the mapped polynomials; zero for P1, constant for P2, linear for the
/// cubic bubble 27*l0*l1*l2).
struct BasisEval {
  int n = 0;
  std::array<double, 6> value{};
  std::array<Eigen::Vector2d, 6> grad{};
  std::array<double, 6> laplacian{};
};
BasisEval eval_velocity_basis(Family family, const CellGeometry& geo,
                              const std::array<double, 3>& lambda);

/// Coefficient vector bound to a space. Velocity stacks the two components:
/// [x-component scalar dofs | y-component scalar dofs]. Pressure and control
/// are single blocks (vertices resp. cells).
struct FieldFunction {
  enum class Role { Velocity, Pressure, Control };
  Role role = Role::Pressure;
  const SpacePair* space = nullptr;  ///< Velocity/Pressure
  const TriMesh* mesh = nullptr;     ///< Control
  Eigen::VectorXd coeffs;
};

FieldFunction make_velocity_field(const SpacePair& space);
FieldFunction make_pressure_field(const SpacePair& space);
FieldFunction make_control_field(const TriMesh& mesh, double value);

Eigen::Vector2d evaluate_velocity(const FieldFunction& f, int cell,
                                  const std::array<double, 3>& bary);
/// Gradient with rows = components, columns = spatial derivatives d/dx_j.
Eigen::Matrix2d evaluate_velocity_gradient(const FieldFunction& f, int cell,
                                           const std::array<double, 3>& bary);
Eigen::Vector2d evaluate_velocity_laplacian(const FieldFunction& f, int cell,
                                            const std::array<double, 3>& bary);
double evaluate_velocity_divergence(const FieldFunction& f, int cell,
                                    const std::array<double, 3>& bary);
double evaluate_pressure(const FieldFunction& f, int cell, const std::array<double, 3>& bary);
Eigen::Vector2d evaluate_pressure_gradient(const FieldFunction& f, int cell);
double evaluate_control(const FieldFunction& f, int cell);

/// Cell means (1/|K|) int_K f by quadrature; unclamped.
Eigen::VectorXd project_P0(const std::function<double(const Eigen::Vector2d&)>& f,
                           const TriMesh& mesh, const QuadratureRule& quad);

/// Elementwise min{b, max{v, a}}; requires a < b.
Eigen::VectorXd clamp_admissible(const Eigen::VectorXd& values, double a, double b);

/// Subtracts the area-weighted mean so the pressure integrates to zero.
void zero_mean(FieldFunction& pressure);
double pressure_mean(const FieldFunction& pressure);

/// CSV dump `dof_id,value` (velocity: `dof_id,value_x,value_y`).
void dump_field(const FieldFunction& f, const std::string& path);

}  // namespace ocp
