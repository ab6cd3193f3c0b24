// Solution of the bilinear optimal control problem
//
//   min  1/2 ||y - yOmega||^2 + alpha/2 ||u||^2
//   s.t. (grad y, grad v) + (u y, v) - (p, div v) = (f, v),  div y = 0,
//        lower <= u <= upper,
//
// by a projected fixed-point iteration with Armijo backtracking. Two control
// discretizations: piecewise-constant cell values, and the variational form
// where the control is carried implicitly as clamp(y.z/alpha).
#pragma once

#include <vector>

#include "ocp/pde.hpp"

namespace ocp {

struct ControlProblem {
  VectorField f;
  VectorField yOmega;
  double alpha = 1.0;
  double lower = 0.0;
  double upper = 1.0;
};

enum class Scheme { FullyDiscrete, Semidiscrete };

struct SolverOptions {
  double tol = 1e-8;  ///< absolute L2 fixed-point residual of the control
  int maxIterations = 100;
  int matrixQuadDegree = 6;
  int dataQuadDegree = 8;
  Eigen::VectorXd initialControl;  ///< per-cell start values; empty = midpoint
};

/// Converged iterate. For the fully discrete scheme `control` holds the P0
/// optimal control; for the semidiscrete scheme it holds cell means of the
/// implicit control clamp(y.z/alpha) (use control_eval for exact values).
struct OptimalSolution {
  Scheme scheme = Scheme::FullyDiscrete;
  FieldFunction control;
  StokesSolution state;
  StokesSolution adjoint;
  double cost = 0.0;
  int iterations = 0;
  double residual = 0.0;  ///< fixed-point residual at exit
  std::vector<double> costHistory;
};

OptimalSolution solve_fully_discrete(const TriMesh& mesh, const SpacePair& spaces,
                                     const ControlProblem& problem,
                                     const SolverOptions& options = {});
OptimalSolution solve_semidiscrete(const TriMesh& mesh, const SpacePair& spaces,
                                   const ControlProblem& problem,
                                   const SolverOptions& options = {});

/// Pointwise control clamp(y.z/alpha) of the variational scheme. The fields
/// are captured by value; their space must outlive the closure.
ControlEval semidiscrete_control(FieldFunction y, FieldFunction z, double alpha, double lower,
                                 double upper);

/// Unified pointwise accessor for either scheme.
ControlEval control_eval(const OptimalSolution& solution, const ControlProblem& problem);

/// Tracking-plus-penalty cost of a given control (solves the state equation).
double cost(const TriMesh& mesh, const SpacePair& spaces, const ControlProblem& problem,
            const ControlEval& control, const QuadratureRule& matrixQuad,
            const QuadratureRule& dataQuad);

/// Cost evaluated from an existing state (no solve).
double cost_of_state(const TriMesh& mesh, const ControlProblem& problem,
                     const FieldFunction& velocity, const ControlEval& control,
                     const QuadratureRule& dataQuad);

/// Pointwise density of the reduced gradient, alpha u - y.z.
ControlEval reduced_gradient_density(FieldFunction y, FieldFunction z, ControlEval u,
                                     double alpha);

/// Per-cell means (1/|K|) int_K y.z (the P0-projected gradient data).
Eigen::VectorXd cell_mean_velocity_dot(const FieldFunction& y, const FieldFunction& z,
                                       const QuadratureRule& quad);

/// Curvature j''(u)[v,v] = alpha||v||^2 - 2 (v phi, z) + ||phi||^2 with the
/// linearized state phi solved through the supplied operator.
double hessian_quadratic_form(const StokesOperator& op, const FieldFunction& y,
                              const FieldFunction& z, const ControlEval& v, double alpha,
                              const QuadratureRule& dataQuad);

/// L2 norm of u - clamp(P0(y.z)/alpha) over the cells (fully discrete form).
double vi_residual_P0(const TriMesh& mesh, const Eigen::VectorXd& controlCells,
                      const FieldFunction& y, const FieldFunction& z, double alpha, double lower,
                      double upper, const QuadratureRule& quad);

/// L2 norm of u - clamp(y.z/alpha) evaluated pointwise (variational form).
double vi_residual_pointwise(const TriMesh& mesh, const ControlEval& u, const FieldFunction& y,
                             const FieldFunction& z, double alpha, double lower, double upper,
                             const QuadratureRule& quad);

struct OptimalityReport {
  double residual = 0.0;             ///< scheme-appropriate VI residual
  double lowerActiveFraction = 0.0;  ///< area fraction with the lower bound binding
  double upperActiveFraction = 0.0;
};

OptimalityReport check_optimality(const OptimalSolution& solution, const ControlProblem& problem,
                                  const QuadratureRule& quad);

}  // namespace ocp
