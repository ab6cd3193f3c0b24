// Benchmark configurations for the convergence and adaptivity studies: a
// manufactured unit-square problem whose optimal triple is known in closed
// form (the adjoint velocity has a sharp interior layer at x = 0.5), and an
// L-shaped-domain problem with rough data and no known solution. The
// manufactured data f and yOmega are derived from the exact fields through
// the strong optimality system, so discrete solutions must converge to the
// closed forms at the expected rates.
#pragma once

#include <string>

#include "ocp/optimize.hpp"

namespace ocp {

struct BenchmarkProblem {
  std::string name;
  TriMesh initialMesh;
  ControlProblem data;

  bool hasExact = false;
  ScalarField exactControl;
  VectorField exactVelocity;
  MatrixField exactVelocityGradient;
  ScalarField exactPressure;
  VectorField exactAdjointVelocity;
  MatrixField exactAdjointGradient;
  ScalarField exactAdjointPressure;
};

/// Unit square, control bounds [0.1, 0.2], alpha = 1. Stream functions
/// xi = (xy(1-x)(1-y))^2 and xi * atan((x - 0.5)/0.01) generate the exact
/// state and adjoint velocities (scaled by 50), so both are solenoidal with
/// zero trace; the exact control is the clamped product y.z. The load and
/// the tracking target follow from the strong state and adjoint equations.
BenchmarkProblem layer_problem();

/// L-shape (-1,1)^2 \ [0,1]x[-1,0], control bounds [1, 5], alpha = 1,
/// polynomial/trigonometric data of magnitude 1000; no closed-form solution.
BenchmarkProblem lshape_problem();

}  // namespace ocp
