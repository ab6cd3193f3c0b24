// Symmetric quadrature on the reference triangle and a Gauss rule for edges.
#pragma once

#include <array>
#include <vector>

namespace ocp {

/// Quadrature rule on the reference triangle, stored in barycentric
/// coordinates. Weights sum to the reference area 1/2 and the rule integrates
/// every polynomial of total degree <= exactDegree exactly.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int exactDegree = 0;

  int size() const { return static_cast<int>(points.size()); }
};

/// Builds a symmetric rule exact to the requested degree (2..20). The rule is
/// a conical product of Gauss-Jacobi(1,0) and Gauss-Legendre nodes,
/// symmetrized over the six barycentric permutations, so exactness holds by
/// construction for any degree in range.
QuadratureRule make_quadrature(int exactDegree);

/// 3-point Gauss-Legendre rule on [0,1], exact to degree 5. Used for the edge
/// jump integrals, whose integrands are at most piecewise linear traces
/// squared (degree 2), with headroom.
struct EdgeRule {
  std::array<double, 3> points;
  std::array<double, 3> weights;
};
const EdgeRule& edge_rule();

/// Closed-form integral of the barycentric monomial l0^a l1^b l2^c over the
/// reference triangle (area 1/2): a! b! c! / (a+b+c+2)!. Exposed because the
/// tests and the quadrature validation share it as the independent oracle.
double barycentric_monomial_integral(int a, int b, int c);

}  // namespace ocp
