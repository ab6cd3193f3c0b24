#include "ocp/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace ocp {

namespace {

/// Golub-Welsch: nodes/weights of the m-point Gauss rule for the weight
/// function encoded by the symmetric tridiagonal Jacobi matrix (diag, offdiag)
/// with zeroth moment mu0. Nodes come out ascending (Eigen's ordering).
void golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag, double mu0,
                  Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  const int m = static_cast<int>(diag.size());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) T(i, i) = diag[i];
  for (int i = 0; i + 1 < m; ++i) T(i, i + 1) = T(i + 1, i) = offdiag[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  nodes = es.eigenvalues();
  weights.resize(m);
  for (int i = 0; i < m; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    weights[i] = mu0 * v0 * v0;
  }
}

/// m-point Gauss-Legendre on [-1,1].
void gauss_legendre(int m, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd off(m - 1 > 0 ? m - 1 : 0);
  for (int k = 1; k < m; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  golub_welsch(diag, off, 2.0, nodes, weights);
}

/// m-point Gauss-Jacobi with weight (1-x) on [-1,1] (alpha=1, beta=0).
void gauss_jacobi10(int m, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  Eigen::VectorXd diag(m);
  Eigen::VectorXd off(m - 1 > 0 ? m - 1 : 0);
  for (int k = 0; k < m; ++k) diag[k] = -1.0 / ((2.0 * k + 1.0) * (2.0 * k + 3.0));
  for (int k = 1; k < m; ++k) {
    off[k - 1] = std::sqrt(k * (k + 1.0)) / (2.0 * k + 1.0);
  }
  golub_welsch(diag, off, 2.0, nodes, weights);
}

}  // namespace

QuadratureRule make_quadrature(int exactDegree) {
  if (exactDegree < 2 || exactDegree > 20) {
    throw std::invalid_argument("make_quadrature: exactDegree must be in {2,...,20}, got " +
                                std::to_string(exactDegree));
  }
  const int m = (exactDegree + 2) / 2;  // 2m-1 >= exactDegree

  Eigen::VectorXd sNodes, sWeights, tNodes, tWeights;
  gauss_jacobi10(m, sNodes, sWeights);
  gauss_legendre(m, tNodes, tWeights);

  QuadratureRule rule;
  rule.exactDegree = exactDegree;
  rule.points.reserve(6 * m * m);
  rule.weights.reserve(6 * m * m);
  static const int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int i = 0; i < m; ++i) {
    // Map GJ(1,0) from [-1,1] to [0,1]: s = (1+x)/2 integrates (1-s) ds with w/4.
    const double s = 0.5 * (1.0 + sNodes[i]);
    const double ws = 0.25 * sWeights[i];
    for (int j = 0; j < m; ++j) {
      const double t = 0.5 * (1.0 + tNodes[j]);
      const double wt = 0.5 * tWeights[j];
      // Conical point (x,y) = (s, t(1-s)) on the reference triangle.
      const double x = s;
      const double y = t * (1.0 - s);
      const std::array<double, 3> lambda = {1.0 - x - y, x, y};
      const double w = ws * wt / 6.0;
      for (const auto& p : perm) {
        rule.points.push_back({lambda[p[0]], lambda[p[1]], lambda[p[2]]});
        rule.weights.push_back(w);
      }
    }
  }
  return rule;
}

const EdgeRule& edge_rule() {
  static const EdgeRule rule = [] {
    const double d = 0.5 * std::sqrt(3.0 / 5.0);
    EdgeRule r;
    r.points = {0.5 - d, 0.5, 0.5 + d};
    r.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    return r;
  }();
  return rule;
}

double barycentric_monomial_integral(int a, int b, int c) {
  long double num = 1.0L;
  for (int k = 2; k <= a; ++k) num *= k;
  for (int k = 2; k <= b; ++k) num *= k;
  for (int k = 2; k <= c; ++k) num *= k;
  long double den = 1.0L;
  for (int k = 2; k <= a + b + c + 2; ++k) den *= k;
  return static_cast<double>(num / den);
}

}  // namespace ocp
