// Sparse direct solve of the assembled saddle-point systems: one LU
// factorization reused for every right-hand side, with a residual audit (and
// one step of iterative refinement) after each solve.
#pragma once

#include <Eigen/Sparse>
#include <memory>

#include "ocp/assembly.hpp"
#include "ocp/errors.hpp"

namespace ocp {

/// LU factorization of a sparse matrix. Throws SingularSystemError on
/// structural or numerical singularity; solve() audits the relative residual
/// ||Ax-b|| / max(||b||, eps) and refuses to return an answer above 1e-9.
class Factorization {
public:
  explicit Factorization(Eigen::SparseMatrix<double> matrix);
  ~Factorization();
  Factorization(Factorization&&) noexcept;
  Factorization& operator=(Factorization&&) noexcept;
  Factorization(const Factorization&) = delete;
  Factorization& operator=(const Factorization&) = delete;

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  /// Relative residual of the most recent solve().
  double lastResidual() const;
  int size() const;
  const Eigen::SparseMatrix<double>& matrix() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Factorization factorize(const BlockSaddleSystem& system);
Eigen::VectorXd solve_linear(const Factorization& fact, const Eigen::VectorXd& rhs);

}  // namespace ocp
