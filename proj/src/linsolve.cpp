#include "ocp/linsolve.hpp"

#include <Eigen/SparseLU>
#include <cctype>
#include <stdexcept>
#include <string>

namespace ocp {

namespace {

/// Extracts the trailing integer of Eigen's "ZERO COLUMN AT <k>" message
/// (1-based there) as a 0-based column index, or -1 if absent.
long parse_pivot_index(const std::string& message) {
  int end = static_cast<int>(message.size());
  while (end > 0 && std::isspace(static_cast<unsigned char>(message[end - 1]))) --end;
  int begin = end;
  while (begin > 0 && std::isdigit(static_cast<unsigned char>(message[begin - 1]))) --begin;
  if (begin == end) return -1;
  return std::stol(message.substr(begin, end - begin)) - 1;
}

}  // namespace

struct Factorization::Impl {
  Eigen::SparseMatrix<double> matrix;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  mutable double lastResidual = 0.0;
};

Factorization::Factorization(Eigen::SparseMatrix<double> matrix) : impl_(new Impl) {
  impl_->matrix = std::move(matrix);
  impl_->matrix.makeCompressed();
  impl_->lu.analyzePattern(impl_->matrix);
  impl_->lu.factorize(impl_->matrix);
  if (impl_->lu.info() != Eigen::Success) {
    const std::string message = impl_->lu.lastErrorMessage();
    throw SingularSystemError("sparse LU factorization failed: " + message,
                              parse_pivot_index(message));
  }
}

Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

Eigen::VectorXd Factorization::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != impl_->matrix.rows())
    throw std::invalid_argument("right-hand side size does not match the matrix");
  Eigen::VectorXd x = impl_->lu.solve(rhs);
  const double scale = std::max(rhs.norm(), 1e-300);
  double residual = (impl_->matrix * x - rhs).norm() / scale;
  if (residual > 1e-13) {
    // One step of iterative refinement keeps the audit comfortably green.
    x += impl_->lu.solve(Eigen::VectorXd(rhs - impl_->matrix * x));
    residual = (impl_->matrix * x - rhs).norm() / scale;
  }
  impl_->lastResidual = residual;
  if (residual > 1e-9)
    throw std::runtime_error("linear solve residual audit failed: relative residual " +
                             std::to_string(residual));
  return x;
}

double Factorization::lastResidual() const { return impl_->lastResidual; }

int Factorization::size() const { return static_cast<int>(impl_->matrix.rows()); }

const Eigen::SparseMatrix<double>& Factorization::matrix() const { return impl_->matrix; }

Factorization factorize(const BlockSaddleSystem& system) {
  return Factorization(system.matrix);
}

Eigen::VectorXd solve_linear(const Factorization& fact, const Eigen::VectorXd& rhs) {
  return fact.solve(rhs);
}

}  // namespace ocp
