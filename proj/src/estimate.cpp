#include "ocp/estimate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ocp {

namespace {

double clamp_value(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

/// Shared element/jump loop for the state and adjoint tables. `fluxSign` is
/// the sign of the pressure inside the flux (grad v + fluxSign * p I), and
/// `strongResidual` evaluates the full strong residual at a quadrature point.
template <class Residual>
IndicatorTable residual_table(const TriMesh& mesh, const FieldFunction& velocity,
                              const FieldFunction& pressure, double fluxSign,
                              const QuadratureRule& quad, Residual&& strongResidual) {
  IndicatorTable table;
  table.etaR2 = Eigen::VectorXd::Zero(mesh.nCells());
  table.etaJ2 = Eigen::VectorXd::Zero(mesh.nCells());
  table.etaDiv2 = Eigen::VectorXd::Zero(mesh.nCells());

  for (int k = 0; k < mesh.nCells(); ++k) {
    const double area = mesh.area(k);
    double r2 = 0.0, div2 = 0.0;
    for (int q = 0; q < quad.size(); ++q) {
      const auto& bary = quad.points[q];
      const double w = 2.0 * area * quad.weights[q];
      r2 += w * strongResidual(k, bary, mesh.point(k, bary)).squaredNorm();
      const double div = evaluate_velocity_divergence(velocity, k, bary);
      div2 += w * div * div;
    }
    const double h = mesh.diameter(k);
    table.etaR2[k] = h * h * r2;
    table.etaDiv2[k] = div2;
  }

  const EdgeRule er = edge_rule();
  for (int e = 0; e < mesh.nEdges(); ++e) {
    if (mesh.boundaryFlags[e]) continue;
    const auto& inc = mesh.edgeIncidence[e];
    const int k1 = inc[0].cell, k2 = inc[1].cell;
    const Eigen::Vector2d a = mesh.vertices[mesh.edges[e][0]];
    const Eigen::Vector2d b = mesh.vertices[mesh.edges[e][1]];
    const double length = (b - a).norm();
    const Eigen::Vector2d normal = Eigen::Vector2d(b.y() - a.y(), a.x() - b.x()) / length;

    double acc = 0.0;
    for (int q = 0; q < 3; ++q) {
      const Eigen::Vector2d x = a + er.points[q] * (b - a);
      const auto bary1 = mesh.barycentric(k1, x);
      const auto bary2 = mesh.barycentric(k2, x);
      const Eigen::Matrix2d dG = evaluate_velocity_gradient(velocity, k1, bary1) -
                                 evaluate_velocity_gradient(velocity, k2, bary2);
      const double dP =
          evaluate_pressure(pressure, k1, bary1) - evaluate_pressure(pressure, k2, bary2);
      const Eigen::Vector2d jump = dG * normal + fluxSign * dP * normal;
      acc += er.weights[q] * jump.squaredNorm();
    }
    const double integral = length * acc;
    table.etaJ2[k1] += mesh.diameter(k1) * integral;
    table.etaJ2[k2] += mesh.diameter(k2) * integral;
  }
  return table;
}

}  // namespace

IndicatorTable state_indicators(const TriMesh& mesh, const ControlEval& control,
                                const StokesSolution& state, const VectorField& f,
                                const QuadratureRule& quad) {
  IndicatorTable table = residual_table(
      mesh, state.velocity, state.pressure, -1.0, quad,
      [&](int k, const std::array<double, 3>& bary, const Eigen::Vector2d& xy) {
        return Eigen::Vector2d(f(xy) + evaluate_velocity_laplacian(state.velocity, k, bary) -
                               control(k, bary, xy) * evaluate_velocity(state.velocity, k, bary) -
                               evaluate_pressure_gradient(state.pressure, k));
      });
  table.kind = IndicatorKind::State;
  return table;
}

IndicatorTable adjoint_indicators(const TriMesh& mesh, const ControlEval& control,
                                  const StokesSolution& state, const StokesSolution& adjoint,
                                  const VectorField& yOmega, const QuadratureRule& quad) {
  IndicatorTable table = residual_table(
      mesh, adjoint.velocity, adjoint.pressure, +1.0, quad,
      [&](int k, const std::array<double, 3>& bary, const Eigen::Vector2d& xy) {
        return Eigen::Vector2d(
            evaluate_velocity(state.velocity, k, bary) - yOmega(xy) +
            evaluate_velocity_laplacian(adjoint.velocity, k, bary) -
            control(k, bary, xy) * evaluate_velocity(adjoint.velocity, k, bary) +
            evaluate_pressure_gradient(adjoint.pressure, k));
      });
  table.kind = IndicatorKind::Adjoint;
  return table;
}

IndicatorTable control_indicators(const TriMesh& mesh, const OptimalSolution& solution,
                                  const ControlProblem& problem, const QuadratureRule& quad) {
  IndicatorTable table;
  table.kind = IndicatorKind::Control;
  table.etaR2 = Eigen::VectorXd::Zero(mesh.nCells());
  table.etaJ2 = Eigen::VectorXd::Zero(mesh.nCells());
  table.etaDiv2 = Eigen::VectorXd::Zero(mesh.nCells());
  if (solution.scheme == Scheme::Semidiscrete) return table;  // identically zero

  for (int k = 0; k < mesh.nCells(); ++k) {
    const double uk = solution.control.coeffs[k];
    double acc = 0.0;
    for (int q = 0; q < quad.size(); ++q) {
      const auto& bary = quad.points[q];
      const double raw = evaluate_velocity(solution.state.velocity, k, bary)
                             .dot(evaluate_velocity(solution.adjoint.velocity, k, bary)) /
                         problem.alpha;
      const double d = clamp_value(raw, problem.lower, problem.upper) - uk;
      acc += 2.0 * mesh.area(k) * quad.weights[q] * d * d;
    }
    table.etaR2[k] = acc;
  }
  return table;
}

EstimatorSummary total_estimator(const IndicatorTable& state, const IndicatorTable& adjoint,
                                 const IndicatorTable& control) {
  EstimatorSummary s;
  s.state = state.total();
  s.adjoint = adjoint.total();
  s.control = control.total();
  s.total = std::sqrt(s.state * s.state + s.adjoint * s.adjoint + s.control * s.control);
  return s;
}

Eigen::VectorXd oscillation2(const TriMesh& mesh, const VectorField& v,
                             const QuadratureRule& quad) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.nCells());
  for (int k = 0; k < mesh.nCells(); ++k) {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (int q = 0; q < quad.size(); ++q)
      mean += 2.0 * quad.weights[q] * v(mesh.point(k, quad.points[q]));
    double acc = 0.0;
    for (int q = 0; q < quad.size(); ++q)
      acc += 2.0 * mesh.area(k) * quad.weights[q] *
             (v(mesh.point(k, quad.points[q])) - mean).squaredNorm();
    const double h = mesh.diameter(k);
    out[k] = h * h * acc;
  }
  return out;
}

std::vector<int> mark_max_strategy(const Eigen::VectorXd& indicators2, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw std::invalid_argument("marking parameter theta must lie in [0, 1]");
  const double max2 = indicators2.maxCoeff();
  std::vector<int> marked;
  if (max2 <= 0.0) return marked;
  const double threshold = theta * theta * max2;
  for (int k = 0; k < indicators2.size(); ++k)
    if (indicators2[k] >= threshold) marked.push_back(k);
  return marked;
}

std::vector<AdaptiveRecord> adaptive_loop(const TriMesh& initial, const ControlProblem& problem,
                                          const AdaptiveOptions& options) {
  std::vector<AdaptiveRecord> records;
  auto mesh = std::make_shared<TriMesh>(initial);
  const QuadratureRule dataQuad = make_quadrature(options.solver.dataQuadDegree);

  for (int level = 0; level < options.maxLevels; ++level) {
    const auto t0 = std::chrono::steady_clock::now();
    AdaptiveRecord rec;
    rec.mesh = mesh;
    rec.spaces = std::make_shared<SpacePair>(make_spaces(*mesh, options.family));

    rec.solution = options.scheme == Scheme::FullyDiscrete
                       ? solve_fully_discrete(*mesh, *rec.spaces, problem, options.solver)
                       : solve_semidiscrete(*mesh, *rec.spaces, problem, options.solver);

    const ControlEval u = control_eval(rec.solution, problem);
    rec.state = state_indicators(*mesh, u, rec.solution.state, problem.f, dataQuad);
    rec.adjoint = adjoint_indicators(*mesh, u, rec.solution.state, rec.solution.adjoint,
                                     problem.yOmega, dataQuad);
    rec.control = control_indicators(*mesh, rec.solution, problem, dataQuad);
    rec.estimate = total_estimator(rec.state, rec.adjoint, rec.control);
    rec.marked = mark_max_strategy(
        rec.state.total2() + rec.adjoint.total2() + rec.control.total2(), options.theta);
    rec.wallTime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const bool stop = level + 1 == options.maxLevels || mesh->nCells() >= options.maxCells ||
                      rec.marked.empty();
    const std::vector<int> marked = rec.marked;
    records.push_back(std::move(rec));
    if (stop) break;
    mesh = std::make_shared<TriMesh>(bisect(*mesh, marked).mesh);
  }
  return records;
}

void dump_indicators(const IndicatorTable& table, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("cannot open " + path + " for writing");
  std::fprintf(fp, "cell,etaR2,etaJ2,etaDiv2\n");
  for (int k = 0; k < table.etaR2.size(); ++k)
    std::fprintf(fp, "%d,%.17g,%.17g,%.17g\n", k, table.etaR2[k], table.etaJ2[k],
                 table.etaDiv2[k]);
  std::fclose(fp);
}

}  // namespace ocp
