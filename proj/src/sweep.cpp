#include "ocp/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "ocp/pde.hpp"

namespace ocp {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void fill_errors(ConvergenceRow& row, const BenchmarkProblem& problem, const TriMesh& mesh,
                 const OptimalSolution& solution, const QuadratureRule& quad) {
  if (!problem.hasExact) {
    row.errU_L2 = row.errY_H1 = row.errP_L2 = row.errZ_H1 = row.errR_L2 = kNaN;
    return;
  }
  row.errU_L2 =
      l2_error_scalar(mesh, control_eval(solution, problem.data), problem.exactControl, quad);
  row.errY_H1 = h1_error_velocity(solution.state.velocity, problem.exactVelocityGradient, quad);
  row.errP_L2 = l2_error_pressure(solution.state.pressure, problem.exactPressure, quad);
  row.errZ_H1 = h1_error_velocity(solution.adjoint.velocity, problem.exactAdjointGradient, quad);
  row.errR_L2 = l2_error_pressure(solution.adjoint.pressure, problem.exactAdjointPressure, quad);
}

OptimalSolution solve_scheme(const TriMesh& mesh, const SpacePair& spaces,
                             const ControlProblem& data, Scheme scheme,
                             const SolverOptions& solver) {
  return scheme == Scheme::FullyDiscrete ? solve_fully_discrete(mesh, spaces, data, solver)
                                         : solve_semidiscrete(mesh, spaces, data, solver);
}

std::vector<ConvergenceRow> run_uniform(const BenchmarkProblem& problem,
                                        const SweepOptions& options) {
  std::vector<ConvergenceRow> rows;
  const QuadratureRule estQuad = make_quadrature(options.solver.dataQuadDegree);
  const QuadratureRule errQuad = make_quadrature(options.errorQuadDegree);
  TriMesh mesh = problem.initialMesh;
  for (int level = 0; level < options.levels; ++level) {
    const auto t0 = std::chrono::steady_clock::now();
    const SpacePair spaces = make_spaces(mesh, options.family);
    const long long ndof = count_ndof(spaces, options.scheme);
    const OptimalSolution solution =
        solve_scheme(mesh, spaces, problem.data, options.scheme, options.solver);

    const ControlEval u = control_eval(solution, problem.data);
    const IndicatorTable st = state_indicators(mesh, u, solution.state, problem.data.f, estQuad);
    const IndicatorTable adj = adjoint_indicators(mesh, u, solution.state, solution.adjoint,
                                                  problem.data.yOmega, estQuad);
    const IndicatorTable ct = control_indicators(mesh, solution, problem.data, estQuad);
    const EstimatorSummary estimate = total_estimator(st, adj, ct);
    const auto t1 = std::chrono::steady_clock::now();

    ConvergenceRow row;
    row.level = level;
    row.ndof = ndof;
    row.hMax = mesh.hMax();
    row.nCells = mesh.nCells();
    row.cost = solution.cost;
    row.estState = estimate.state;
    row.estAdjoint = estimate.adjoint;
    row.estControl = estimate.control;
    row.estTotal = estimate.total;
    row.optimIters = solution.iterations;
    row.wallTime = std::chrono::duration<double>(t1 - t0).count();
    fill_errors(row, problem, mesh, solution, errQuad);
    rows.push_back(row);

    if (level + 1 == options.levels || ndof > options.maxNdof) break;
    mesh = uniform_refine(mesh).mesh;
  }
  return rows;
}

std::vector<ConvergenceRow> run_adaptive(const BenchmarkProblem& problem,
                                         const SweepOptions& options) {
  AdaptiveOptions aopts;
  aopts.scheme = options.scheme;
  aopts.family = options.family;
  aopts.maxLevels = options.levels;
  // Ndof is 4..6 per cell for both space pairs, so a cell cap of maxNdof/4
  // keeps the loop from overshooting the dof budget by more than one level.
  aopts.maxCells = static_cast<int>(std::max<long long>(1, options.maxNdof / 4));
  aopts.theta = options.theta;
  aopts.solver = options.solver;

  const std::vector<AdaptiveRecord> records = adaptive_loop(problem.initialMesh, problem.data, aopts);
  const QuadratureRule errQuad = make_quadrature(options.errorQuadDegree);

  std::vector<ConvergenceRow> rows;
  rows.reserve(records.size());
  for (std::size_t level = 0; level < records.size(); ++level) {
    const AdaptiveRecord& rec = records[level];
    ConvergenceRow row;
    row.level = static_cast<int>(level);
    row.ndof = count_ndof(*rec.spaces, options.scheme);
    row.hMax = rec.mesh->hMax();
    row.nCells = rec.mesh->nCells();
    row.cost = rec.solution.cost;
    row.estState = rec.estimate.state;
    row.estAdjoint = rec.estimate.adjoint;
    row.estControl = rec.estimate.control;
    row.estTotal = rec.estimate.total;
    row.optimIters = rec.solution.iterations;
    row.wallTime = rec.wallTime;
    fill_errors(row, problem, *rec.mesh, rec.solution, errQuad);
    rows.push_back(row);
    if (row.ndof > options.maxNdof) break;
  }
  return rows;
}

}  // namespace

long long count_ndof(const SpacePair& spaces, Scheme scheme) {
  long long ndof = 2LL * spaces.nVelInterior + 2LL * spaces.nPressDofs;
  if (scheme == Scheme::FullyDiscrete) ndof += spaces.mesh->nCells();
  return ndof;
}

std::vector<ConvergenceRow> run_sweep(const BenchmarkProblem& problem,
                                      const SweepOptions& options) {
  if (options.levels < 1) throw std::invalid_argument("run_sweep: levels must be positive");
  return options.mode == RefinementMode::Uniform ? run_uniform(problem, options)
                                                 : run_adaptive(problem, options);
}

std::vector<double> eoc_steps(const std::vector<double>& errors, const std::vector<double>& h) {
  if (errors.size() != h.size())
    throw std::invalid_argument("eoc_steps: mismatched sequence lengths");
  std::vector<double> orders;
  for (std::size_t l = 1; l < errors.size(); ++l)
    orders.push_back(std::log(errors[l] / errors[l - 1]) / std::log(h[l] / h[l - 1]));
  return orders;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("log_log_slope: mismatched sequence lengths");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return kNaN;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string to_string(Scheme scheme) {
  return scheme == Scheme::FullyDiscrete ? "fully" : "semi";
}

std::string to_string(Family family) {
  return family == Family::MiniElement ? "mini" : "th";
}

std::string to_string(RefinementMode mode) {
  return mode == RefinementMode::Uniform ? "uniform" : "adaptive";
}

void write_csv(const std::string& path, const std::vector<ConvergenceRow>& rows,
               const std::vector<std::string>& metadata) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  for (const auto& line : metadata) out << "# " << line << "\n";
  out << "level,Ndof,hMax,nCells,J,errU_L2,errY_H1,errP_L2,errZ_H1,errR_L2,"
         "estSt,estAdj,estCt,estTotal,optimIters,wallTime\n";
  char buf[64];
  const auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    out << r.level << ',' << r.ndof << ',' << num(r.hMax) << ',' << r.nCells << ',' << num(r.cost)
        << ',' << num(r.errU_L2) << ',' << num(r.errY_H1) << ',' << num(r.errP_L2) << ','
        << num(r.errZ_H1) << ',' << num(r.errR_L2) << ',' << num(r.estState) << ','
        << num(r.estAdjoint) << ',' << num(r.estControl) << ',' << num(r.estTotal) << ','
        << r.optimIters << ',' << num(r.wallTime) << "\n";
  }
  if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

}  // namespace ocp
