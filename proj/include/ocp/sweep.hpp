// Convergence studies: solve the optimal control problem over a hierarchy of
// uniformly or adaptively refined meshes, record one row per level (errors
// against closed-form solutions when available, estimator parts, cost,
// iteration counts), and fit experimental convergence orders. Rows serialize
// to CSV with full precision so repeated runs are byte-comparable except for
// the timing column.
#pragma once

#include <string>
#include <vector>

#include "ocp/estimate.hpp"
#include "ocp/problems.hpp"

namespace ocp {

/// One level of a convergence study. Error columns are NaN when the
/// benchmark has no closed-form solution.
struct ConvergenceRow {
  int level = 0;
  long long ndof = 0;
  double hMax = 0.0;
  int nCells = 0;
  double cost = 0.0;

  double errU_L2 = 0.0;  ///< control, L2
  double errY_H1 = 0.0;  ///< state velocity, H1 seminorm
  double errP_L2 = 0.0;  ///< state pressure, L2
  double errZ_H1 = 0.0;  ///< adjoint velocity, H1 seminorm
  double errR_L2 = 0.0;  ///< adjoint pressure, L2

  double estState = 0.0;
  double estAdjoint = 0.0;
  double estControl = 0.0;
  double estTotal = 0.0;

  int optimIters = 0;
  double wallTime = 0.0;  ///< seconds for solve + estimate on this level
};

enum class RefinementMode { Uniform, Adaptive };

struct SweepOptions {
  Scheme scheme = Scheme::FullyDiscrete;
  Family family = Family::MiniElement;
  RefinementMode mode = RefinementMode::Uniform;
  int levels = 4;
  double theta = 0.5;           ///< maximum-strategy parameter (adaptive mode)
  long long maxNdof = 300000;   ///< refinement stops once exceeded
  int errorQuadDegree = 12;     ///< quadrature for errors against exact fields
  SolverOptions solver;
};

/// Total degrees of freedom: both velocity components, pressure counted once
/// per component as well, plus one control value per cell for the fully
/// discrete scheme (the variational control adds no unknowns).
long long count_ndof(const SpacePair& spaces, Scheme scheme);

std::vector<ConvergenceRow> run_sweep(const BenchmarkProblem& problem, const SweepOptions& options);

/// Stepwise orders log(e_l / e_{l-1}) / log(h_l / h_{l-1}); one entry per
/// consecutive pair.
std::vector<double> eoc_steps(const std::vector<double>& errors, const std::vector<double>& h);

/// Least-squares slope of log(y) against log(x); pairs with non-finite or
/// non-positive entries are skipped, NaN if fewer than two remain.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

std::string to_string(Scheme scheme);
std::string to_string(Family family);
std::string to_string(RefinementMode mode);

/// Writes `# key: value` metadata lines, a header row, then one data row per
/// level with 17 significant digits.
void write_csv(const std::string& path, const std::vector<ConvergenceRow>& rows,
               const std::vector<std::string>& metadata);

}  // namespace ocp
