// Residual-based a posteriori error estimation for the optimality system:
// per-cell indicators for the state and adjoint equations (element residual,
// flux jumps, divergence defect) and for the control (projection mismatch),
// data oscillation, maximum-strategy marking, and the adaptive loop.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ocp/optimize.hpp"

namespace ocp {

enum class IndicatorKind { State, Adjoint, Control };

/// Squared per-cell indicator parts. For the state kind on cell K:
///   etaR2   = h_K^2 ||f + Lap y - u y - grad p||^2_K
///   etaJ2   = h_K ||[[(grad y - p I) n]]||^2 over interior edges of K
///   etaDiv2 = ||div y||^2_K
/// The adjoint kind uses the flux (grad z + r I) and the residual
/// (y - yOmega) + Lap z - u z + grad r. The control kind stores
/// ||clamp(y.z/alpha) - u||^2_K in etaR2 (zero for the variational scheme,
/// whose control satisfies the projection identity exactly).
struct IndicatorTable {
  IndicatorKind kind = IndicatorKind::State;
  Eigen::VectorXd etaR2;
  Eigen::VectorXd etaJ2;
  Eigen::VectorXd etaDiv2;

  Eigen::VectorXd total2() const { return etaR2 + etaJ2 + etaDiv2; }
  double total() const { return std::sqrt(total2().sum()); }
};

IndicatorTable state_indicators(const TriMesh& mesh, const ControlEval& control,
                                const StokesSolution& state, const VectorField& f,
                                const QuadratureRule& quad);

IndicatorTable adjoint_indicators(const TriMesh& mesh, const ControlEval& control,
                                  const StokesSolution& state, const StokesSolution& adjoint,
                                  const VectorField& yOmega, const QuadratureRule& quad);

IndicatorTable control_indicators(const TriMesh& mesh, const OptimalSolution& solution,
                                  const ControlProblem& problem, const QuadratureRule& quad);

struct EstimatorSummary {
  double state = 0.0;
  double adjoint = 0.0;
  double control = 0.0;
  double total = 0.0;  ///< sqrt(state^2 + adjoint^2 + control^2)
};

EstimatorSummary total_estimator(const IndicatorTable& state, const IndicatorTable& adjoint,
                                 const IndicatorTable& control);

/// Per-cell squared data oscillation h_K^2 ||v - mean_K v||^2_K.
Eigen::VectorXd oscillation2(const TriMesh& mesh, const VectorField& v,
                             const QuadratureRule& quad);

/// Maximum strategy on squared indicators: marks every cell K with
/// eta_K >= theta * max eta (ties included); empty if all indicators vanish.
std::vector<int> mark_max_strategy(const Eigen::VectorXd& indicators2, double theta);

struct AdaptiveOptions {
  Scheme scheme = Scheme::FullyDiscrete;
  Family family = Family::MiniElement;
  int maxLevels = 10;
  int maxCells = 200000;  ///< stop refining once reached
  double theta = 0.5;
  SolverOptions solver;
};

/// One adaptive level. Mesh and spaces are heap-anchored so the field
/// pointers inside `solution` stay valid while records move around.
struct AdaptiveRecord {
  std::shared_ptr<const TriMesh> mesh;
  std::shared_ptr<const SpacePair> spaces;
  OptimalSolution solution;
  IndicatorTable state;
  IndicatorTable adjoint;
  IndicatorTable control;
  EstimatorSummary estimate;
  std::vector<int> marked;
  double wallTime = 0.0;  ///< seconds for solve + estimate on this level
};

std::vector<AdaptiveRecord> adaptive_loop(const TriMesh& initial, const ControlProblem& problem,
                                          const AdaptiveOptions& options);

/// CSV dump `cell,etaR2,etaJ2,etaDiv2` with 17 significant digits.
void dump_indicators(const IndicatorTable& table, const std::string& path);

}  // namespace ocp
