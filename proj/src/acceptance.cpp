// The ten acceptance criteria with their thresholds. Rate windows follow the
// orders the discretizations are built to deliver: O(h) for the fully
// discrete control and the state pair, O(h^2) = O(Ndof^-1) for the
// variational control and for the estimator decay under adaptivity on the
// L-shape. Stability factors, residual bounds, and the localization audit
// are fixed here so a regression anywhere in the pipeline flips a criterion.
#include "ocp/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <ostream>
#include <random>
#include <utility>

#include "ocp/estimate.hpp"
#include "ocp/problems.hpp"
#include "ocp/sweep.hpp"

namespace ocp {
namespace {

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return std::string(buf);
}

ControlEval p0_eval(const Eigen::VectorXd& cells) {
  return [cells](int k, const std::array<double, 3>&, const Eigen::Vector2d&) {
    return cells[k];
  };
}

ControlEval field_eval(ScalarField g) {
  return [g = std::move(g)](int, const std::array<double, 3>&, const Eigen::Vector2d& x) {
    return g(x);
  };
}

/// Smooth tracking configuration on the unit square used by the derivative
/// and optimality checks; small enough that every solve is instantaneous.
ControlProblem toy_problem(double lower, double upper) {
  ControlProblem p;
  p.f = [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(32.0 * x.y() * (1.0 - x.y()), 32.0 * x.x() * (1.0 - x.x()));
  };
  p.yOmega = [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(std::sin(M_PI * x.x()) * std::sin(M_PI * x.y()),
                           x.x() * (1.0 - x.x()) * x.y() * (1.0 - x.y()));
  };
  p.alpha = 1.0;
  p.lower = lower;
  p.upper = upper;
  return p;
}

using Verdict = std::pair<bool, std::string>;

CriterionResult run_criterion(int index, std::string name, double budgetSeconds,
                              const std::function<Verdict()>& body) {
  CriterionResult r;
  r.index = index;
  r.name = std::move(name);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    std::tie(r.pass, r.detail) = body();
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.pass && budgetSeconds > 0.0 && r.seconds > budgetSeconds) {
    r.pass = false;
    r.detail += fmt("; time budget %.0f s exceeded", budgetSeconds);
  }
  return r;
}

double total_error2(const ConvergenceRow& r) {
  return r.errY_H1 * r.errY_H1 + r.errP_L2 * r.errP_L2 + r.errZ_H1 * r.errZ_H1 +
         r.errR_L2 * r.errR_L2 + r.errU_L2 * r.errU_L2;
}

/// Spread max/min of the entries (requires positive values).
double spread(const std::vector<double>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi / *lo;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::string& cliPath) {
  std::vector<CriterionResult> results;

  const BenchmarkProblem layer = layer_problem();
  // The rate studies start one uniform refinement in: the first level of the
  // coarsest mesh cannot see the interior layer at all and would flatten a
  // 4-level regression fit.
  BenchmarkProblem layerFine = layer;
  layerFine.initialMesh = uniform_refine(layer.initialMesh).mesh;

  std::vector<ConvergenceRow> fullyRows;  // shared by criteria 2, 4, 5, 6

  // 1. State solves at the exact control converge at first order in h.
  results.push_back(run_criterion(1, "manufactured state consistency", 120.0, [&]() -> Verdict {
    const QuadratureRule mq = make_quadrature(6), dq = make_quadrature(8);
    const QuadratureRule eq = make_quadrature(12);
    const ControlEval exactU = field_eval(layer.exactControl);
    TriMesh mesh = layer.initialMesh;
    std::vector<double> hs, errs;
    for (int level = 0; level < 4; ++level) {
      const SpacePair spaces = make_spaces(mesh, Family::MiniElement);
      const StokesSolution y = solve_state(mesh, spaces, exactU, layer.data.f, mq, dq);
      errs.push_back(h1_error_velocity(y.velocity, layer.exactVelocityGradient, eq) +
                     l2_error_pressure(y.pressure, layer.exactPressure, eq));
      hs.push_back(mesh.hMax());
      if (level + 1 < 4) mesh = uniform_refine(mesh).mesh;
    }
    const double slope = log_log_slope(hs, errs);
    return {slope >= 0.8 && slope <= 1.2,
            fmt("H1 velocity + L2 pressure EOC %.3f, required [0.8, 1.2]", slope)};
  }));

  // 2. Fully discrete control error decays like Ndof^-1/2.
  results.push_back(run_criterion(2, "fully discrete control rate", 300.0, [&]() -> Verdict {
    SweepOptions o;
    o.scheme = Scheme::FullyDiscrete;
    o.family = Family::MiniElement;
    o.mode = RefinementMode::Uniform;
    o.levels = 4;
    fullyRows = run_sweep(layerFine, o);
    std::vector<double> nd, eu;
    for (const auto& row : fullyRows) {
      nd.push_back(static_cast<double>(row.ndof));
      eu.push_back(row.errU_L2);
    }
    const double slope = log_log_slope(nd, eu);
    return {slope >= -0.60 && slope <= -0.40,
            fmt("control error slope vs Ndof %.3f, required [-0.60, -0.40]", slope)};
  }));

  // 3. Variational control error decays like Ndof^-1.
  results.push_back(run_criterion(3, "semidiscrete control rate", 600.0, [&]() -> Verdict {
    SweepOptions o;
    o.scheme = Scheme::Semidiscrete;
    o.family = Family::TaylorHood;
    o.mode = RefinementMode::Uniform;
    o.levels = 4;
    const std::vector<ConvergenceRow> rows = run_sweep(layerFine, o);
    std::vector<double> nd, eu;
    for (const auto& row : rows) {
      nd.push_back(static_cast<double>(row.ndof));
      eu.push_back(row.errU_L2);
    }
    const double slope = log_log_slope(nd, eu);
    return {slope >= -1.15 && slope <= -0.80,
            fmt("control error slope vs Ndof %.3f, required [-1.15, -0.80]", slope)};
  }));

  // 4. Reliability surrogate: error^2 / estimator^2 stays within a factor 3.
  results.push_back(run_criterion(4, "estimator reliability stability", 0.0, [&]() -> Verdict {
    if (fullyRows.size() < 3) return {false, "criterion 2 sweep unavailable"};
    std::vector<double> c;
    for (std::size_t i = fullyRows.size() - 3; i < fullyRows.size(); ++i)
      c.push_back(total_error2(fullyRows[i]) / (fullyRows[i].estTotal * fullyRows[i].estTotal));
    const double factor = spread(c);
    return {factor <= 3.0,
            fmt("C_rel varies by %.2f over the last 3 levels, required <= 3", factor)};
  }));

  // 5. Efficiency surrogate: estimator / (error + oscillation) stays within
  //    a factor 3. The meshes of the criterion-2 sweep are rebuilt to
  //    evaluate the data oscillation.
  results.push_back(run_criterion(5, "estimator efficiency stability", 0.0, [&]() -> Verdict {
    if (fullyRows.size() < 3) return {false, "criterion 2 sweep unavailable"};
    const QuadratureRule dq = make_quadrature(8);
    std::vector<double> c;
    TriMesh mesh = layerFine.initialMesh;
    for (std::size_t i = 0; i < fullyRows.size(); ++i) {
      if (mesh.nCells() != fullyRows[i].nCells)
        return {false, "mesh replay out of step with the recorded sweep"};
      if (i >= fullyRows.size() - 3) {
        const double osc = std::sqrt(oscillation2(mesh, layer.data.f, dq).sum() +
                                     oscillation2(mesh, layer.data.yOmega, dq).sum());
        c.push_back(fullyRows[i].estTotal / (std::sqrt(total_error2(fullyRows[i])) + osc));
      }
      if (i + 1 < fullyRows.size()) mesh = uniform_refine(mesh).mesh;
    }
    const double factor = spread(c);
    return {factor <= 3.0,
            fmt("C_eff varies by %.2f over the last 3 levels, required <= 3", factor)};
  }));

  // 6. At comparable Ndof the adaptive run resolves the adjoint layer at
  //    least as well as uniform refinement.
  results.push_back(run_criterion(6, "adaptive beats uniform on the layer", 600.0, [&]() -> Verdict {
    if (fullyRows.empty()) return {false, "criterion 2 sweep unavailable"};
    AdaptiveOptions ao;
    ao.scheme = Scheme::FullyDiscrete;
    ao.family = Family::MiniElement;
    ao.maxLevels = 30;
    ao.maxCells = 15000;  // about 60k unknowns at 4-6 per cell
    ao.theta = 0.5;
    const std::vector<AdaptiveRecord> records = adaptive_loop(layer.initialMesh, layer.data, ao);

    const QuadratureRule eq = make_quadrature(12);
    std::vector<long long> ndofs;
    std::vector<double> errZ;
    for (const AdaptiveRecord& rec : records) {
      ndofs.push_back(count_ndof(*rec.spaces, Scheme::FullyDiscrete));
      errZ.push_back(
          h1_error_velocity(rec.solution.adjoint.velocity, layer.exactAdjointGradient, eq));
    }

    int matches = 0;
    bool adaptiveBetter = true;
    for (const ConvergenceRow& urow : fullyRows) {
      std::size_t best = 0;
      long long bestGap = LLONG_MAX;
      for (std::size_t i = 0; i < ndofs.size(); ++i) {
        const long long gap = std::llabs(ndofs[i] - urow.ndof);
        if (gap < bestGap) {
          bestGap = gap;
          best = i;
        }
      }
      if (bestGap <= static_cast<long long>(0.2 * static_cast<double>(urow.ndof))) {
        ++matches;
        adaptiveBetter = adaptiveBetter && errZ[best] <= urow.errZ_H1;
      }
    }

    // Refinement must also concentrate in the layer strip |x - 0.5| <= 0.1.
    const TriMesh& last = *records.back().mesh;
    int inStrip = 0;
    for (int k = 0; k < last.nCells(); ++k)
      inStrip += std::abs(last.centroid(k).x() - 0.5) <= 0.1 ? 1 : 0;
    const double stripShare = static_cast<double>(inStrip) / last.nCells();

    const bool ok = matches >= 2 && adaptiveBetter && stripShare >= 0.40;
    return {ok, fmt("%d Ndof matches within 20%%, adaptive adjoint error <= uniform at all: %s; "
                    "%.0f%% of final cells in the layer strip, required >= 40%%",
                    matches, adaptiveBetter ? "yes" : "no", 100.0 * stripShare)};
  }));

  // 7. On the L-shape the estimator decays like Ndof^-1 and refinement
  //    localizes at the reentrant corner.
  results.push_back(run_criterion(7, "adaptive localization on the L-shape", 600.0, [&]() -> Verdict {
    const BenchmarkProblem lshape = lshape_problem();
    AdaptiveOptions ao;
    ao.scheme = Scheme::FullyDiscrete;
    ao.family = Family::TaylorHood;
    ao.maxLevels = 40;
    ao.maxCells = 75000;  // 300k-unknown cap
    ao.theta = 0.8;
    const std::vector<AdaptiveRecord> records = adaptive_loop(lshape.initialMesh, lshape.data, ao);

    std::vector<double> nd, est;
    for (const AdaptiveRecord& rec : records) {
      nd.push_back(static_cast<double>(count_ndof(*rec.spaces, Scheme::FullyDiscrete)));
      est.push_back(rec.estimate.total);
    }
    const double slope = log_log_slope(nd, est);

    // Among the 10% smallest cells (by diameter), the quartile closest to
    // the corner must sit within distance 0.1 of it.
    const TriMesh& last = *records.back().mesh;
    std::vector<int> order(last.nCells());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return last.diameter(a) < last.diameter(b); });
    const int nSmall = std::max(1, last.nCells() / 10);
    std::vector<double> dist(nSmall);
    for (int i = 0; i < nSmall; ++i) dist[i] = last.centroid(order[i]).norm();
    std::sort(dist.begin(), dist.end());
    const double quartile = dist[std::max(1, nSmall / 4) - 1];

    const bool ok = slope >= -1.3 && slope <= -0.7 && quartile <= 0.1;
    return {ok, fmt("estimator slope vs Ndof %.3f, required [-1.3, -0.7]; closest quartile of "
                    "the smallest cells within %.4f of the corner, required <= 0.1",
                    slope, quartile)};
  }));

  // 8. Reduced derivatives agree with difference quotients of the objective
  //    and of the control-to-state map.
  results.push_back(run_criterion(8, "derivative oracles", 0.0, [&]() -> Verdict {
    const TriMesh mesh = build_unit_square(3);
    const SpacePair spaces = make_spaces(mesh, Family::MiniElement);
    const QuadratureRule mq = make_quadrature(6), dq = make_quadrature(8);
    const ControlProblem p = toy_problem(0.01, 50.0);  // wide box: FD paths stay interior

    std::mt19937 rng(137);
    std::uniform_real_distribution<double> uDist(0.5, 1.5), vDist(-1.0, 1.0);
    Eigen::VectorXd u(mesh.nCells());
    for (int k = 0; k < mesh.nCells(); ++k) u[k] = uDist(rng);

    const StokesOperator op(mesh, spaces, p0_eval(u), mq);
    const StokesSolution y = op.solve_state(p.f, dq);
    const StokesSolution z = op.solve_adjoint(y.velocity, p.yOmega, dq);
    const Eigen::VectorXd means = cell_mean_velocity_dot(y.velocity, z.velocity, dq);
    const auto directional = [&](const Eigen::VectorXd& v) {
      double g = 0.0;
      for (int k = 0; k < mesh.nCells(); ++k)
        g += v[k] * mesh.area(k) * (p.alpha * u[k] - means[k]);
      return g;
    };
    const auto costAt = [&](const Eigen::VectorXd& w) {
      return cost(mesh, spaces, p, p0_eval(w), mq, dq);
    };

    double gradRel = 0.0;
    Eigen::VectorXd v(mesh.nCells());
    for (int trial = 0; trial < 5; ++trial) {
      for (int k = 0; k < mesh.nCells(); ++k) v[k] = vDist(rng);
      const double t = 1e-4;
      const double fd = (costAt(u + t * v) - costAt(u - t * v)) / (2.0 * t);
      gradRel = std::max(gradRel, std::abs(directional(v) - fd) / std::max(1.0, std::abs(fd)));
    }

    for (int k = 0; k < mesh.nCells(); ++k) v[k] = vDist(rng);
    const double form =
        hessian_quadratic_form(op, y.velocity, z.velocity, p0_eval(v), p.alpha, dq);
    const double t2 = 1e-3;
    const double second =
        (costAt(u + t2 * v) - 2.0 * costAt(u) + costAt(u - t2 * v)) / (t2 * t2);
    const double hessRel = std::abs(form - second) / std::max(1.0, std::abs(second));

    // Taylor remainder of the control-to-state map against its linearization.
    const StokesSolution phi = op.solve_linearized(p0_eval(v), y.velocity, dq);
    std::vector<double> ts = {0.1, 0.05, 0.025, 0.0125}, remainders;
    for (const double t : ts) {
      const StokesSolution yt = solve_state(mesh, spaces, p0_eval(u + t * v), p.f, mq, dq);
      remainders.push_back(
          (yt.velocity.coeffs - y.velocity.coeffs - t * phi.velocity.coeffs).norm());
    }
    const double order = log_log_slope(ts, remainders);

    const bool ok = gradRel <= 1e-5 && hessRel <= 1e-3 && order >= 1.8 && order <= 2.2;
    return {ok, fmt("gradient vs FD rel %.1e (<= 1e-5); curvature vs FD rel %.1e (<= 1e-3); "
                    "state Taylor order %.2f ([1.8, 2.2])",
                    gradRel, hessRel, order)};
  }));

  // 9. Structural invariants, all of which must hold exactly or to tight
  //    absolute tolerances.
  results.push_back(run_criterion(9, "structural invariants", 0.0, [&]() -> Verdict {
    std::vector<std::string> failures;

    // Quadrature exactness against the closed-form monomial integrals.
    for (int deg = 2; deg <= 12; ++deg) {
      const QuadratureRule rule = make_quadrature(deg);
      for (int a = 0; a <= deg; ++a)
        for (int b = 0; a + b <= deg; ++b) {
          const int cExp = deg - a - b;
          double q = 0.0;
          for (int i = 0; i < rule.size(); ++i)
            q += rule.weights[i] * std::pow(rule.points[i][0], a) *
                 std::pow(rule.points[i][1], b) * std::pow(rule.points[i][2], cExp);
          if (std::abs(q - barycentric_monomial_integral(a, b, cExp)) > 1e-14) {
            failures.push_back(fmt("quadrature degree %d misses monomial (%d,%d,%d)", deg, a, b,
                                   cExp));
            break;
          }
        }
    }

    // Idempotence and range of the admissible-set projection.
    {
      std::mt19937 rng(41);
      std::uniform_real_distribution<double> dist(-3.0, 3.0);
      Eigen::VectorXd vals(1000);
      for (int i = 0; i < vals.size(); ++i) vals[i] = dist(rng);
      const Eigen::VectorXd once = clamp_admissible(vals, 0.1, 0.2);
      if ((clamp_admissible(once, 0.1, 0.2) - once).norm() != 0.0)
        failures.push_back("projection is not idempotent");
      if (once.minCoeff() < 0.1 || once.maxCoeff() > 0.2)
        failures.push_back("projection leaves the admissible box");
    }

    // Conformity after 20 mixed refinement rounds (random marks, with every
    // seventh round refining everything).
    {
      TriMesh mesh = build_unit_square(2);
      std::mt19937 rng(11);
      std::bernoulli_distribution markDist(0.15);
      for (int round = 0; round < 20; ++round) {
        std::vector<int> marked;
        if (round % 7 == 3) {
          marked.resize(mesh.nCells());
          std::iota(marked.begin(), marked.end(), 0);
        } else {
          for (int k = 0; k < mesh.nCells(); ++k)
            if (markDist(rng)) marked.push_back(k);
          if (marked.empty()) marked.push_back(round % mesh.nCells());
        }
        mesh = bisect(mesh, marked).mesh;
      }
      double total = 0.0;
      bool oriented = true;
      for (int k = 0; k < mesh.nCells(); ++k) {
        const double a = mesh.area(k);
        oriented = oriented && a > 0.0;
        total += a;
      }
      if (!oriented) failures.push_back("refinement produced a degenerate cell");
      if (std::abs(total - 1.0) > 1e-12) failures.push_back("refinement lost area");
      for (int e = 0; e < mesh.nEdges(); ++e)
        if ((mesh.edgeIncidence[e][1].cell < 0) != (mesh.boundaryFlags[e] != 0)) {
          failures.push_back("edge incidence disagrees with boundary flags");
          break;
        }
      // No vertex may sit in the interior of an edge (hanging node).
      bool hanging = false;
      for (int e = 0; e < mesh.nEdges() && !hanging; ++e) {
        const Eigen::Vector2d a = mesh.vertices[mesh.edges[e][0]];
        const Eigen::Vector2d ab = mesh.vertices[mesh.edges[e][1]] - a;
        const double len2 = ab.squaredNorm();
        for (int vtx = 0; vtx < mesh.nVertices(); ++vtx) {
          if (vtx == mesh.edges[e][0] || vtx == mesh.edges[e][1]) continue;
          const Eigen::Vector2d d = mesh.vertices[vtx] - a;
          const double t = d.dot(ab) / len2;
          if (t <= 1e-9 || t >= 1.0 - 1e-9) continue;
          if ((d - t * ab).squaredNorm() < 1e-24 * len2) {
            hanging = true;
            break;
          }
        }
      }
      if (hanging) failures.push_back(fmt("hanging vertex after mixed refinement (%d cells)",
                                          mesh.nCells()));
    }

    // Discrete divergence orthogonality of state solves, both families.
    {
      const QuadratureRule mq = make_quadrature(6), dq = make_quadrature(8);
      const ControlEval exactU = field_eval(layer.exactControl);
      const TriMesh dmesh = uniform_refine(layer.initialMesh).mesh;
      for (Family family : {Family::MiniElement, Family::TaylorHood}) {
        const SpacePair spaces = make_spaces(dmesh, family);
        const StokesSolution sol = solve_state(dmesh, spaces, exactU, layer.data.f, mq, dq);
        Eigen::VectorXd moments = Eigen::VectorXd::Zero(spaces.nPressDofs);
        for (int k = 0; k < dmesh.nCells(); ++k)
          for (int i = 0; i < mq.size(); ++i) {
            const auto& bary = mq.points[i];
            const double w = 2.0 * dmesh.area(k) * mq.weights[i];
            const double div = evaluate_velocity_divergence(sol.velocity, k, bary);
            for (int p = 0; p < 3; ++p) moments[dmesh.cells[k][p]] += w * bary[p] * div;
          }
        const double scale = std::max(1.0, sol.velocity.coeffs.cwiseAbs().maxCoeff());
        if (moments.cwiseAbs().maxCoeff() > 1e-9 * scale)
          failures.push_back(fmt("divergence orthogonality (%s)",
                                 to_string(family).c_str()));
      }
    }

    // Optimality residuals at tightly converged optima, both schemes and
    // both families.
    {
      const TriMesh omesh = build_unit_square(3);
      const ControlProblem p = toy_problem(0.1, 0.2);
      const QuadratureRule dq = make_quadrature(8);
      SolverOptions so;
      so.tol = 1e-11;
      so.maxIterations = 500;
      for (Family family : {Family::MiniElement, Family::TaylorHood}) {
        const SpacePair spaces = make_spaces(omesh, family);
        const OptimalSolution fully = solve_fully_discrete(omesh, spaces, p, so);
        if (vi_residual_P0(omesh, fully.control.coeffs, fully.state.velocity,
                           fully.adjoint.velocity, p.alpha, p.lower, p.upper, dq) > 1e-10)
          failures.push_back(fmt("optimality residual, fully discrete (%s)",
                                 to_string(family).c_str()));
        const OptimalSolution semi = solve_semidiscrete(omesh, spaces, p, so);
        if (vi_residual_pointwise(omesh, control_eval(semi, p), semi.state.velocity,
                                  semi.adjoint.velocity, p.alpha, p.lower, p.upper, dq) > 1e-10)
          failures.push_back(fmt("optimality residual, semidiscrete (%s)",
                                 to_string(family).c_str()));
      }
    }

    if (failures.empty())
      return {true,
              std::string("quadrature exactness, projection idempotence, conformity after 20 "
                          "mixed refinement rounds, divergence orthogonality, and optimality "
                          "residuals all hold")};
    std::string detail = "violations:";
    for (const std::string& f : failures) detail += " " + f + ";";
    return {false, detail};
  }));

  // 10. Two identical runs of the command-line driver produce identical CSVs
  //     apart from the timing column.
  results.push_back(run_criterion(10, "CSV determinism", 0.0, [&]() -> Verdict {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path();
    const std::string paths[2] = {(dir / "ocp_determinism_a.csv").string(),
                                  (dir / "ocp_determinism_b.csv").string()};
    for (const std::string& out : paths) {
      const std::string cmd = "\"" + cliPath +
                              "\" run --example layer --scheme fully --element mini "
                              "--refine uniform --levels 2 --out \"" +
                              out + "\" > /dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, "command-line run failed: " + cmd};
    }
    std::vector<std::string> lines[2];
    for (int i = 0; i < 2; ++i) {
      std::ifstream in(paths[i]);
      if (!in) return {false, "missing output " + paths[i]};
      std::string line;
      while (std::getline(in, line)) lines[i].push_back(line);
    }
    if (lines[0].size() != lines[1].size() || lines[0].size() < 4)
      return {false, fmt("line counts differ or output truncated (%zu vs %zu)", lines[0].size(),
                         lines[1].size())};
    for (std::size_t i = 0; i < lines[0].size(); ++i) {
      std::string a = lines[0][i], b = lines[1][i];
      if (a.rfind('#', 0) != 0) {  // strip the trailing wallTime field
        a = a.substr(0, a.rfind(','));
        b = b.substr(0, b.rfind(','));
      }
      if (a != b) return {false, fmt("runs differ at line %zu beyond the timing column", i + 1)};
    }
    return {true, fmt("two runs agree on all %zu lines apart from the timing column",
                      lines[0].size())};
  }));

  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CriterionResult& r) { return r.pass; });
}

void print_report(const std::vector<CriterionResult>& results, std::ostream& out) {
  int passed = 0;
  for (const CriterionResult& r : results) {
    out << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.index << " (" << r.name
        << "): " << r.detail << fmt("  [%.1f s]", r.seconds) << "\n";
    passed += r.pass ? 1 : 0;
  }
  out << passed << "/" << results.size() << " acceptance criteria passed\n";
}

}  // namespace ocp
