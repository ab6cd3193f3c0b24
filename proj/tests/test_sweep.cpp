#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "ocp/fespace.hpp"
#include "ocp/sweep.hpp"

using namespace ocp;

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

int count_fields(const std::string& line) {
  return 1 + static_cast<int>(std::count(line.begin(), line.end(), ','));
}

}  // namespace

TEST_CASE("eoc steps and log-log slope on synthetic sequences") {
  const std::vector<double> h = {1.0, 0.5, 0.25};
  const auto linear = eoc_steps({1.0, 0.5, 0.25}, h);
  CHECK(linear[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(linear[1] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(eoc_steps({1.0, 0.25, 0.0625}, h)[1] == doctest::Approx(2.0).epsilon(1e-13));

  const std::vector<double> x = {100.0, 400.0, 1600.0, 6400.0};
  std::vector<double> y;
  for (double xi : x) y.push_back(3.7 / std::sqrt(xi));
  CHECK(log_log_slope(x, y) == doctest::Approx(-0.5).epsilon(1e-12));
  y[2] = 0.0;  // non-positive pairs are skipped, slope unchanged
  CHECK(log_log_slope(x, y) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(std::isnan(log_log_slope({1.0}, {2.0})));
  CHECK_THROWS_AS(eoc_steps({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("ndof counting on the 2x2 square") {
  const TriMesh mesh = build_unit_square(2);
  const SpacePair mini = make_spaces(mesh, Family::MiniElement);
  const SpacePair th = make_spaces(mesh, Family::TaylorHood);
  // 9 vertices (1 interior), 8 cells, 16 edges (8 on the boundary): both
  // pairs have 9 interior scalar velocity dofs and 9 pressure dofs.
  CHECK(count_ndof(mini, Scheme::FullyDiscrete) == 44);
  CHECK(count_ndof(mini, Scheme::Semidiscrete) == 36);
  CHECK(count_ndof(th, Scheme::FullyDiscrete) == 44);
  CHECK(count_ndof(th, Scheme::Semidiscrete) == 36);
}

TEST_CASE("uniform sweep on the manufactured problem records sane rows") {
  const BenchmarkProblem prob = layer_problem();
  SweepOptions opts;
  opts.scheme = Scheme::FullyDiscrete;
  opts.family = Family::MiniElement;
  opts.mode = RefinementMode::Uniform;
  opts.levels = 2;
  opts.solver.tol = 1e-6;
  opts.errorQuadDegree = 8;
  const auto rows = run_sweep(prob, opts);

  REQUIRE(rows.size() == 2);
  CHECK(rows[0].level == 0);
  CHECK(rows[1].level == 1);
  CHECK(rows[0].nCells == 32);
  CHECK(rows[1].nCells == 128);
  CHECK(rows[1].ndof > rows[0].ndof);
  CHECK(rows[0].hMax == doctest::Approx(2.0 * rows[1].hMax).epsilon(1e-12));
  for (const auto& r : rows) {
    CHECK(std::isfinite(r.cost));
    CHECK(r.errU_L2 > 0.0);
    CHECK(r.errY_H1 > 0.0);
    CHECK(r.errP_L2 > 0.0);
    CHECK(r.errZ_H1 > 0.0);
    CHECK(r.errR_L2 > 0.0);
    CHECK(r.estTotal > 0.0);
    CHECK(r.estTotal ==
          doctest::Approx(std::sqrt(r.estState * r.estState + r.estAdjoint * r.estAdjoint +
                                    r.estControl * r.estControl))
              .epsilon(1e-12));
    CHECK(r.optimIters >= 1);
    CHECK(r.wallTime > 0.0);
  }
  // One uniform refinement halves h; the state energy error must drop.
  CHECK(rows[1].errY_H1 < rows[0].errY_H1);
}

TEST_CASE("adaptive sweep without exact solution marks errors as NaN") {
  const BenchmarkProblem prob = lshape_problem();
  SweepOptions opts;
  opts.scheme = Scheme::FullyDiscrete;
  opts.family = Family::MiniElement;
  opts.mode = RefinementMode::Adaptive;
  opts.levels = 3;
  opts.solver.tol = 1e-6;
  const auto rows = run_sweep(prob, opts);

  REQUIRE(rows.size() == 3);
  for (std::size_t l = 0; l < rows.size(); ++l) {
    CHECK(rows[l].level == static_cast<int>(l));
    CHECK(std::isnan(rows[l].errU_L2));
    CHECK(std::isnan(rows[l].errY_H1));
    CHECK(std::isnan(rows[l].errZ_H1));
    CHECK(rows[l].estTotal > 0.0);
    if (l > 0) CHECK(rows[l].ndof > rows[l - 1].ndof);
  }
}

TEST_CASE("csv dump has stable header, field count, and content") {
  std::vector<ConvergenceRow> rows(2);
  rows[0].level = 0;
  rows[0].ndof = 44;
  rows[0].hMax = 0.7071067811865476;
  rows[0].nCells = 8;
  rows[0].cost = 1.5;
  rows[0].errU_L2 = std::numeric_limits<double>::quiet_NaN();
  rows[0].optimIters = 3;
  rows[0].wallTime = 0.125;
  rows[1] = rows[0];
  rows[1].level = 1;
  rows[1].ndof = 170;

  const std::string path = "/tmp/ocp_test_sweep.csv";
  write_csv(path, rows, {"benchmark: layer", "scheme: fully"});
  const auto lines = read_lines(path);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "# benchmark: layer");
  CHECK(lines[1] == "# scheme: fully");
  CHECK(lines[2] ==
        "level,Ndof,hMax,nCells,J,errU_L2,errY_H1,errP_L2,errZ_H1,errR_L2,"
        "estSt,estAdj,estCt,estTotal,optimIters,wallTime");
  CHECK(count_fields(lines[2]) == 16);
  CHECK(count_fields(lines[3]) == 16);
  CHECK(lines[3].substr(0, 5) == "0,44,");
  CHECK(lines[3].find("nan") != std::string::npos);

  // Identical rows serialize to identical bytes.
  const std::string copy = "/tmp/ocp_test_sweep_copy.csv";
  write_csv(copy, rows, {"benchmark: layer", "scheme: fully"});
  std::ifstream a(path), b(copy);
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().size() > 0);
}
