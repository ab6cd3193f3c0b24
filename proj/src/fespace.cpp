#include "ocp/fespace.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ocp {

SpacePair make_spaces(const TriMesh& mesh, Family family) {
  SpacePair sp;
  sp.family = family;
  sp.mesh = &mesh;
  sp.nPressDofs = mesh.nVertices();
  sp.velLocalSize = (family == Family::MiniElement) ? 4 : 6;
  sp.nVelDofs = mesh.nVertices() +
                ((family == Family::MiniElement) ? mesh.nCells() : mesh.nEdges());

  sp.velDofMap.resize(mesh.nCells());
  for (int k = 0; k < mesh.nCells(); ++k) {
    auto& dofs = sp.velDofMap[k];
    dofs.fill(-1);
    for (int i = 0; i < 3; ++i) dofs[i] = mesh.cells[k][i];
    if (family == Family::MiniElement) {
      dofs[3] = mesh.nVertices() + k;
    } else {
      for (int le = 0; le < 3; ++le) dofs[3 + le] = mesh.nVertices() + mesh.cellEdges[k][le];
    }
  }

  sp.boundaryVelDofs.assign(sp.nVelDofs, 0);
  for (int v = 0; v < mesh.nVertices(); ++v) sp.boundaryVelDofs[v] = mesh.boundaryVertex[v];
  if (family == Family::TaylorHood) {
    for (int e = 0; e < mesh.nEdges(); ++e) {
      sp.boundaryVelDofs[mesh.nVertices() + e] = mesh.boundaryFlags[e];
    }
  }

  sp.velReduced.assign(sp.nVelDofs, -1);
  for (int d = 0; d < sp.nVelDofs; ++d) {
    if (!sp.boundaryVelDofs[d]) {
      sp.velReduced[d] = sp.nVelInterior++;
      sp.velFull.push_back(d);
    }
  }
  return sp;
}

CellGeometry cell_geometry(const TriMesh& mesh, int k) {
  CellGeometry g;
  const auto& c = mesh.cells[k];
  g.area = mesh.area(k);
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector2d opp = mesh.vertices[c[(i + 2) % 3]] - mesh.vertices[c[(i + 1) % 3]];
    g.gradLambda[i] = Eigen::Vector2d(-opp.y(), opp.x()) / (2.0 * g.area);
  }
  return g;
}

BasisEval eval_velocity_basis(Family family, const CellGeometry& geo,
                              const std::array<double, 3>& l) {
  BasisEval out;
  const auto& gl = geo.gradLambda;
  if (family == Family::MiniElement) {
    out.n = 4;
    for (int i = 0; i < 3; ++i) {
      out.value[i] = l[i];
      out.grad[i] = gl[i];
      out.laplacian[i] = 0.0;
    }
    out.value[3] = 27.0 * l[0] * l[1] * l[2];
    out.grad[3] = 27.0 * (l[1] * l[2] * gl[0] + l[0] * l[2] * gl[1] + l[0] * l[1] * gl[2]);
    out.laplacian[3] = 54.0 * (l[0] * gl[1].dot(gl[2]) + l[1] * gl[0].dot(gl[2]) +
                               l[2] * gl[0].dot(gl[1]));
  } else {
    out.n = 6;
    for (int i = 0; i < 3; ++i) {
      out.value[i] = l[i] * (2.0 * l[i] - 1.0);
      out.grad[i] = (4.0 * l[i] - 1.0) * gl[i];
      out.laplacian[i] = 4.0 * gl[i].dot(gl[i]);
    }
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3;
      const int k = (i + 2) % 3;
      out.value[3 + i] = 4.0 * l[j] * l[k];
      out.grad[3 + i] = 4.0 * (l[k] * gl[j] + l[j] * gl[k]);
      out.laplacian[3 + i] = 8.0 * gl[j].dot(gl[k]);
    }
  }
  return out;
}

FieldFunction make_velocity_field(const SpacePair& space) {
  FieldFunction f;
  f.role = FieldFunction::Role::Velocity;
  f.space = &space;
  f.mesh = space.mesh;
  f.coeffs = Eigen::VectorXd::Zero(2 * space.nVelDofs);
  return f;
}

FieldFunction make_pressure_field(const SpacePair& space) {
  FieldFunction f;
  f.role = FieldFunction::Role::Pressure;
  f.space = &space;
  f.mesh = space.mesh;
  f.coeffs = Eigen::VectorXd::Zero(space.nPressDofs);
  return f;
}

FieldFunction make_control_field(const TriMesh& mesh, double value) {
  FieldFunction f;
  f.role = FieldFunction::Role::Control;
  f.mesh = &mesh;
  f.coeffs = Eigen::VectorXd::Constant(mesh.nCells(), value);
  return f;
}

Eigen::Vector2d evaluate_velocity(const FieldFunction& f, int cell,
                                  const std::array<double, 3>& bary) {
  const SpacePair& sp = *f.space;
  const BasisEval basis = eval_velocity_basis(sp.family, cell_geometry(*sp.mesh, cell), bary);
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (int i = 0; i < basis.n; ++i) {
    const int d = sp.velDofMap[cell][i];
    v.x() += f.coeffs[d] * basis.value[i];
    v.y() += f.coeffs[sp.nVelDofs + d] * basis.value[i];
  }
  return v;
}

Eigen::Matrix2d evaluate_velocity_gradient(const FieldFunction& f, int cell,
                                           const std::array<double, 3>& bary) {
  const SpacePair& sp = *f.space;
  const BasisEval basis = eval_velocity_basis(sp.family, cell_geometry(*sp.mesh, cell), bary);
  Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
  for (int i = 0; i < basis.n; ++i) {
    const int d = sp.velDofMap[cell][i];
    g.row(0) += f.coeffs[d] * basis.grad[i].transpose();
    g.row(1) += f.coeffs[sp.nVelDofs + d] * basis.grad[i].transpose();
  }
  return g;
}

Eigen::Vector2d evaluate_velocity_laplacian(const FieldFunction& f, int cell,
                                            const std::array<double, 3>& bary) {
  const SpacePair& sp = *f.space;
  const BasisEval basis = eval_velocity_basis(sp.family, cell_geometry(*sp.mesh, cell), bary);
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (int i = 0; i < basis.n; ++i) {
    const int d = sp.velDofMap[cell][i];
    v.x() += f.coeffs[d] * basis.laplacian[i];
    v.y() += f.coeffs[sp.nVelDofs + d] * basis.laplacian[i];
  }
  return v;
}

double evaluate_velocity_divergence(const FieldFunction& f, int cell,
                                    const std::array<double, 3>& bary) {
  return evaluate_velocity_gradient(f, cell, bary).trace();
}

double evaluate_pressure(const FieldFunction& f, int cell, const std::array<double, 3>& bary) {
  const auto& c = f.space->mesh->cells[cell];
  return bary[0] * f.coeffs[c[0]] + bary[1] * f.coeffs[c[1]] + bary[2] * f.coeffs[c[2]];
}

Eigen::Vector2d evaluate_pressure_gradient(const FieldFunction& f, int cell) {
  const CellGeometry geo = cell_geometry(*f.space->mesh, cell);
  const auto& c = f.space->mesh->cells[cell];
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (int i = 0; i < 3; ++i) g += f.coeffs[c[i]] * geo.gradLambda[i];
  return g;
}

double evaluate_control(const FieldFunction& f, int cell) { return f.coeffs[cell]; }

Eigen::VectorXd project_P0(const std::function<double(const Eigen::Vector2d&)>& f,
                           const TriMesh& mesh, const QuadratureRule& quad) {
  Eigen::VectorXd out(mesh.nCells());
  for (int k = 0; k < mesh.nCells(); ++k) {
    double acc = 0.0;
    for (int q = 0; q < quad.size(); ++q) {
      acc += quad.weights[q] * f(mesh.point(k, quad.points[q]));
    }
    // Quadrature weights sum to the reference area 1/2; the cell mean divides
    // the physical integral 2*area*acc by the cell area.
    out[k] = 2.0 * acc;
  }
  return out;
}

Eigen::VectorXd clamp_admissible(const Eigen::VectorXd& values, double a, double b) {
  if (!(a < b)) throw std::invalid_argument("clamp_admissible: requires a < b");
  Eigen::VectorXd out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    out[i] = std::min(b, std::max(values[i], a));
  }
  return out;
}

double pressure_mean(const FieldFunction& pressure) {
  const TriMesh& mesh = *pressure.space->mesh;
  double integral = 0.0;
  double total = 0.0;
  for (int k = 0; k < mesh.nCells(); ++k) {
    const auto& c = mesh.cells[k];
    const double area = mesh.area(k);
    // Vertex-average formula is exact for P1.
    integral += area / 3.0 * (pressure.coeffs[c[0]] + pressure.coeffs[c[1]] + pressure.coeffs[c[2]]);
    total += area;
  }
  return integral / total;
}

void zero_mean(FieldFunction& pressure) {
  pressure.coeffs.array() -= pressure_mean(pressure);
}

void dump_field(const FieldFunction& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_field: cannot open '" + path + "'");
  char buf[96];
  if (f.role == FieldFunction::Role::Velocity) {
    const int n = f.space->nVelDofs;
    out << "dof_id,value_x,value_y\n";
    for (int d = 0; d < n; ++d) {
      std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", d, f.coeffs[d], f.coeffs[n + d]);
      out << buf;
    }
  } else {
    out << "dof_id,value\n";
    for (Eigen::Index d = 0; d < f.coeffs.size(); ++d) {
      std::snprintf(buf, sizeof(buf), "%d,%.17g\n", static_cast<int>(d), f.coeffs[d]);
      out << buf;
    }
  }
}

}  // namespace ocp
