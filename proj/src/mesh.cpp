#include "ocp/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ocp/errors.hpp"

namespace ocp {

namespace {

double signed_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                   const Eigen::Vector2d& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

std::array<int, 2> edge_key(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

/// Local index of the longest edge; ties broken by the lexicographically
/// largest sorted vertex pair so that two cells sharing a tied edge agree.
int longest_edge_tag(const std::vector<Eigen::Vector2d>& verts, const std::array<int, 3>& cell) {
  int best = -1;
  double bestLen = -1.0;
  std::array<int, 2> bestKey = {-1, -1};
  for (int le = 0; le < 3; ++le) {
    const int u = cell[(le + 1) % 3];
    const int v = cell[(le + 2) % 3];
    const double len = (verts[u] - verts[v]).norm();
    const auto key = edge_key(u, v);
    if (len > bestLen || (len == bestLen && key > bestKey)) {
      best = le;
      bestLen = len;
      bestKey = key;
    }
  }
  return best;
}

}  // namespace

int TriMesh::neighbor(int k, int le) const {
  const int e = cellEdges[k][le];
  for (const auto& inc : edgeIncidence[e]) {
    if (inc.cell >= 0 && inc.cell != k) return inc.cell;
  }
  return -1;
}

double TriMesh::area(int k) const {
  const auto& c = cells[k];
  return signed_area(vertices[c[0]], vertices[c[1]], vertices[c[2]]);
}

double TriMesh::diameter(int k) const {
  const auto& c = cells[k];
  double h = 0.0;
  for (int le = 0; le < 3; ++le) {
    h = std::max(h, (vertices[c[(le + 1) % 3]] - vertices[c[(le + 2) % 3]]).norm());
  }
  return h;
}

double TriMesh::inradius(int k) const {
  const auto& c = cells[k];
  double per = 0.0;
  for (int le = 0; le < 3; ++le) {
    per += (vertices[c[(le + 1) % 3]] - vertices[c[(le + 2) % 3]]).norm();
  }
  return 2.0 * area(k) / per;
}

Eigen::Vector2d TriMesh::centroid(int k) const {
  const auto& c = cells[k];
  return (vertices[c[0]] + vertices[c[1]] + vertices[c[2]]) / 3.0;
}

double TriMesh::edgeLength(int e) const {
  return (vertices[edges[e][0]] - vertices[edges[e][1]]).norm();
}

double TriMesh::hMax() const {
  double h = 0.0;
  for (int k = 0; k < nCells(); ++k) h = std::max(h, diameter(k));
  return h;
}

double TriMesh::totalArea() const {
  double a = 0.0;
  for (int k = 0; k < nCells(); ++k) a += area(k);
  return a;
}

Eigen::Vector2d TriMesh::point(int k, const std::array<double, 3>& bary) const {
  const auto& c = cells[k];
  return bary[0] * vertices[c[0]] + bary[1] * vertices[c[1]] + bary[2] * vertices[c[2]];
}

std::array<double, 3> TriMesh::barycentric(int k, const Eigen::Vector2d& x) const {
  const auto& c = cells[k];
  const double a = signed_area(vertices[c[0]], vertices[c[1]], vertices[c[2]]);
  const double l0 = signed_area(x, vertices[c[1]], vertices[c[2]]) / a;
  const double l1 = signed_area(vertices[c[0]], x, vertices[c[2]]) / a;
  return {l0, l1, 1.0 - l0 - l1};
}

void TriMesh::finalize_topology() {
  const int nc = nCells();
  if (static_cast<int>(refEdge.size()) != nc || static_cast<int>(generation.size()) != nc) {
    throw MeshFormatError("mesh: refEdge/generation size does not match cell count");
  }
  for (int k = 0; k < nc; ++k) {
    for (int v : cells[k]) {
      if (v < 0 || v >= nVertices()) throw MeshFormatError("mesh: vertex index out of range");
    }
    if (area(k) <= 0.0) {
      throw MeshFormatError("mesh: cell " + std::to_string(k) +
                            " is not positively oriented (counter-clockwise)");
    }
  }

  std::map<std::array<int, 2>, int> edgeIds;
  edges.clear();
  edgeIncidence.clear();
  cellEdges.assign(nc, {-1, -1, -1});
  for (int k = 0; k < nc; ++k) {
    for (int le = 0; le < 3; ++le) {
      const auto key = edge_key(cells[k][(le + 1) % 3], cells[k][(le + 2) % 3]);
      auto [it, inserted] = edgeIds.try_emplace(key, static_cast<int>(edges.size()));
      if (inserted) {
        edges.push_back(key);
        edgeIncidence.push_back({});
      }
      auto& inc = edgeIncidence[it->second];
      if (inc[0].cell < 0) {
        inc[0] = {k, le};
      } else if (inc[1].cell < 0) {
        inc[1] = {k, le};
      } else {
        throw MeshFormatError("mesh: edge (" + std::to_string(key[0]) + "," +
                              std::to_string(key[1]) + ") incident to more than two cells");
      }
      cellEdges[k][le] = it->second;
    }
  }

  boundaryFlags.assign(edges.size(), 0);
  boundaryVertex.assign(vertices.size(), 0);
  for (int e = 0; e < nEdges(); ++e) {
    if (edgeIncidence[e][1].cell < 0) {
      boundaryFlags[e] = 1;
      boundaryVertex[edges[e][0]] = 1;
      boundaryVertex[edges[e][1]] = 1;
    }
  }
}

TriMesh build_unit_square(int n) {
  if (n < 1) throw std::invalid_argument("build_unit_square: subdivision count must be >= 1");
  TriMesh m;
  const int np = n + 1;
  m.vertices.reserve(np * np);
  for (int j = 0; j < np; ++j) {
    for (int i = 0; i < np; ++i) {
      m.vertices.emplace_back(double(i) / n, double(j) / n);
    }
  }
  m.cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = i + np * j;
      const int v10 = v00 + 1;
      const int v01 = v00 + np;
      const int v11 = v01 + 1;
      // Diagonal v00-v11; both triangles have it as their longest edge.
      m.cells.push_back({v00, v10, v11});
      m.cells.push_back({v00, v11, v01});
    }
  }
  m.generation.assign(m.cells.size(), 0);
  m.refEdge.resize(m.cells.size());
  for (int k = 0; k < m.nCells(); ++k) m.refEdge[k] = longest_edge_tag(m.vertices, m.cells[k]);
  m.finalize_topology();
  return m;
}

TriMesh build_lshape() {
  TriMesh m;
  m.vertices = {
      {0.0, 0.0},    // 0: reentrant corner
      {-1.0, -1.0},  // 1
      {0.0, -1.0},   // 2
      {-1.0, 0.0},   // 3
      {-1.0, 1.0},   // 4
      {0.0, 1.0},    // 5
      {1.0, 1.0},    // 6
      {1.0, 0.0},    // 7
  };
  // One square per quadrant except [0,1]x[-1,0]; each split by the diagonal
  // through the origin so the reentrant corner is a mesh vertex.
  m.cells = {
      {1, 2, 0},  // lower-left square, below diagonal (1,0)
      {1, 0, 3},  // lower-left square, above diagonal
      {3, 0, 4},  // upper-left square
      {4, 0, 5},
      {0, 7, 6},  // upper-right square
      {0, 6, 5},
  };
  m.generation.assign(m.cells.size(), 0);
  m.refEdge.resize(m.cells.size());
  for (int k = 0; k < m.nCells(); ++k) m.refEdge[k] = longest_edge_tag(m.vertices, m.cells[k]);
  m.finalize_topology();
  return m;
}

BisectResult bisect(const TriMesh& mesh, const std::vector<int>& marked) {
  for (int k : marked) {
    if (k < 0 || k >= mesh.nCells()) {
      throw std::invalid_argument("bisect: marked cell " + std::to_string(k) + " out of range");
    }
  }

  struct WorkCell {
    std::array<int, 3> v;
    int refEdge;
    int generation;
    int root;  // cell id in the input mesh
    bool alive = true;
  };
  std::vector<Eigen::Vector2d> verts = mesh.vertices;
  std::vector<WorkCell> work;
  work.reserve(mesh.nCells() * 2 + marked.size() * 4);
  for (int k = 0; k < mesh.nCells(); ++k) {
    work.push_back({mesh.cells[k], mesh.refEdge[k], mesh.generation[k], k, true});
  }

  std::map<std::array<int, 2>, int> midpoint;              // split edge -> midpoint vertex
  std::map<std::array<int, 2>, std::vector<int>> onEdge;   // edge -> alive work cells
  auto attach = [&](int c) {
    for (int le = 0; le < 3; ++le) {
      onEdge[edge_key(work[c].v[(le + 1) % 3], work[c].v[(le + 2) % 3])].push_back(c);
    }
  };
  auto detach = [&](int c) {
    for (int le = 0; le < 3; ++le) {
      auto& vec = onEdge[edge_key(work[c].v[(le + 1) % 3], work[c].v[(le + 2) % 3])];
      vec.erase(std::remove(vec.begin(), vec.end(), c), vec.end());
    }
  };
  for (int c = 0; c < static_cast<int>(work.size()); ++c) attach(c);

  std::deque<int> queue;
  {
    std::vector<int> sorted(marked);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (int k : sorted) queue.push_back(k);
  }

  const long cap = 1000 + 100L * (mesh.nCells() + static_cast<long>(marked.size()));
  long bisections = 0;
  while (!queue.empty()) {
    const int c = queue.front();
    queue.pop_front();
    if (!work[c].alive) continue;
    if (++bisections > cap) {
      throw std::logic_error("bisect: refinement cascade exceeded safety cap");
    }

    const int e = work[c].refEdge;
    const int peak = work[c].v[e];
    const int va = work[c].v[(e + 1) % 3];
    const int vb = work[c].v[(e + 2) % 3];
    const auto key = edge_key(va, vb);

    int mid;
    if (auto it = midpoint.find(key); it != midpoint.end()) {
      mid = it->second;
    } else {
      mid = static_cast<int>(verts.size());
      verts.push_back(0.5 * (verts[va] + verts[vb]));
      midpoint.emplace(key, mid);
      // The other cell sharing the split edge is now non-conforming.
      for (int other : onEdge[key]) {
        if (other != c && work[other].alive) queue.push_back(other);
      }
    }

    detach(c);
    work[c].alive = false;
    // Children keep the peak first; the newest vertex `mid` sits opposite the
    // inherited parent edge, which becomes the child's refinement edge.
    const int gen = work[c].generation + 1;
    const int root = work[c].root;
    const int c1 = static_cast<int>(work.size());
    work.push_back({{peak, va, mid}, 2, gen, root, true});
    const int c2 = static_cast<int>(work.size());
    work.push_back({{peak, mid, vb}, 1, gen, root, true});
    attach(c1);
    attach(c2);
    for (int child : {c1, c2}) {
      for (int le = 0; le < 3; ++le) {
        const auto ck = edge_key(work[child].v[(le + 1) % 3], work[child].v[(le + 2) % 3]);
        if (midpoint.count(ck)) {
          queue.push_back(child);
          break;
        }
      }
    }
  }

  // Conformity by construction: no alive cell may retain a split edge.
  for (const auto& wc : work) {
    if (!wc.alive) continue;
    for (int le = 0; le < 3; ++le) {
      if (midpoint.count(edge_key(wc.v[(le + 1) % 3], wc.v[(le + 2) % 3]))) {
        throw std::logic_error("bisect: hanging midpoint survived closure");
      }
    }
  }

  BisectResult out;
  out.mesh.vertices = std::move(verts);
  for (const auto& wc : work) {
    if (!wc.alive) continue;
    out.mesh.cells.push_back(wc.v);
    out.mesh.refEdge.push_back(wc.refEdge);
    out.mesh.generation.push_back(wc.generation);
    out.parent.push_back(wc.root);
  }
  out.mesh.finalize_topology();
  return out;
}

BisectResult uniform_refine(const TriMesh& mesh) {
  std::vector<int> all(mesh.nCells());
  for (int k = 0; k < mesh.nCells(); ++k) all[k] = k;
  BisectResult half = bisect(mesh, all);

  std::vector<int> all2(half.mesh.nCells());
  for (int k = 0; k < half.mesh.nCells(); ++k) all2[k] = k;
  BisectResult quarter = bisect(half.mesh, all2);

  for (int& p : quarter.parent) p = half.parent[p];
  if (quarter.mesh.nCells() != 4 * mesh.nCells()) {
    throw std::logic_error("uniform_refine: tagging is not compatible (expected exactly 4x cells)");
  }
  return quarter;
}

PatchIndex compute_patches(const TriMesh& mesh) {
  PatchIndex p;
  const int nc = mesh.nCells();
  p.edgePatch.resize(nc);
  p.vertexPatch.resize(nc);

  std::vector<std::vector<int>> cellsAtVertex(mesh.nVertices());
  for (int k = 0; k < nc; ++k) {
    for (int v : mesh.cells[k]) cellsAtVertex[v].push_back(k);
  }
  for (int k = 0; k < nc; ++k) {
    std::set<int> nk = {k};
    for (int le = 0; le < 3; ++le) {
      const int nb = mesh.neighbor(k, le);
      if (nb >= 0) nk.insert(nb);
    }
    p.edgePatch[k].assign(nk.begin(), nk.end());

    std::set<int> nks;
    for (int v : mesh.cells[k]) nks.insert(cellsAtVertex[v].begin(), cellsAtVertex[v].end());
    p.vertexPatch[k].assign(nks.begin(), nks.end());
  }
  return p;
}

TriMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshFormatError("read_mesh: cannot open '" + path + "'");
  int nv = 0, nc = 0;
  if (!(in >> nv >> nc) || nv < 3 || nc < 1) {
    throw MeshFormatError("read_mesh: malformed header (expected `nv nc`)");
  }
  TriMesh m;
  m.vertices.resize(nv);
  for (int v = 0; v < nv; ++v) {
    if (!(in >> m.vertices[v].x() >> m.vertices[v].y())) {
      throw MeshFormatError("read_mesh: malformed vertex line " + std::to_string(v));
    }
  }
  m.cells.resize(nc);
  for (int k = 0; k < nc; ++k) {
    if (!(in >> m.cells[k][0] >> m.cells[k][1] >> m.cells[k][2])) {
      throw MeshFormatError("read_mesh: malformed cell line " + std::to_string(k));
    }
  }
  m.generation.assign(nc, 0);
  m.refEdge.resize(nc);
  for (int k = 0; k < nc; ++k) m.refEdge[k] = longest_edge_tag(m.vertices, m.cells[k]);
  m.finalize_topology();
  return m;
}

void write_mesh(const TriMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshFormatError("write_mesh: cannot open '" + path + "'");
  out << mesh.nVertices() << " " << mesh.nCells() << "\n";
  char buf[80];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", v.x(), v.y());
    out << buf;
  }
  for (const auto& c : mesh.cells) {
    out << c[0] << " " << c[1] << " " << c[2] << "\n";
  }
}

}  // namespace ocp
