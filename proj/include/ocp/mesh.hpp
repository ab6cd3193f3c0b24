// Conforming triangular meshes with newest-vertex bisection refinement,
// edge/patch topology, and geometric queries.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

namespace ocp {

/// One (cell, localEdge) incidence of an edge. Local edge i of a cell joins
/// vertices (i+1)%3 and (i+2)%3, i.e. it is the edge opposite local vertex i.
struct EdgeIncidence {
  int cell = -1;
  int localEdge = -1;
};

/// Conforming triangulation of a polygonal domain. Cells are positively
/// oriented vertex triples, each carrying a designated refinement edge and its
/// bisection generation. The edge table is explicit because jump terms of the
/// error estimators need edge -> (cell, cell) incidence repeatedly.
/// Immutable after construction; refinement returns a new mesh.
struct TriMesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> cells;  ///< counter-clockwise vertex triples
  std::vector<int> refEdge;               ///< per cell: local index of the refinement edge
  std::vector<int> generation;            ///< per cell: bisection depth

  // Derived topology, built by finalize_topology().
  std::vector<std::array<int, 2>> edges;  ///< sorted vertex pairs
  std::vector<std::array<EdgeIncidence, 2>> edgeIncidence;  ///< second entry cell=-1 on boundary
  std::vector<char> boundaryFlags;        ///< per edge: incidence count == 1
  std::vector<std::array<int, 3>> cellEdges;  ///< per cell: local edge -> global edge id
  std::vector<char> boundaryVertex;       ///< per vertex: endpoint of a boundary edge

  int nCells() const { return static_cast<int>(cells.size()); }
  int nVertices() const { return static_cast<int>(vertices.size()); }
  int nEdges() const { return static_cast<int>(edges.size()); }

  /// Cell across local edge `le` of cell `k`, or -1 on the boundary.
  int neighbor(int k, int le) const;

  double area(int k) const;
  double diameter(int k) const;  ///< h_K = longest edge length
  double inradius(int k) const;  ///< rho_K = 2 * area / perimeter
  Eigen::Vector2d centroid(int k) const;
  double edgeLength(int e) const;
  double hMax() const;
  double totalArea() const;

  /// Physical coordinates of a barycentric point of cell k.
  Eigen::Vector2d point(int k, const std::array<double, 3>& bary) const;
  /// Barycentric coordinates of a physical point with respect to cell k.
  std::array<double, 3> barycentric(int k, const Eigen::Vector2d& x) const;

  /// Builds the edge table and validates orientation, incidence counts and
  /// boundary flags. Throws MeshFormatError on violation.
  void finalize_topology();
};

/// Edge- and vertex-sharing cell neighborhoods N_K and N_K*.
struct PatchIndex {
  std::vector<std::vector<int>> edgePatch;    ///< N_K: cells sharing an edge with K, incl. K
  std::vector<std::vector<int>> vertexPatch;  ///< N_K*: cells sharing a vertex with K, incl. K
};

/// Refined mesh plus the map from new cells to the cell of the input mesh they
/// descend from (parent[newCell] = old cell id; identity for untouched cells).
struct BisectResult {
  TriMesh mesh;
  std::vector<int> parent;
};

/// Uniform n x n grid of (0,1)^2, each square split by its diagonal: 2n^2 cells.
/// Refinement edges are the diagonals (longest-edge tagging), which makes the
/// tagging compatible: bisecting all cells never needs closure.
TriMesh build_unit_square(int n);

/// Coarsest mesh of the L-shaped domain (-1,1)^2 \ [0,1]x[-1,0]: three unit
/// squares split by the diagonals through the reentrant corner at the origin.
TriMesh build_lshape();

/// Newest-vertex bisection of the marked cells plus conforming closure.
/// Every marked cell is bisected at least once; the result is conforming with
/// a parent map back to `mesh`. An empty set returns a copy of the input.
BisectResult bisect(const TriMesh& mesh, const std::vector<int>& marked);

/// Two all-cells bisection passes: exactly quarters every cell on compatibly
/// tagged meshes (asserted), halving the mesh size h.
BisectResult uniform_refine(const TriMesh& mesh);

PatchIndex compute_patches(const TriMesh& mesh);

/// ASCII format: line 1 `nv nc`, then nv lines `x y`, then nc lines `i j k`
/// (0-based, counter-clockwise). The reader validates orientation and
/// conformity and tags refinement edges by longest edge.
TriMesh read_mesh(const std::string& path);
void write_mesh(const TriMesh& mesh, const std::string& path);

}  // namespace ocp
