#pragma once

#include "phplate/types.hpp"

#include <array>
#include <iosfwd>
#include <vector>

namespace phplate {

/// One mesh edge. Endpoints are stored with the lower vertex index first;
/// that ordering also fixes the tangent and the edge parameterization used
/// for moment degrees of freedom, so every cell touching the edge sees the
/// same functional. The normal points out of cells[0] (the lower-indexed
/// adjacent cell), which for boundary edges means out of the domain.
struct EdgeRecord {
  std::array<Index, 2> vertices{-1, -1};
  std::array<Index, 2> cells{-1, -1};
  Vec2 normal = Vec2::Zero();
  Vec2 tangent = Vec2::Zero();
  double length = 0.0;
  bool boundary = false;
};

struct RectMesh {
  int n = 0;      ///< cells per side
  double h = 0.0; ///< cell side, 1/n
  std::vector<Vec2> vertices;
  std::vector<std::array<Index, 4>> cells;      ///< counterclockwise vertex ids
  std::vector<std::array<Index, 4>> cell_edges; ///< edge i joins vertices (i, i+1 mod 4)
  std::vector<EdgeRecord> edges;

  Index n_vertices() const { return static_cast<Index>(vertices.size()); }
  Index n_cells() const { return static_cast<Index>(cells.size()); }
  Index n_edges() const { return static_cast<Index>(edges.size()); }
};

enum class Diagonal { Right, Left, Crisscross };

struct TriMesh {
  int n = 0; ///< squares per side before the diagonal split
  double h = 0.0;
  Diagonal diagonal = Diagonal::Right;
  std::vector<Vec2> vertices;
  std::vector<std::array<Index, 3>> cells;      ///< counterclockwise vertex ids
  std::vector<std::array<Index, 3>> cell_edges; ///< edge i is opposite vertex i
  std::vector<EdgeRecord> edges;

  Index n_vertices() const { return static_cast<Index>(vertices.size()); }
  Index n_cells() const { return static_cast<Index>(cells.size()); }
  Index n_edges() const { return static_cast<Index>(edges.size()); }
};

/// Affine map data of one cell: x = v0 + J * xhat with xhat on the reference
/// triangle/square.
struct CellGeometry {
  std::vector<Vec2> vertex_coords;
  Mat2 jacobian = Mat2::Zero();
  double det = 0.0;
  double area = 0.0;
  Vec2 centroid = Vec2::Zero();
  std::vector<double> edge_lengths;        ///< local edge order
  std::vector<Vec2> outward_normals;       ///< outward of this cell, local edge order
};

RectMesh build_rect_grid(int n);
TriMesh build_tri_grid(int n, Diagonal diagonal = Diagonal::Right);

CellGeometry cell_geometry(const RectMesh& mesh, Index cell);
CellGeometry cell_geometry(const TriMesh& mesh, Index cell);

/// Plain-text dump: one "x y" line per vertex, then one line of vertex
/// indices per cell.
void dump_mesh(std::ostream& os, const RectMesh& mesh);
void dump_mesh(std::ostream& os, const TriMesh& mesh);

} // namespace phplate
