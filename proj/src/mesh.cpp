#include "phplate/mesh.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>

namespace phplate {

namespace {

Vec2 polygon_centroid(const std::vector<Vec2>& pts) {
  Vec2 c = Vec2::Zero();
  for (const auto& p : pts) c += p;
  return c / static_cast<double>(pts.size());
}

/// Build the edge table from cell connectivity. Edges are numbered in
/// first-encounter order over (cell, local edge) loops, which is
/// deterministic for a fixed cell list.
template <std::size_t NV>
std::vector<EdgeRecord> build_edges(const std::vector<Vec2>& vertices,
                                    const std::vector<std::array<Index, NV>>& cells,
                                    std::vector<std::array<Index, NV>>& cell_edges,
                                    bool tri_numbering) {
  std::map<std::pair<Index, Index>, Index> lookup;
  std::vector<EdgeRecord> edges;
  cell_edges.assign(cells.size(), {});

  for (Index c = 0; c < static_cast<Index>(cells.size()); ++c) {
    for (std::size_t le = 0; le < NV; ++le) {
      Index a, b;
      if (tri_numbering) {
        // local edge i is opposite vertex i
        a = cells[c][(le + 1) % NV];
        b = cells[c][(le + 2) % NV];
      } else {
        a = cells[c][le];
        b = cells[c][(le + 1) % NV];
      }
      auto key = std::minmax(a, b);
      auto [it, inserted] = lookup.try_emplace(key, static_cast<Index>(edges.size()));
      if (inserted) {
        EdgeRecord e;
        e.vertices = {key.first, key.second};
        e.cells = {c, -1};
        Vec2 d = vertices[key.second] - vertices[key.first];
        e.length = d.norm();
        e.tangent = d / e.length;
        e.normal = Vec2(e.tangent.y(), -e.tangent.x());
        edges.push_back(e);
      } else {
        EdgeRecord& e = edges[it->second];
        if (e.cells[1] != -1) throw std::runtime_error("mesh: edge shared by more than two cells");
        e.cells[1] = c;
      }
      cell_edges[c][le] = it->second;
    }
  }

  // Orient normals out of the first (lower-indexed) adjacent cell.
  for (auto& e : edges) {
    e.boundary = (e.cells[1] == -1);
    std::vector<Vec2> cell_pts;
    for (Index v : cells[e.cells[0]]) cell_pts.push_back(vertices[v]);
    Vec2 mid = 0.5 * (vertices[e.vertices[0]] + vertices[e.vertices[1]]);
    Vec2 to_edge = mid - polygon_centroid(cell_pts);
    if (e.normal.dot(to_edge) < 0.0) e.normal = -e.normal;
  }
  return edges;
}

} // namespace

RectMesh build_rect_grid(int n) {
  if (n < 1) throw std::invalid_argument("build_rect_grid: need n >= 1");
  RectMesh m;
  m.n = n;
  m.h = 1.0 / n;
  m.vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) m.vertices.emplace_back(i * m.h, j * m.h);

  auto vid = [n](int i, int j) { return static_cast<Index>(j * (n + 1) + i); };
  m.cells.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      m.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});

  m.edges = build_edges<4>(m.vertices, m.cells, m.cell_edges, false);
  return m;
}

TriMesh build_tri_grid(int n, Diagonal diagonal) {
  if (n < 1) throw std::invalid_argument("build_tri_grid: need n >= 1");
  TriMesh m;
  m.n = n;
  m.h = 1.0 / n;
  m.diagonal = diagonal;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) m.vertices.emplace_back(i * m.h, j * m.h);
  auto vid = [n](int i, int j) { return static_cast<Index>(j * (n + 1) + i); };

  if (diagonal == Diagonal::Crisscross) {
    // one extra vertex at each square center, four triangles per square
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) m.vertices.emplace_back((i + 0.5) * m.h, (j + 0.5) * m.h);
    auto cid = [n](int i, int j) {
      return static_cast<Index>((n + 1) * (n + 1) + j * n + i);
    };
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        Index v00 = vid(i, j), v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
        Index vc = cid(i, j);
        m.cells.push_back({v00, v10, vc});
        m.cells.push_back({v10, v11, vc});
        m.cells.push_back({v11, v01, vc});
        m.cells.push_back({v01, v00, vc});
      }
  } else {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        Index v00 = vid(i, j), v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
        if (diagonal == Diagonal::Right) {
          // diagonal from (i+1,j) to (i,j+1)
          m.cells.push_back({v00, v10, v01});
          m.cells.push_back({v10, v11, v01});
        } else {
          // diagonal from (i,j) to (i+1,j+1)
          m.cells.push_back({v00, v10, v11});
          m.cells.push_back({v00, v11, v01});
        }
      }
  }

  m.edges = build_edges<3>(m.vertices, m.cells, m.cell_edges, true);
  return m;
}

namespace {

CellGeometry make_geometry(const std::vector<Vec2>& coords, const Mat2& jac,
                           bool tri_numbering) {
  CellGeometry g;
  g.vertex_coords = coords;
  g.jacobian = jac;
  g.det = jac.determinant();
  g.area = (coords.size() == 3) ? 0.5 * g.det : g.det;
  g.centroid = polygon_centroid(coords);
  const std::size_t nv = coords.size();
  for (std::size_t le = 0; le < nv; ++le) {
    std::size_t a, b;
    if (tri_numbering) {
      a = (le + 1) % nv;
      b = (le + 2) % nv;
    } else {
      a = le;
      b = (le + 1) % nv;
    }
    Vec2 d = coords[b] - coords[a];
    g.edge_lengths.push_back(d.norm());
    Vec2 nrm(d.y(), -d.x());
    nrm.normalize();
    Vec2 mid = 0.5 * (coords[a] + coords[b]);
    if (nrm.dot(mid - g.centroid) < 0.0) nrm = -nrm;
    g.outward_normals.push_back(nrm);
  }
  return g;
}

} // namespace

CellGeometry cell_geometry(const RectMesh& mesh, Index cell) {
  const auto& cv = mesh.cells.at(static_cast<std::size_t>(cell));
  std::vector<Vec2> coords;
  for (Index v : cv) coords.push_back(mesh.vertices[static_cast<std::size_t>(v)]);
  Mat2 jac;
  jac.col(0) = coords[1] - coords[0];
  jac.col(1) = coords[3] - coords[0];
  return make_geometry(coords, jac, false);
}

CellGeometry cell_geometry(const TriMesh& mesh, Index cell) {
  const auto& cv = mesh.cells.at(static_cast<std::size_t>(cell));
  std::vector<Vec2> coords;
  for (Index v : cv) coords.push_back(mesh.vertices[static_cast<std::size_t>(v)]);
  Mat2 jac;
  jac.col(0) = coords[1] - coords[0];
  jac.col(1) = coords[2] - coords[0];
  return make_geometry(coords, jac, true);
}

namespace {

template <typename Mesh>
void dump_impl(std::ostream& os, const Mesh& mesh) {
  for (const auto& v : mesh.vertices) os << v.x() << ' ' << v.y() << '\n';
  for (const auto& c : mesh.cells) {
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c[i];
    os << '\n';
  }
}

} // namespace

void dump_mesh(std::ostream& os, const RectMesh& mesh) { dump_impl(os, mesh); }
void dump_mesh(std::ostream& os, const TriMesh& mesh) { dump_impl(os, mesh); }

} // namespace phplate
