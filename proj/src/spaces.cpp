#include "phplate/spaces.hpp"

#include "phplate/quadrature.hpp"

#include <stdexcept>

namespace phplate {

namespace {

/// 1D Lagrange basis values and u-derivatives at local coordinate u for the
/// given nodes.
void lagrange_1d(const std::vector<double>& nodes, double u, std::vector<double>& val,
                 std::vector<double>& der) {
  const std::size_t n = nodes.size();
  val.assign(n, 1.0);
  der.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t m = 0; m < n; ++m) {
      if (m == j) continue;
      val[j] *= (u - nodes[m]) / (nodes[j] - nodes[m]);
    }
    for (std::size_t l = 0; l < n; ++l) {
      if (l == j) continue;
      double term = 1.0 / (nodes[j] - nodes[l]);
      for (std::size_t m = 0; m < n; ++m) {
        if (m == j || m == l) continue;
        term *= (u - nodes[m]) / (nodes[j] - nodes[m]);
      }
      der[j] += term;
    }
  }
}

std::vector<double> line_nodes(int degree, bool continuous) {
  std::vector<double> nodes;
  if (continuous) {
    for (int i = 0; i <= degree; ++i) nodes.push_back(static_cast<double>(i) / degree);
  } else {
    std::vector<double> w;
    gauss_legendre(degree + 1, nodes, w);
  }
  return nodes;
}

Index line_gdof(int degree, bool continuous, Index cell, int local) {
  return continuous ? cell * degree + local : cell * (degree + 1) + local;
}

} // namespace

Index rect_tensor_dim(int n, int degree, bool continuous) {
  return continuous ? static_cast<Index>(n) * degree + 1
                    : static_cast<Index>(n) * (degree + 1);
}

FunctionSpace FunctionSpace::tri(std::shared_ptr<const TriMesh> mesh, ElementSpec spec,
                                 bool drop_boundary_dofs) {
  FunctionSpace s;
  s.n_comp_ = tri_family_components(spec.family);

  const int pv = tri_dofs_per_vertex(spec.family, spec.order);
  const int pe = tri_dofs_per_edge(spec.family, spec.order);
  const int pc = tri_dofs_per_cell(spec.family, spec.order);

  std::vector<bool> vertex_on_boundary(static_cast<std::size_t>(mesh->n_vertices()), false);
  for (const auto& e : mesh->edges)
    if (e.boundary) {
      vertex_on_boundary[static_cast<std::size_t>(e.vertices[0])] = true;
      vertex_on_boundary[static_cast<std::size_t>(e.vertices[1])] = true;
    }

  std::vector<Index> vertex_start(static_cast<std::size_t>(mesh->n_vertices()), -1);
  std::vector<Index> edge_start(static_cast<std::size_t>(mesh->n_edges()), -1);
  std::vector<Index> cell_start(static_cast<std::size_t>(mesh->n_cells()), -1);

  Index next = 0;
  if (pv > 0)
    for (Index v = 0; v < mesh->n_vertices(); ++v) {
      if (drop_boundary_dofs && vertex_on_boundary[static_cast<std::size_t>(v)]) continue;
      vertex_start[static_cast<std::size_t>(v)] = next;
      next += pv;
    }
  if (pe > 0)
    for (Index e = 0; e < mesh->n_edges(); ++e) {
      if (drop_boundary_dofs && mesh->edges[static_cast<std::size_t>(e)].boundary) continue;
      edge_start[static_cast<std::size_t>(e)] = next;
      next += pe;
    }
  if (pc > 0)
    for (Index c = 0; c < mesh->n_cells(); ++c) {
      cell_start[static_cast<std::size_t>(c)] = next;
      next += pc;
    }
  s.n_dofs_ = next;

  if (!drop_boundary_dofs) {
    for (Index v = 0; v < mesh->n_vertices(); ++v)
      if (pv > 0 && vertex_on_boundary[static_cast<std::size_t>(v)])
        for (int i = 0; i < pv; ++i)
          s.boundary_dofs_.push_back(vertex_start[static_cast<std::size_t>(v)] + i);
    for (Index e = 0; e < mesh->n_edges(); ++e)
      if (pe > 0 && mesh->edges[static_cast<std::size_t>(e)].boundary)
        for (int i = 0; i < pe; ++i)
          s.boundary_dofs_.push_back(edge_start[static_cast<std::size_t>(e)] + i);
  }

  const auto keys = tri_dof_keys(spec.family, spec.order);
  s.cell_dofs_.resize(static_cast<std::size_t>(mesh->n_cells()));
  s.tri_basis_ = std::make_shared<std::vector<TriBasis>>();
  s.tri_basis_->reserve(static_cast<std::size_t>(mesh->n_cells()));

  for (Index c = 0; c < mesh->n_cells(); ++c) {
    auto& map = s.cell_dofs_[static_cast<std::size_t>(c)];
    map.reserve(keys.size());
    for (const auto& k : keys) {
      Index g = -1;
      switch (k.entity) {
        case DofKey::Entity::Vertex: {
          Index vid = mesh->cells[static_cast<std::size_t>(c)][static_cast<std::size_t>(k.local_entity)];
          Index base = vertex_start[static_cast<std::size_t>(vid)];
          g = base < 0 ? -1 : base + k.index_on_entity;
          break;
        }
        case DofKey::Entity::Edge: {
          Index eid = mesh->cell_edges[static_cast<std::size_t>(c)][static_cast<std::size_t>(k.local_entity)];
          Index base = edge_start[static_cast<std::size_t>(eid)];
          g = base < 0 ? -1 : base + k.index_on_entity;
          break;
        }
        case DofKey::Entity::Cell:
          g = cell_start[static_cast<std::size_t>(c)] + k.index_on_entity;
          break;
      }
      map.push_back(g);
    }
    s.tri_basis_->emplace_back(spec.family, spec.order, tri_context(*mesh, c));
  }
  return s;
}

FunctionSpace FunctionSpace::rect(std::shared_ptr<const RectMesh> mesh, int degree,
                                  bool continuous_x, bool continuous_y) {
  if (degree < 0) throw std::invalid_argument("FunctionSpace::rect: degree must be >= 0");
  if ((continuous_x || continuous_y) && degree < 1)
    throw std::invalid_argument("FunctionSpace::rect: continuity needs degree >= 1");

  FunctionSpace s;
  s.n_comp_ = 1;
  s.rect_mesh_ = mesh;
  s.degree_ = degree;
  s.cont_x_ = continuous_x;
  s.cont_y_ = continuous_y;
  s.nodes_x_ = line_nodes(degree, continuous_x);
  s.nodes_y_ = line_nodes(degree, continuous_y);

  const int n = mesh->n;
  const Index nxd = rect_tensor_dim(n, degree, continuous_x);
  const Index nyd = rect_tensor_dim(n, degree, continuous_y);
  s.n_dofs_ = nxd * nyd;

  s.cell_dofs_.resize(static_cast<std::size_t>(mesh->n_cells()));
  for (Index c = 0; c < mesh->n_cells(); ++c) {
    const Index cx = c % n, cy = c / n;
    auto& map = s.cell_dofs_[static_cast<std::size_t>(c)];
    map.reserve(static_cast<std::size_t>((degree + 1) * (degree + 1)));
    for (int ly = 0; ly <= degree; ++ly)
      for (int lx = 0; lx <= degree; ++lx) {
        Index gx = line_gdof(degree, continuous_x, cx, lx);
        Index gy = line_gdof(degree, continuous_y, cy, ly);
        map.push_back(gy * nxd + gx);
      }
  }
  return s;
}

Tabulation FunctionSpace::tabulate(Index cell, const std::vector<Vec2>& points,
                                   int deriv_order) const {
  if (tri_basis_) return cell_basis(cell).tabulate(points, deriv_order);

  if (deriv_order < 0 || deriv_order > 1)
    throw std::invalid_argument("tabulate: rect spaces support derivative order 0 or 1");
  const int n = rect_mesh_->n;
  const double h = rect_mesh_->h;
  const Index cx = cell % n, cy = cell / n;
  const int k = degree_;
  const Index nb = static_cast<Index>((k + 1) * (k + 1));
  const Index np = static_cast<Index>(points.size());

  Tabulation tab;
  tab.n_comp = 1;
  tab.n_points = np;
  tab.n_basis = nb;
  tab.value.assign(1, MatX::Zero(np, nb));
  if (deriv_order >= 1) tab.grad.assign(1, {MatX::Zero(np, nb), MatX::Zero(np, nb)});

  std::vector<double> vx, dx, vy, dy;
  for (Index q = 0; q < np; ++q) {
    const Vec2& p = points[static_cast<std::size_t>(q)];
    double u = p.x() / h - static_cast<double>(cx);
    double v = p.y() / h - static_cast<double>(cy);
    lagrange_1d(nodes_x_, u, vx, dx);
    lagrange_1d(nodes_y_, v, vy, dy);
    for (int ly = 0; ly <= k; ++ly)
      for (int lx = 0; lx <= k; ++lx) {
        Index b = static_cast<Index>(ly * (k + 1) + lx);
        tab.value[0](q, b) = vx[static_cast<std::size_t>(lx)] * vy[static_cast<std::size_t>(ly)];
        if (deriv_order >= 1) {
          tab.grad[0][0](q, b) =
              dx[static_cast<std::size_t>(lx)] / h * vy[static_cast<std::size_t>(ly)];
          tab.grad[0][1](q, b) =
              vx[static_cast<std::size_t>(lx)] * dy[static_cast<std::size_t>(ly)] / h;
        }
      }
  }
  return tab;
}

} // namespace phplate
