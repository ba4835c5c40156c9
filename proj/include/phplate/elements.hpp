#pragma once

#include "phplate/mesh.hpp"
#include "phplate/types.hpp"

#include <array>
#include <functional>
#include <vector>

namespace phplate {

/// Triangle element families. Orders follow the zero-based convention:
/// RaviartThomas(r) has normal traces of degree r and dimension (r+1)(r+3),
/// BrezziDouglasMarini(r) is the full (P_r)^2 with dimension (r+1)(r+2),
/// HellanHerrmannJohnson(r) is P_r symmetric tensors with normal-normal
/// edge moments, dimension 3(r+1)(r+2)/2.
enum class TriFamily {
  LagrangeCont,
  LagrangeDisc,
  RaviartThomas,
  BrezziDouglasMarini,
  HellanHerrmannJohnson,
};

/// Validated (family, order) pair; the constructors below reject orders the
/// family does not support.
struct ElementSpec {
  TriFamily family;
  int order;
};

ElementSpec lagrange_element(int degree, bool continuous);
ElementSpec raviart_thomas_element(int order);
ElementSpec bdm_element(int order);
ElementSpec hhj_element(int order);

int tri_family_dim(TriFamily family, int order);
int tri_family_components(TriFamily family);
int tri_dofs_per_vertex(TriFamily family, int order);
int tri_dofs_per_edge(TriFamily family, int order);
int tri_dofs_per_cell(TriFamily family, int order);

/// Edge data seen from a cell, in the mesh-global orientation: the
/// parameterization runs from a to b (lower vertex index first on meshes)
/// and the normal carries the mesh-global sign, so adjacent cells apply
/// identical edge functionals to shared degrees of freedom.
struct EdgeFrame {
  Vec2 a = Vec2::Zero();
  Vec2 b = Vec2::Zero();
  Vec2 normal = Vec2::Zero();
  double length = 0.0;
};

struct TriCellContext {
  std::array<Vec2, 3> v;
  std::array<EdgeFrame, 3> edge; ///< local edge i opposite vertex i
  Vec2 center = Vec2::Zero();
  double scale = 1.0;
  double area = 0.0;
};

TriCellContext tri_context(const TriMesh& mesh, Index cell);
/// Unit reference triangle {(0,0),(1,0),(0,1)} as a standalone context.
TriCellContext reference_tri_context();

/// Basis values at a batch of points. Component layout: scalar families use
/// one component; vector families two (x, y); HellanHerrmannJohnson three in
/// the order (11, 22, 12).
struct Tabulation {
  int n_comp = 0;
  Index n_points = 0;
  Index n_basis = 0;
  std::vector<MatX> value;                ///< [comp](point, basis)
  std::vector<std::array<MatX, 2>> grad;  ///< d/dx, d/dy when deriv >= 1
  std::vector<std::array<MatX, 3>> hess;  ///< dxx, dxy, dyy when deriv >= 2
};

/// Nodal basis of one element family on one physical cell, dual to the
/// family's dof functionals. Built by inverting the generalized Vandermonde
/// matrix of the functionals against scaled monomial primes.
class TriBasis {
public:
  TriBasis(TriFamily family, int order, const TriCellContext& ctx);

  TriFamily family() const { return family_; }
  int order() const { return order_; }
  int dim() const { return static_cast<int>(coeff_.cols()); }
  int n_comp() const { return tri_family_components(family_); }
  const TriCellContext& context() const { return ctx_; }

  /// deriv_order in {0,1,2}; second derivatives are only supported for
  /// scalar Lagrange families.
  Tabulation tabulate(const std::vector<Vec2>& points, int deriv_order) const;

private:
  TriFamily family_;
  int order_;
  TriCellContext ctx_;
  MatX coeff_; ///< n_prime x n_basis
};

/// Apply the family's dof functionals on the given cell to an arbitrary
/// function returning n_comp values; this is the interpolation operator's
/// coefficient map.
VecX apply_dof_functionals(TriFamily family, int order, const TriCellContext& ctx,
                           const std::function<VecX(const Vec2&)>& fn);

/// Topological attachment of each local dof, in functional order.
struct DofKey {
  enum class Entity { Vertex, Edge, Cell };
  Entity entity = Entity::Cell;
  int local_entity = -1; ///< local vertex or edge number
  int index_on_entity = 0;
};

std::vector<DofKey> tri_dof_keys(TriFamily family, int order);

} // namespace phplate
