#pragma once

#include "phplate/elements.hpp"
#include "phplate/mesh.hpp"

#include <memory>
#include <vector>

namespace phplate {

/// Global finite element space on a mesh: dof numbering, cell-to-global maps
/// and per-cell basis tabulation. Two flavours share the interface: element
/// spaces on triangle meshes, and tensor-product nodal spaces on rectangle
/// meshes with per-direction continuity (the building block of the
/// square-mesh stress/shear spaces, where normal-trace continuity reduces to
/// one continuous direction).
class FunctionSpace {
public:
  static FunctionSpace tri(std::shared_ptr<const TriMesh> mesh, ElementSpec spec,
                           bool drop_boundary_dofs = false);
  static FunctionSpace rect(std::shared_ptr<const RectMesh> mesh, int degree, bool continuous_x,
                            bool continuous_y);

  Index dofs() const { return n_dofs_; }
  int components() const { return n_comp_; }
  Index n_cells() const { return static_cast<Index>(cell_dofs_.size()); }
  /// Global dof of each local basis function; -1 marks dofs constrained out
  /// at build time (homogeneous essential conditions).
  const std::vector<Index>& cell_dofs(Index cell) const {
    return cell_dofs_[static_cast<std::size_t>(cell)];
  }
  /// Dofs attached to boundary entities (empty when they were dropped at
  /// build time or the family has no boundary-coupled dofs).
  const std::vector<Index>& boundary_dofs() const { return boundary_dofs_; }

  Tabulation tabulate(Index cell, const std::vector<Vec2>& points, int deriv_order) const;

  bool is_tri() const { return tri_basis_ != nullptr; }
  const TriBasis& cell_basis(Index cell) const {
    return (*tri_basis_)[static_cast<std::size_t>(cell)];
  }

private:
  FunctionSpace() = default;

  Index n_dofs_ = 0;
  int n_comp_ = 1;
  std::vector<std::vector<Index>> cell_dofs_;
  std::vector<Index> boundary_dofs_;

  // triangle flavour
  std::shared_ptr<std::vector<TriBasis>> tri_basis_;

  // rectangle flavour
  std::shared_ptr<const RectMesh> rect_mesh_;
  int degree_ = 0;
  bool cont_x_ = false, cont_y_ = false;
  std::vector<double> nodes_x_, nodes_y_; ///< local 1d nodes in [0,1]
};

/// Dimension formulas used for cross-checking assembled layouts.
Index rect_tensor_dim(int n, int degree, bool continuous);

} // namespace phplate
