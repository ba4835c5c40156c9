#pragma once

#include "phplate/material.hpp"
#include "phplate/spaces.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace phplate {

enum class Scheme { Bjt, Afw, Hhj };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

/// One unknown field of the coupled system. A field is backed by one space
/// (intrinsically vector- or tensor-valued elements) or by several stacked
/// scalar component spaces; `offset` locates it inside the global
/// coefficient vector.
struct Field {
  std::string name;
  std::vector<std::shared_ptr<const FunctionSpace>> comps;
  Index offset = 0;
  Index size = 0;

  Index comp_offset(std::size_t c) const {
    Index off = offset;
    for (std::size_t i = 0; i < c; ++i) off += comps[i]->dofs();
    return off;
  }
  /// Number of scalar value slots (stacked components count individually,
  /// intrinsic elements contribute their component count).
  int value_slots() const {
    int n = 0;
    for (const auto& s : comps) n += s->components();
    return n;
  }
};

/// Assembled port-Hamiltonian pair M de/dt = J e + F(t) with M symmetric and
/// J skew-symmetric by construction (checked at assembly time), plus the
/// free-dof restriction once essential conditions are applied.
struct PlateSystem {
  Scheme scheme = Scheme::Hhj;
  int degree = 1;
  MaterialParams params;
  std::shared_ptr<const RectMesh> rect;
  std::shared_ptr<const TriMesh> tri;

  std::vector<Field> fields;
  Index n_dofs = 0;
  SpMat M, J;

  std::vector<Index> free_dofs;
  std::vector<Index> full_to_free; ///< -1 for eliminated dofs
  SpMat M_free, J_free;

  Index n_free() const { return static_cast<Index>(free_dofs.size()); }
  Index n_cells() const { return rect ? rect->n_cells() : tri->n_cells(); }
  double mesh_h() const { return rect ? rect->h : tri->h; }
  const Field& field(const std::string& name) const;

  VecX restrict_to_free(const VecX& full) const;
  VecX expand_from_free(const VecX& free) const;
};

std::vector<Field> build_spaces(Scheme scheme, std::shared_ptr<const RectMesh> mesh, int degree);
std::vector<Field> build_spaces(Scheme scheme, std::shared_ptr<const TriMesh> mesh, int degree);

PlateSystem assemble_system(Scheme scheme, std::shared_ptr<const RectMesh> mesh, int degree,
                            const MaterialParams& params);
PlateSystem assemble_system(Scheme scheme, std::shared_ptr<const TriMesh> mesh, int degree,
                            const MaterialParams& params);

/// Eliminates the essential dofs of the scheme (boundary normal-normal
/// moments for the thin-plate scheme; nothing for the Mindlin schemes, whose
/// clamped conditions are natural here) and fills the restricted pair.
void apply_essential_bcs(PlateSystem& system);

/// Physical quadrature points/weights of one cell.
struct CellQuad {
  std::vector<Vec2> points;
  VecX weights;
};
CellQuad cell_quadrature(const PlateSystem& system, Index cell, int exactness);

/// Quadrature exactness used for mass/structure blocks and for loads, error
/// norms and projections respectively.
int assembly_exactness(int degree);
int elevated_exactness(int degree);

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;

/// Load vector on the free dofs: (v_w, f) plus, for the Mindlin schemes,
/// (v_theta, tau). Pass tau = nullptr for the thin-plate scheme.
VecX assemble_load(const PlateSystem& system, const ScalarField& f, const VectorField* tau);

/// Evaluates all scalar value slots of a field at a point, in the field's
/// component layout.
using FieldEvaluator = std::function<VecX(const Vec2&)>;

/// Componentwise L2 projection onto one field's (constrained) space;
/// returns field-size coefficients, eliminated dofs zero.
VecX l2_project(const PlateSystem& system, const Field& field, const FieldEvaluator& fn);

/// Full-state projection, one evaluator per field (in field order).
VecX project_state(const PlateSystem& system, const std::vector<FieldEvaluator>& fns);

/// Structural verification of the assembled pair.
struct StructureReport {
  double sym_residual = 0.0;
  double skew_residual = 0.0;
  bool mass_spd = false;          ///< checked for bjt/hhj
  Index multiplier_dim = 0;       ///< afw: multiplier block size
  bool neg_inertia_matches = false;
  std::vector<std::pair<std::string, Index>> field_dims;
  Index free_dim = 0;
  bool pass = false;
};
StructureReport verify_structure(const PlateSystem& system);

/// Coordinate-format text dump, one "row col value" line per entry.
void dump_matrix(std::ostream& os, const SpMat& A);

} // namespace phplate
