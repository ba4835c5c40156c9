#include "phplate/spaces.hpp"

#include "phplate/assembly.hpp"

#include "doctest.h"

#include <set>

using namespace phplate;

TEST_CASE("global dof counts of triangle spaces") {
  auto mesh = std::make_shared<const TriMesh>(build_tri_grid(2));
  // TriMesh(2): 9 vertices, 16 edges, 8 cells
  CHECK(FunctionSpace::tri(mesh, lagrange_element(1, true)).dofs() == 9);
  CHECK(FunctionSpace::tri(mesh, lagrange_element(2, true)).dofs() == 9 + 16);
  CHECK(FunctionSpace::tri(mesh, lagrange_element(0, false)).dofs() == 8);
  CHECK(FunctionSpace::tri(mesh, lagrange_element(1, false)).dofs() == 24);
  CHECK(FunctionSpace::tri(mesh, raviart_thomas_element(0)).dofs() == 16);
  CHECK(FunctionSpace::tri(mesh, raviart_thomas_element(1)).dofs() == 2 * 16 + 2 * 8);
  CHECK(FunctionSpace::tri(mesh, bdm_element(1)).dofs() == 32);
  CHECK(FunctionSpace::tri(mesh, hhj_element(0)).dofs() == 16);
  CHECK(FunctionSpace::tri(mesh, hhj_element(1)).dofs() == 2 * 16 + 3 * 8);

  // single interior vertex once boundary dofs are dropped
  CHECK(FunctionSpace::tri(mesh, lagrange_element(1, true), true).dofs() == 1);
}

TEST_CASE("boundary dof bookkeeping") {
  auto mesh = std::make_shared<const TriMesh>(build_tri_grid(2));
  FunctionSpace hhj = FunctionSpace::tri(mesh, hhj_element(0));
  // 8 of the 16 edges are on the boundary
  CHECK(hhj.boundary_dofs().size() == 8);
  FunctionSpace lag = FunctionSpace::tri(mesh, lagrange_element(1, true));
  CHECK(lag.boundary_dofs().size() == 8);
  FunctionSpace constrained = FunctionSpace::tri(mesh, lagrange_element(1, true), true);
  CHECK(constrained.boundary_dofs().empty());
}

TEST_CASE("shared dofs appear in the maps of all adjacent cells") {
  auto mesh = std::make_shared<const TriMesh>(build_tri_grid(3));
  for (auto spec : {lagrange_element(2, true), raviart_thomas_element(1), bdm_element(2),
                    hhj_element(1)}) {
    FunctionSpace space = FunctionSpace::tri(mesh, spec);
    // every dof is referenced at least once
    std::vector<int> refs(static_cast<std::size_t>(space.dofs()), 0);
    for (Index c = 0; c < space.n_cells(); ++c)
      for (Index g : space.cell_dofs(c))
        if (g >= 0) ++refs[static_cast<std::size_t>(g)];
    for (int r : refs) CHECK(r >= 1);

    // interior-edge dofs are referenced by exactly the two adjacent cells
    const int per_edge = tri_dofs_per_edge(spec.family, spec.order);
    if (per_edge == 0) continue;
    for (Index e = 0; e < mesh->n_edges(); ++e) {
      const EdgeRecord& rec = mesh->edges[static_cast<std::size_t>(e)];
      if (rec.boundary) continue;
      std::set<Index> a(space.cell_dofs(rec.cells[0]).begin(),
                        space.cell_dofs(rec.cells[0]).end());
      std::set<Index> b(space.cell_dofs(rec.cells[1]).begin(),
                        space.cell_dofs(rec.cells[1]).end());
      int shared = 0;
      for (Index g : a)
        if (g >= 0 && b.count(g)) ++shared;
      CHECK(shared >= per_edge);
    }
  }
}

TEST_CASE("rect tensor space dimensions") {
  auto mesh = std::make_shared<const RectMesh>(build_rect_grid(2));
  CHECK(FunctionSpace::rect(mesh, 0, false, false).dofs() == 4);
  CHECK(FunctionSpace::rect(mesh, 1, true, true).dofs() == 9);
  // per-cell dimension of the degree-1 tensor space spans {1, x, y, xy}
  CHECK(FunctionSpace::rect(mesh, 1, true, true).cell_dofs(0).size() == 4);
  CHECK(FunctionSpace::rect(mesh, 1, true, false).dofs() == 3 * 4);
  CHECK(FunctionSpace::rect(mesh, 2, true, false).dofs() == 5 * 6);
  CHECK(rect_tensor_dim(32, 2, true) == 65);
  CHECK_THROWS(FunctionSpace::rect(mesh, 0, true, false));
}

TEST_CASE("rect tensor continuity across the advertised direction") {
  auto mesh = std::make_shared<const RectMesh>(build_rect_grid(2));
  FunctionSpace sx = FunctionSpace::rect(mesh, 1, true, false); // continuous in x only
  // cells 0 and 1 share the vertical edge x = 0.5
  std::set<Index> c0(sx.cell_dofs(0).begin(), sx.cell_dofs(0).end());
  int shared01 = 0;
  for (Index g : sx.cell_dofs(1))
    if (c0.count(g)) ++shared01;
  CHECK(shared01 == 2);
  // cells 0 and 2 share a horizontal edge: discontinuous in y, no shared dofs
  int shared02 = 0;
  for (Index g : sx.cell_dofs(2))
    if (c0.count(g)) ++shared02;
  CHECK(shared02 == 0);
}

TEST_CASE("rect tabulation: partition of unity and derivative of x") {
  auto mesh = std::make_shared<const RectMesh>(build_rect_grid(3));
  FunctionSpace s = FunctionSpace::rect(mesh, 2, true, true);
  std::vector<Vec2> pts = {Vec2(0.4, 0.55), Vec2(0.35, 0.6)};
  Tabulation tab = s.tabulate(4, pts, 1); // cell (1,1)
  for (Index q = 0; q < tab.n_points; ++q) {
    CHECK(tab.value[0].row(q).sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tab.grad[0][0].row(q).sum() == doctest::Approx(0.0).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("scheme space layouts match the hand counted dimensions") {
  auto tri2 = std::make_shared<const TriMesh>(build_tri_grid(2));

  auto hhj = build_spaces(Scheme::Hhj, tri2, 1);
  CHECK(hhj[0].name == "e_w");
  CHECK(hhj[0].size == 1);
  CHECK(hhj[1].name == "E_kappa");
  CHECK(hhj[1].size == 16);

  auto afw = build_spaces(Scheme::Afw, tri2, 1);
  CHECK(afw[0].size == 8);   // e_w
  CHECK(afw[1].size == 16);  // e_theta
  CHECK(afw[2].size == 64);  // E_kappa, two BDM1 rows of 32
  CHECK(afw[3].size == 16);  // e_gamma, RT0
  CHECK(afw[4].size == 8);   // E_r

  auto rect2 = std::make_shared<const RectMesh>(build_rect_grid(2));
  auto bjt = build_spaces(Scheme::Bjt, rect2, 1);
  CHECK(bjt[0].size == 4);            // e_w: one constant per cell
  CHECK(bjt[1].size == 8);            // e_theta
  CHECK(bjt[2].size == 12 + 12 + 9);  // m11, m22, m12 (m12 = continuous Q1 = 9)
  CHECK(bjt[3].size == 24);           // e_gamma
}

TEST_CASE("closed-form dof counting formulas across degrees") {
  for (int n : {2, 4})
    for (int k : {1, 2, 3}) {
      auto tri = std::make_shared<const TriMesh>(build_tri_grid(n));
      const Index nv = tri->n_vertices(), ne = tri->n_edges(), nc = tri->n_cells();

      auto afw = build_spaces(Scheme::Afw, tri, k);
      CHECK(afw[0].size == nc * k * (k + 1) / 2);
      CHECK(afw[2].size == 2 * (ne * (k + 1) + nc * (k + 1) * (k - 1)));
      CHECK(afw[3].size == ne * k + nc * k * (k - 1));

      auto hhj = build_spaces(Scheme::Hhj, tri, k);
      const Index nbv = 4 * n, nbe = 4 * n;
      CHECK(hhj[0].size == (nv - nbv) + (ne - nbe) * (k - 1) + nc * (k - 1) * (k - 2) / 2);
      CHECK(hhj[1].size == ne * k + nc * 3 * k * (k - 1) / 2);

      auto rect = std::make_shared<const RectMesh>(build_rect_grid(n));
      auto bjt = build_spaces(Scheme::Bjt, rect, k);
      CHECK(bjt[0].size == static_cast<Index>(n) * n * k * k);
      CHECK(bjt[2].size == 2 * (static_cast<Index>(n) * k + 1) * n * (k + 1) +
                               (static_cast<Index>(n) * k + 1) * (static_cast<Index>(n) * k + 1));
    }
}

TEST_CASE("scheme/mesh compatibility is enforced") {
  auto tri = std::make_shared<const TriMesh>(build_tri_grid(2));
  auto rect = std::make_shared<const RectMesh>(build_rect_grid(2));
  CHECK_THROWS(build_spaces(Scheme::Bjt, tri, 1));
  CHECK_THROWS(build_spaces(Scheme::Afw, rect, 1));
  CHECK_THROWS(build_spaces(Scheme::Hhj, rect, 1));
  CHECK_THROWS(build_spaces(Scheme::Hhj, tri, 0));
  CHECK_THROWS(build_spaces(Scheme::Hhj, tri, 4));
}
