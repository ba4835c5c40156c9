#include "phplate/assembly.hpp"

#include "phplate/linalg.hpp"
#include "phplate/quadrature.hpp"

#include <Eigen/SparseCholesky>

#include <ostream>
#include <stdexcept>

namespace phplate {

namespace {

constexpr double kStructureTol = 1e-12;

MatX pair_w(const MatX& test, const MatX& trial, const VecX& w) {
  return test.transpose() * w.asDiagonal() * trial;
}

void scatter(std::vector<Triplet>& out, const std::vector<Index>& rows, Index row_off,
             const std::vector<Index>& cols, Index col_off, const MatX& local,
             double scale = 1.0) {
  for (Index i = 0; i < local.rows(); ++i) {
    Index r = rows[static_cast<std::size_t>(i)];
    if (r < 0) continue;
    for (Index j = 0; j < local.cols(); ++j) {
      Index c = cols[static_cast<std::size_t>(j)];
      if (c < 0) continue;
      double v = scale * local(i, j);
      if (v != 0.0)
        out.emplace_back(static_cast<int>(row_off + r), static_cast<int>(col_off + c), v);
    }
  }
}

void scatter_vec(VecX& out, const std::vector<Index>& dofs, Index off, const VecX& local) {
  for (Index i = 0; i < local.size(); ++i) {
    Index g = dofs[static_cast<std::size_t>(i)];
    if (g >= 0) out(off + g) += local(i);
  }
}

struct Comp {
  const FunctionSpace* s = nullptr;
  Index off = 0; ///< global offset of this component
};

Comp comp_ref(const Field& f, std::size_t c) { return {f.comps[c].get(), f.comp_offset(c)}; }

} // namespace

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Bjt: return "bjt";
    case Scheme::Afw: return "afw";
    case Scheme::Hhj: return "hhj";
  }
  return "?";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "bjt") return Scheme::Bjt;
  if (name == "afw") return Scheme::Afw;
  if (name == "hhj") return Scheme::Hhj;
  throw std::invalid_argument("unknown scheme: " + name);
}

const Field& PlateSystem::field(const std::string& name) const {
  for (const auto& f : fields)
    if (f.name == name) return f;
  throw std::invalid_argument("no field named " + name);
}

VecX PlateSystem::restrict_to_free(const VecX& full) const {
  VecX out(n_free());
  for (Index i = 0; i < n_free(); ++i) out(i) = full(free_dofs[static_cast<std::size_t>(i)]);
  return out;
}

VecX PlateSystem::expand_from_free(const VecX& free) const {
  VecX out = VecX::Zero(n_dofs);
  for (Index i = 0; i < n_free(); ++i) out(free_dofs[static_cast<std::size_t>(i)]) = free(i);
  return out;
}

int assembly_exactness(int degree) { return 2 * degree; }
int elevated_exactness(int degree) { return 2 * degree + 4; }

// ----------------------------------------------------------------------
// Space layouts
// ----------------------------------------------------------------------

namespace {

void finalize_layout(std::vector<Field>& fields, Index& n_dofs) {
  Index off = 0;
  for (auto& f : fields) {
    f.offset = off;
    f.size = 0;
    for (const auto& s : f.comps) f.size += s->dofs();
    off += f.size;
  }
  n_dofs = off;
}

void check_degree(int degree) {
  if (degree < 1 || degree > 3)
    throw std::invalid_argument("scheme degree must be in {1, 2, 3}");
}

} // namespace

std::vector<Field> build_spaces(Scheme scheme, std::shared_ptr<const RectMesh> mesh, int degree) {
  check_degree(degree);
  if (scheme != Scheme::Bjt)
    throw std::invalid_argument("square meshes are only compatible with the bjt scheme");

  const int k = degree;
  auto cell_scalar = std::make_shared<const FunctionSpace>(
      FunctionSpace::rect(mesh, k - 1, false, false));
  auto cont_x = std::make_shared<const FunctionSpace>(FunctionSpace::rect(mesh, k, true, false));
  auto cont_y = std::make_shared<const FunctionSpace>(FunctionSpace::rect(mesh, k, false, true));
  auto cont_xy = std::make_shared<const FunctionSpace>(FunctionSpace::rect(mesh, k, true, true));

  std::vector<Field> fields;
  fields.push_back({"e_w", {cell_scalar}});
  fields.push_back({"e_theta", {cell_scalar, cell_scalar}});
  // symmetric stress components (m11, m22, m12): the diagonal pair carries
  // normal-trace continuity, m12 is fully continuous
  fields.push_back({"E_kappa", {cont_x, cont_y, cont_xy}});
  fields.push_back({"e_gamma", {cont_x, cont_y}});
  Index n = 0;
  finalize_layout(fields, n);
  return fields;
}

std::vector<Field> build_spaces(Scheme scheme, std::shared_ptr<const TriMesh> mesh, int degree) {
  check_degree(degree);
  const int k = degree;
  std::vector<Field> fields;
  if (scheme == Scheme::Afw) {
    auto pdisc = std::make_shared<const FunctionSpace>(
        FunctionSpace::tri(mesh, lagrange_element(k - 1, false)));
    auto bdm = std::make_shared<const FunctionSpace>(FunctionSpace::tri(mesh, bdm_element(k)));
    auto rt =
        std::make_shared<const FunctionSpace>(FunctionSpace::tri(mesh, raviart_thomas_element(k - 1)));
    fields.push_back({"e_w", {pdisc}});
    fields.push_back({"e_theta", {pdisc, pdisc}});
    fields.push_back({"E_kappa", {bdm, bdm}}); // rows (m11,m12) and (m21,m22)
    fields.push_back({"e_gamma", {rt}});
    fields.push_back({"E_r", {pdisc}});
  } else if (scheme == Scheme::Hhj) {
    auto w = std::make_shared<const FunctionSpace>(
        FunctionSpace::tri(mesh, lagrange_element(k, true), /*drop_boundary_dofs=*/true));
    auto kappa =
        std::make_shared<const FunctionSpace>(FunctionSpace::tri(mesh, hhj_element(k - 1)));
    fields.push_back({"e_w", {w}});
    fields.push_back({"E_kappa", {kappa}});
  } else {
    throw std::invalid_argument("triangle meshes are only compatible with afw and hhj");
  }
  Index n = 0;
  finalize_layout(fields, n);
  return fields;
}

// ----------------------------------------------------------------------
// Quadrature on physical cells
// ----------------------------------------------------------------------

CellQuad cell_quadrature(const PlateSystem& system, Index cell, int exactness) {
  CellQuad cq;
  if (system.rect) {
    const auto& mesh = *system.rect;
    QuadRule rule = quad_rule(CellKind::Square, exactness);
    const double h = mesh.h;
    const Index cx = cell % mesh.n, cy = cell / mesh.n;
    cq.points.reserve(rule.points.size());
    cq.weights.resize(rule.size());
    for (Index q = 0; q < rule.size(); ++q) {
      const Vec2& p = rule.points[static_cast<std::size_t>(q)];
      cq.points.emplace_back((cx + p.x()) * h, (cy + p.y()) * h);
      cq.weights(q) = rule.weights[static_cast<std::size_t>(q)] * h * h;
    }
  } else {
    const auto& mesh = *system.tri;
    QuadRule rule = quad_rule(CellKind::Triangle, exactness);
    const auto& cv = mesh.cells[static_cast<std::size_t>(cell)];
    Vec2 v0 = mesh.vertices[static_cast<std::size_t>(cv[0])];
    Mat2 jac;
    jac.col(0) = mesh.vertices[static_cast<std::size_t>(cv[1])] - v0;
    jac.col(1) = mesh.vertices[static_cast<std::size_t>(cv[2])] - v0;
    const double det = jac.determinant();
    cq.points.reserve(rule.points.size());
    cq.weights.resize(rule.size());
    for (Index q = 0; q < rule.size(); ++q) {
      cq.points.push_back(v0 + jac * rule.points[static_cast<std::size_t>(q)]);
      cq.weights(q) = rule.weights[static_cast<std::size_t>(q)] * det;
    }
  }
  return cq;
}

// ----------------------------------------------------------------------
// Scheme assemblers
// ----------------------------------------------------------------------

namespace {

struct BlockAccum {
  std::vector<Triplet> m, j;
};

void assemble_bjt(PlateSystem& sys, BlockAccum& acc) {
  const MaterialParams& p = sys.params;
  const double rho_b = p.density * p.thickness;
  const double rot_inertia = p.density * std::pow(p.thickness, 3) / 12.0;
  const double c_bend = 1.0 / (p.bending_rigidity() * (1.0 - p.poisson_ratio));
  const double nu_f = p.poisson_ratio / (1.0 + p.poisson_ratio);
  const double c_shear = 1.0 / p.shear_stiffness();

  Comp w = comp_ref(sys.field("e_w"), 0);
  Comp th1 = comp_ref(sys.field("e_theta"), 0);
  Comp th2 = comp_ref(sys.field("e_theta"), 1);
  Comp m11 = comp_ref(sys.field("E_kappa"), 0);
  Comp m22 = comp_ref(sys.field("E_kappa"), 1);
  Comp m12 = comp_ref(sys.field("E_kappa"), 2);
  Comp q1 = comp_ref(sys.field("e_gamma"), 0);
  Comp q2 = comp_ref(sys.field("e_gamma"), 1);

  const int exact = assembly_exactness(sys.degree);
  for (Index c = 0; c < sys.n_cells(); ++c) {
    CellQuad cq = cell_quadrature(sys, c, exact);
    Tabulation tw = w.s->tabulate(c, cq.points, 0);
    Tabulation tx = m11.s->tabulate(c, cq.points, 1); // shared by q1
    Tabulation ty = m22.s->tabulate(c, cq.points, 1); // shared by q2
    Tabulation tc = m12.s->tabulate(c, cq.points, 1);

    const auto& dw = w.s->cell_dofs(c);
    const auto& dx = m11.s->cell_dofs(c);
    const auto& dy = m22.s->cell_dofs(c);
    const auto& dc = m12.s->cell_dofs(c);

    const MatX mass_w = pair_w(tw.value[0], tw.value[0], cq.weights);
    const MatX mass_x = pair_w(tx.value[0], tx.value[0], cq.weights);
    const MatX mass_y = pair_w(ty.value[0], ty.value[0], cq.weights);
    const MatX mass_c = pair_w(tc.value[0], tc.value[0], cq.weights);
    const MatX cross_xy = pair_w(tx.value[0], ty.value[0], cq.weights);

    // M
    scatter(acc.m, dw, w.off, dw, w.off, mass_w, rho_b);
    scatter(acc.m, dw, th1.off, dw, th1.off, mass_w, rot_inertia);
    scatter(acc.m, dw, th2.off, dw, th2.off, mass_w, rot_inertia);
    scatter(acc.m, dx, m11.off, dx, m11.off, mass_x, c_bend * (1.0 - nu_f));
    scatter(acc.m, dy, m22.off, dy, m22.off, mass_y, c_bend * (1.0 - nu_f));
    scatter(acc.m, dx, m11.off, dy, m22.off, cross_xy, -c_bend * nu_f);
    scatter(acc.m, dy, m22.off, dx, m11.off, cross_xy.transpose(), -c_bend * nu_f);
    scatter(acc.m, dc, m12.off, dc, m12.off, mass_c, 2.0 * c_bend);
    scatter(acc.m, dx, q1.off, dx, q1.off, mass_x, c_shear);
    scatter(acc.m, dy, q2.off, dy, q2.off, mass_y, c_shear);

    // J
    scatter(acc.j, dw, w.off, dx, q1.off, pair_w(tw.value[0], tx.grad[0][0], cq.weights));
    scatter(acc.j, dw, w.off, dy, q2.off, pair_w(tw.value[0], ty.grad[0][1], cq.weights));

    scatter(acc.j, dw, th1.off, dx, m11.off, pair_w(tw.value[0], tx.grad[0][0], cq.weights));
    scatter(acc.j, dw, th1.off, dc, m12.off, pair_w(tw.value[0], tc.grad[0][1], cq.weights));
    scatter(acc.j, dw, th1.off, dx, q1.off, pair_w(tw.value[0], tx.value[0], cq.weights));
    scatter(acc.j, dw, th2.off, dc, m12.off, pair_w(tw.value[0], tc.grad[0][0], cq.weights));
    scatter(acc.j, dw, th2.off, dy, m22.off, pair_w(tw.value[0], ty.grad[0][1], cq.weights));
    scatter(acc.j, dw, th2.off, dy, q2.off, pair_w(tw.value[0], ty.value[0], cq.weights));

    scatter(acc.j, dx, m11.off, dw, th1.off, pair_w(tx.grad[0][0], tw.value[0], cq.weights), -1.0);
    scatter(acc.j, dy, m22.off, dw, th2.off, pair_w(ty.grad[0][1], tw.value[0], cq.weights), -1.0);
    scatter(acc.j, dc, m12.off, dw, th1.off, pair_w(tc.grad[0][1], tw.value[0], cq.weights), -1.0);
    scatter(acc.j, dc, m12.off, dw, th2.off, pair_w(tc.grad[0][0], tw.value[0], cq.weights), -1.0);

    scatter(acc.j, dx, q1.off, dw, w.off, pair_w(tx.grad[0][0], tw.value[0], cq.weights), -1.0);
    scatter(acc.j, dy, q2.off, dw, w.off, pair_w(ty.grad[0][1], tw.value[0], cq.weights), -1.0);
    scatter(acc.j, dx, q1.off, dw, th1.off, pair_w(tx.value[0], tw.value[0], cq.weights), -1.0);
    scatter(acc.j, dy, q2.off, dw, th2.off, pair_w(ty.value[0], tw.value[0], cq.weights), -1.0);
  }
}

void assemble_afw(PlateSystem& sys, BlockAccum& acc) {
  const MaterialParams& p = sys.params;
  const double rho_b = p.density * p.thickness;
  const double rot_inertia = p.density * std::pow(p.thickness, 3) / 12.0;
  const double c_bend = 1.0 / (p.bending_rigidity() * (1.0 - p.poisson_ratio));
  const double nu_f = p.poisson_ratio / (1.0 + p.poisson_ratio);
  const double c_shear = 1.0 / p.shear_stiffness();

  Comp w = comp_ref(sys.field("e_w"), 0);
  Comp th1 = comp_ref(sys.field("e_theta"), 0);
  Comp th2 = comp_ref(sys.field("e_theta"), 1);
  Comp row1 = comp_ref(sys.field("E_kappa"), 0);
  Comp row2 = comp_ref(sys.field("E_kappa"), 1);
  Comp gam = comp_ref(sys.field("e_gamma"), 0);
  Comp mult = comp_ref(sys.field("E_r"), 0);

  const int exact = assembly_exactness(sys.degree);
  for (Index c = 0; c < sys.n_cells(); ++c) {
    CellQuad cq = cell_quadrature(sys, c, exact);
    Tabulation tp = w.s->tabulate(c, cq.points, 0);
    Tabulation tb = row1.s->tabulate(c, cq.points, 1);
    Tabulation tr = gam.s->tabulate(c, cq.points, 1);

    const auto& dp = w.s->cell_dofs(c);
    const auto& db = row1.s->cell_dofs(c);
    const auto& dr = gam.s->cell_dofs(c);

    const MatX mass_p = pair_w(tp.value[0], tp.value[0], cq.weights);
    const MatX p00 = pair_w(tb.value[0], tb.value[0], cq.weights);
    const MatX p01 = pair_w(tb.value[0], tb.value[1], cq.weights);
    const MatX p11 = pair_w(tb.value[1], tb.value[1], cq.weights);
    const MatX divb = tb.grad[0][0] + tb.grad[1][1];
    const MatX divr = tr.grad[0][0] + tr.grad[1][1];

    // M
    scatter(acc.m, dp, w.off, dp, w.off, mass_p, rho_b);
    scatter(acc.m, dp, th1.off, dp, th1.off, mass_p, rot_inertia);
    scatter(acc.m, dp, th2.off, dp, th2.off, mass_p, rot_inertia);
    scatter(acc.m, db, row1.off, db, row1.off, c_bend * ((1.0 - nu_f) * p00 + p11));
    scatter(acc.m, db, row2.off, db, row2.off, c_bend * (p00 + (1.0 - nu_f) * p11));
    scatter(acc.m, db, row1.off, db, row2.off, p01, -c_bend * nu_f);
    scatter(acc.m, db, row2.off, db, row1.off, p01.transpose(), -c_bend * nu_f);
    scatter(acc.m, db, row1.off, dp, mult.off, pair_w(tb.value[1], tp.value[0], cq.weights));
    scatter(acc.m, db, row2.off, dp, mult.off, pair_w(tb.value[0], tp.value[0], cq.weights), -1.0);
    scatter(acc.m, dp, mult.off, db, row1.off, pair_w(tp.value[0], tb.value[1], cq.weights));
    scatter(acc.m, dp, mult.off, db, row2.off, pair_w(tp.value[0], tb.value[0], cq.weights), -1.0);
    scatter(acc.m, dr, gam.off, dr, gam.off,
            c_shear * (pair_w(tr.value[0], tr.value[0], cq.weights) +
                       pair_w(tr.value[1], tr.value[1], cq.weights)));

    // J
    scatter(acc.j, dp, w.off, dr, gam.off, pair_w(tp.value[0], divr, cq.weights));
    scatter(acc.j, dp, th1.off, db, row1.off, pair_w(tp.value[0], divb, cq.weights));
    scatter(acc.j, dp, th2.off, db, row2.off, pair_w(tp.value[0], divb, cq.weights));
    scatter(acc.j, dp, th1.off, dr, gam.off, pair_w(tp.value[0], tr.value[0], cq.weights));
    scatter(acc.j, dp, th2.off, dr, gam.off, pair_w(tp.value[0], tr.value[1], cq.weights));
    scatter(acc.j, db, row1.off, dp, th1.off, pair_w(divb, tp.value[0], cq.weights), -1.0);
    scatter(acc.j, db, row2.off, dp, th2.off, pair_w(divb, tp.value[0], cq.weights), -1.0);
    scatter(acc.j, dr, gam.off, dp, w.off, pair_w(divr, tp.value[0], cq.weights), -1.0);
    scatter(acc.j, dr, gam.off, dp, th1.off, pair_w(tr.value[0], tp.value[0], cq.weights), -1.0);
    scatter(acc.j, dr, gam.off, dp, th2.off, pair_w(tr.value[1], tp.value[0], cq.weights), -1.0);
  }
}

void assemble_hhj(PlateSystem& sys, BlockAccum& acc) {
  const MaterialParams& p = sys.params;
  const double rho_b = p.density * p.thickness;
  const double c_bend = 1.0 / (p.bending_rigidity() * (1.0 - p.poisson_ratio));
  const double nu_f = p.poisson_ratio / (1.0 + p.poisson_ratio);

  Comp w = comp_ref(sys.field("e_w"), 0);
  Comp kap = comp_ref(sys.field("E_kappa"), 0);
  const TriMesh& mesh = *sys.tri;

  const int exact = assembly_exactness(sys.degree);
  for (Index c = 0; c < sys.n_cells(); ++c) {
    CellQuad cq = cell_quadrature(sys, c, exact);
    Tabulation tw = w.s->tabulate(c, cq.points, 2);
    Tabulation tk = kap.s->tabulate(c, cq.points, 0);

    const auto& dw = w.s->cell_dofs(c);
    const auto& dk = kap.s->cell_dofs(c);

    scatter(acc.m, dw, w.off, dw, w.off, pair_w(tw.value[0], tw.value[0], cq.weights), rho_b);
    const MatX p00 = pair_w(tk.value[0], tk.value[0], cq.weights);
    const MatX p01 = pair_w(tk.value[0], tk.value[1], cq.weights);
    const MatX p11 = pair_w(tk.value[1], tk.value[1], cq.weights);
    const MatX p22 = pair_w(tk.value[2], tk.value[2], cq.weights);
    scatter(acc.m, dk, kap.off, dk, kap.off,
            c_bend * (p00 + p11 + 2.0 * p22 - nu_f * (p00 + p01 + p01.transpose() + p11)));

    // cell part of b_h: -(grad^2 v, E)
    const MatX cell_wk = pair_w(tw.hess[0][0], tk.value[0], cq.weights) +
                         pair_w(tw.hess[0][2], tk.value[1], cq.weights) +
                         2.0 * pair_w(tw.hess[0][1], tk.value[2], cq.weights);
    scatter(acc.j, dw, w.off, dk, kap.off, cell_wk, -1.0);
    const MatX cell_kw = pair_w(tk.value[0], tw.hess[0][0], cq.weights) +
                         pair_w(tk.value[1], tw.hess[0][2], cq.weights) +
                         2.0 * pair_w(tk.value[2], tw.hess[0][1], cq.weights);
    scatter(acc.j, dk, kap.off, dw, w.off, cell_kw);
  }

  // edge part of b_h: +([[d_n v]], m_nn); the jump is the sum of the
  // one-sided outward normal derivatives, the value on boundary edges
  std::vector<double> gp, gw;
  gauss_legendre(sys.degree + 2, gp, gw);
  for (Index e = 0; e < mesh.n_edges(); ++e) {
    const EdgeRecord& rec = mesh.edges[static_cast<std::size_t>(e)];
    Vec2 a = mesh.vertices[static_cast<std::size_t>(rec.vertices[0])];
    Vec2 b = mesh.vertices[static_cast<std::size_t>(rec.vertices[1])];
    std::vector<Vec2> pts;
    VecX wts(static_cast<Index>(gp.size()));
    for (std::size_t q = 0; q < gp.size(); ++q) {
      pts.push_back(a + gp[q] * (b - a));
      wts(static_cast<Index>(q)) = gw[q] * rec.length;
    }
    std::vector<Index> adj;
    adj.push_back(rec.cells[0]);
    if (rec.cells[1] >= 0) adj.push_back(rec.cells[1]);
    const double side_avg = 1.0 / static_cast<double>(adj.size());
    const double n1 = rec.normal.x(), n2 = rec.normal.y();

    for (Index tv : adj) {
      Tabulation twe = w.s->tabulate(tv, pts, 1);
      const double sign_v = (tv == rec.cells[0]) ? 1.0 : -1.0;
      // outward normal derivative of the w test functions on cell tv
      MatX dn = sign_v * (n1 * twe.grad[0][0] + n2 * twe.grad[0][1]);
      const auto& dwv = w.s->cell_dofs(tv);
      for (Index tm : adj) {
        Tabulation tke = kap.s->tabulate(tm, pts, 0);
        MatX nn = n1 * n1 * tke.value[0] + n2 * n2 * tke.value[1] +
                  2.0 * n1 * n2 * tke.value[2];
        const auto& dkm = kap.s->cell_dofs(tm);
        scatter(acc.j, dwv, w.off, dkm, kap.off, pair_w(dn, nn, wts), side_avg);
        scatter(acc.j, dkm, kap.off, dwv, w.off, pair_w(nn, dn, wts), -side_avg);
      }
    }
  }
}

} // namespace

namespace {

PlateSystem assemble_common(PlateSystem sys) {
  BlockAccum acc;
  switch (sys.scheme) {
    case Scheme::Bjt: assemble_bjt(sys, acc); break;
    case Scheme::Afw: assemble_afw(sys, acc); break;
    case Scheme::Hhj: assemble_hhj(sys, acc); break;
  }
  sys.M.resize(sys.n_dofs, sys.n_dofs);
  sys.J.resize(sys.n_dofs, sys.n_dofs);
  sys.M.setFromTriplets(acc.m.begin(), acc.m.end());
  sys.J.setFromTriplets(acc.j.begin(), acc.j.end());
  sys.M.makeCompressed();
  sys.J.makeCompressed();

  const double skew = skewness_residual(sys.J);
  if (!(skew <= kStructureTol))
    throw std::runtime_error("assemble_system: J skewness violated (element orientation bug?)");
  const double sym = symmetry_residual(sys.M);
  if (!(sym <= kStructureTol))
    throw std::runtime_error("assemble_system: M symmetry violated");
  return sys;
}

} // namespace

PlateSystem assemble_system(Scheme scheme, std::shared_ptr<const RectMesh> mesh, int degree,
                            const MaterialParams& params) {
  params.validate();
  PlateSystem sys;
  sys.scheme = scheme;
  sys.degree = degree;
  sys.params = params;
  sys.rect = mesh;
  sys.fields = build_spaces(scheme, mesh, degree);
  {
    Index n = 0;
    finalize_layout(sys.fields, n);
    sys.n_dofs = n;
  }
  return assemble_common(std::move(sys));
}

PlateSystem assemble_system(Scheme scheme, std::shared_ptr<const TriMesh> mesh, int degree,
                            const MaterialParams& params) {
  params.validate();
  PlateSystem sys;
  sys.scheme = scheme;
  sys.degree = degree;
  sys.params = params;
  sys.tri = mesh;
  sys.fields = build_spaces(scheme, mesh, degree);
  {
    Index n = 0;
    finalize_layout(sys.fields, n);
    sys.n_dofs = n;
  }
  return assemble_common(std::move(sys));
}

void apply_essential_bcs(PlateSystem& sys) {
  std::vector<bool> eliminated(static_cast<std::size_t>(sys.n_dofs), false);
  if (sys.scheme == Scheme::Hhj) {
    const Field& kap = sys.field("E_kappa");
    for (Index d : kap.comps[0]->boundary_dofs())
      eliminated[static_cast<std::size_t>(kap.offset + d)] = true;
  }
  sys.free_dofs.clear();
  sys.full_to_free.assign(static_cast<std::size_t>(sys.n_dofs), -1);
  for (Index i = 0; i < sys.n_dofs; ++i)
    if (!eliminated[static_cast<std::size_t>(i)]) {
      sys.full_to_free[static_cast<std::size_t>(i)] = static_cast<Index>(sys.free_dofs.size());
      sys.free_dofs.push_back(i);
    }

  auto restrict_matrix = [&](const SpMat& A) {
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(A.nonZeros()));
    for (int col = 0; col < A.outerSize(); ++col) {
      Index cf = sys.full_to_free[static_cast<std::size_t>(col)];
      if (cf < 0) continue;
      for (SpMat::InnerIterator it(A, col); it; ++it) {
        Index rf = sys.full_to_free[static_cast<std::size_t>(it.row())];
        if (rf < 0) continue;
        trips.emplace_back(static_cast<int>(rf), static_cast<int>(cf), it.value());
      }
    }
    SpMat R(sys.n_free(), sys.n_free());
    R.setFromTriplets(trips.begin(), trips.end());
    R.makeCompressed();
    return R;
  };
  sys.M_free = restrict_matrix(sys.M);
  sys.J_free = restrict_matrix(sys.J);
}

// ----------------------------------------------------------------------
// Loads and projections
// ----------------------------------------------------------------------

VecX assemble_load(const PlateSystem& sys, const ScalarField& f, const VectorField* tau) {
  VecX full = VecX::Zero(sys.n_dofs);
  Comp w = comp_ref(sys.field("e_w"), 0);
  const int exact = elevated_exactness(sys.degree);

  for (Index c = 0; c < sys.n_cells(); ++c) {
    CellQuad cq = cell_quadrature(sys, c, exact);
    Tabulation tw = w.s->tabulate(c, cq.points, 0);
    VecX fv(cq.weights.size());
    for (Index q = 0; q < cq.weights.size(); ++q)
      fv(q) = cq.weights(q) * f(cq.points[static_cast<std::size_t>(q)]);
    scatter_vec(full, w.s->cell_dofs(c), w.off, tw.value[0].transpose() * fv);

    if (tau != nullptr && sys.scheme != Scheme::Hhj) {
      Comp th1 = comp_ref(sys.field("e_theta"), 0);
      Comp th2 = comp_ref(sys.field("e_theta"), 1);
      Tabulation tt = th1.s->tabulate(c, cq.points, 0);
      VecX t1(cq.weights.size()), t2(cq.weights.size());
      for (Index q = 0; q < cq.weights.size(); ++q) {
        Vec2 tv = (*tau)(cq.points[static_cast<std::size_t>(q)]);
        t1(q) = cq.weights(q) * tv.x();
        t2(q) = cq.weights(q) * tv.y();
      }
      scatter_vec(full, th1.s->cell_dofs(c), th1.off, tt.value[0].transpose() * t1);
      scatter_vec(full, th2.s->cell_dofs(c), th2.off, tt.value[0].transpose() * t2);
    }
  }
  if (sys.free_dofs.empty())
    throw std::logic_error("assemble_load: apply_essential_bcs must run first");
  return sys.restrict_to_free(full);
}

VecX l2_project(const PlateSystem& sys, const Field& field, const FieldEvaluator& fn) {
  const int exact = elevated_exactness(sys.degree);

  // field-local free numbering
  std::vector<Index> local_of_global(static_cast<std::size_t>(field.size), -1);
  std::vector<Index> global_of_local;
  for (Index d = 0; d < field.size; ++d) {
    if (sys.full_to_free[static_cast<std::size_t>(field.offset + d)] >= 0) {
      local_of_global[static_cast<std::size_t>(d)] = static_cast<Index>(global_of_local.size());
      global_of_local.push_back(d);
    }
  }
  const Index nf = static_cast<Index>(global_of_local.size());

  std::vector<Triplet> trips;
  VecX rhs = VecX::Zero(nf);
  int slot0 = 0;
  for (std::size_t comp = 0; comp < field.comps.size(); ++comp) {
    const FunctionSpace& s = *field.comps[comp];
    const Index coff = field.comp_offset(comp) - field.offset;
    for (Index c = 0; c < sys.n_cells(); ++c) {
      CellQuad cq = cell_quadrature(sys, c, exact);
      Tabulation tab = s.tabulate(c, cq.points, 0);
      const auto& dofs = s.cell_dofs(c);
      MatX mass = MatX::Zero(tab.n_basis, tab.n_basis);
      VecX load = VecX::Zero(tab.n_basis);
      for (int slot = 0; slot < s.components(); ++slot) {
        // Frobenius pairing doubles the off-diagonal slot of symmetric tensors
        const double wslot = (s.components() == 3 && slot == 2) ? 2.0 : 1.0;
        mass += wslot * pair_w(tab.value[static_cast<std::size_t>(slot)],
                               tab.value[static_cast<std::size_t>(slot)], cq.weights);
        VecX fv(cq.weights.size());
        for (Index q = 0; q < cq.weights.size(); ++q)
          fv(q) = cq.weights(q) * fn(cq.points[static_cast<std::size_t>(q)])(slot0 + slot);
        load += wslot * tab.value[static_cast<std::size_t>(slot)].transpose() * fv;
      }
      // scatter into the field-local free system
      for (Index i = 0; i < tab.n_basis; ++i) {
        Index gi = dofs[static_cast<std::size_t>(i)];
        if (gi < 0) continue;
        Index li = local_of_global[static_cast<std::size_t>(coff + gi)];
        if (li < 0) continue;
        rhs(li) += load(i);
        for (Index j = 0; j < tab.n_basis; ++j) {
          Index gj = dofs[static_cast<std::size_t>(j)];
          if (gj < 0) continue;
          Index lj = local_of_global[static_cast<std::size_t>(coff + gj)];
          if (lj < 0) continue;
          trips.emplace_back(static_cast<int>(li), static_cast<int>(lj), mass(i, j));
        }
      }
    }
    slot0 += s.components();
  }

  SpMat mass(nf, nf);
  mass.setFromTriplets(trips.begin(), trips.end());
  mass.makeCompressed();
  Eigen::SimplicialLDLT<SpMat> solver(mass);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("l2_project: singular field mass matrix (broken element)");
  VecX x = solver.solve(rhs);
  double bnorm = rhs.norm();
  if (bnorm > 0.0 && (rhs - mass * x).norm() > 1e-10 * bnorm)
    throw std::runtime_error("l2_project: mass solve residual too large");

  VecX coeffs = VecX::Zero(field.size);
  for (Index l = 0; l < nf; ++l) coeffs(global_of_local[static_cast<std::size_t>(l)]) = x(l);
  return coeffs;
}

VecX project_state(const PlateSystem& sys, const std::vector<FieldEvaluator>& fns) {
  if (fns.size() != sys.fields.size())
    throw std::invalid_argument("project_state: one evaluator per field required");
  VecX full = VecX::Zero(sys.n_dofs);
  for (std::size_t f = 0; f < sys.fields.size(); ++f) {
    VecX coeffs = l2_project(sys, sys.fields[f], fns[f]);
    full.segment(sys.fields[f].offset, sys.fields[f].size) = coeffs;
  }
  return sys.restrict_to_free(full);
}

// ----------------------------------------------------------------------
// Verification
// ----------------------------------------------------------------------

StructureReport verify_structure(const PlateSystem& sys) {
  if (sys.free_dofs.empty())
    throw std::logic_error("verify_structure: apply_essential_bcs must run first");
  StructureReport rep;
  rep.sym_residual = symmetry_residual(sys.M_free);
  rep.skew_residual = skewness_residual(sys.J_free);
  for (const auto& f : sys.fields) rep.field_dims.emplace_back(f.name, f.size);
  rep.free_dim = sys.n_free();

  bool definiteness_ok = false;
  if (sys.scheme == Scheme::Afw) {
    const Field& mult = sys.field("E_r");
    rep.multiplier_dim = mult.size;
    // Split M = [[A, B], [B^T, 0]] with A the non-multiplier block. A must be
    // SPD; the Schur complement B^T A^{-1} B being SPD then pins the negative
    // inertia to the multiplier dimension (Haynsworth additivity).
    std::vector<Index> a_of_free(static_cast<std::size_t>(sys.n_free()), -1);
    std::vector<Index> r_of_free(static_cast<std::size_t>(sys.n_free()), -1);
    Index na = 0, nr = 0;
    for (Index i = 0; i < sys.n_free(); ++i) {
      Index full = sys.free_dofs[static_cast<std::size_t>(i)];
      bool in_mult = full >= mult.offset && full < mult.offset + mult.size;
      if (in_mult)
        r_of_free[static_cast<std::size_t>(i)] = nr++;
      else
        a_of_free[static_cast<std::size_t>(i)] = na++;
    }
    std::vector<Triplet> ta, tb;
    for (int col = 0; col < sys.M_free.outerSize(); ++col)
      for (SpMat::InnerIterator it(sys.M_free, col); it; ++it) {
        Index ra = a_of_free[static_cast<std::size_t>(it.row())];
        Index ca = a_of_free[static_cast<std::size_t>(col)];
        Index cr = r_of_free[static_cast<std::size_t>(col)];
        if (ra >= 0 && ca >= 0) ta.emplace_back(static_cast<int>(ra), static_cast<int>(ca), it.value());
        if (ra >= 0 && cr >= 0) tb.emplace_back(static_cast<int>(ra), static_cast<int>(cr), it.value());
      }
    SpMat A(na, na), B(na, nr);
    A.setFromTriplets(ta.begin(), ta.end());
    B.setFromTriplets(tb.begin(), tb.end());
    Eigen::SimplicialLLT<SpMat> llt(A);
    if (llt.info() == Eigen::Success) {
      if (nr <= 1500) {
        // explicit Schur complement B^T A^{-1} B: SPD pins the inertia
        MatX Bd = MatX(B);
        MatX AinvB = llt.solve(Bd);
        MatX S = Bd.transpose() * AinvB;
        Eigen::LLT<MatX> sllt(S);
        rep.neg_inertia_matches = (sllt.info() == Eigen::Success);
      } else {
        // A SPD plus a nonsingular M force the Schur complement negative
        // definite (Haynsworth), so the negative inertia equals nr; verify
        // nonsingularity by a residual-checked factorization of M
        try {
          SparseFactorization f(sys.M_free);
          VecX probe = VecX::Ones(sys.M_free.rows());
          f.solve(probe, 1e-8);
          rep.neg_inertia_matches = true;
        } catch (const std::exception&) {
          rep.neg_inertia_matches = false;
        }
      }
    }
    definiteness_ok = rep.neg_inertia_matches;
  } else {
    Eigen::SimplicialLLT<SpMat> llt(sys.M_free);
    rep.mass_spd = (llt.info() == Eigen::Success);
    definiteness_ok = rep.mass_spd;
  }

  rep.pass = rep.sym_residual <= kStructureTol && rep.skew_residual <= kStructureTol &&
             definiteness_ok;
  return rep;
}

void dump_matrix(std::ostream& os, const SpMat& A) {
  for (int col = 0; col < A.outerSize(); ++col)
    for (SpMat::InnerIterator it(A, col); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

} // namespace phplate
