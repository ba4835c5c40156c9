#include "phplate/elements.hpp"

#include "phplate/quadrature.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace phplate {

namespace {

// ----------------------------------------------------------------------
// Prime basis: scaled-centered monomials xi^i eta^j, xi = (x - center)/scale.
// Every family's polynomial space is spanned by primes whose components are
// plain monomials (the Raviart-Thomas radial primes xi*m~ included, since
// xi * xi^i eta^j is again a monomial).
// ----------------------------------------------------------------------

struct CompMono {
  int comp;
  int i, j;
};

struct Prime {
  std::vector<CompMono> terms; // one or two active components
};

std::vector<std::pair<int, int>> monomials_up_to(int degree) {
  std::vector<std::pair<int, int>> out;
  for (int t = 0; t <= degree; ++t)
    for (int i = t; i >= 0; --i) out.emplace_back(i, t - i);
  return out;
}

std::vector<Prime> prime_basis(TriFamily family, int order) {
  std::vector<Prime> primes;
  switch (family) {
    case TriFamily::LagrangeCont:
    case TriFamily::LagrangeDisc:
      for (auto [i, j] : monomials_up_to(order)) primes.push_back({{{0, i, j}}});
      break;
    case TriFamily::BrezziDouglasMarini:
      for (int c = 0; c < 2; ++c)
        for (auto [i, j] : monomials_up_to(order)) primes.push_back({{{c, i, j}}});
      break;
    case TriFamily::RaviartThomas:
      for (int c = 0; c < 2; ++c)
        for (auto [i, j] : monomials_up_to(order)) primes.push_back({{{c, i, j}}});
      for (int i = order; i >= 0; --i) {
        // xihat * (xi^i eta^(order-i))
        int j = order - i;
        primes.push_back({{{0, i + 1, j}, {1, i, j + 1}}});
      }
      break;
    case TriFamily::HellanHerrmannJohnson:
      for (int c = 0; c < 3; ++c)
        for (auto [i, j] : monomials_up_to(order)) primes.push_back({{{c, i, j}}});
      break;
  }
  return primes;
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

struct MonoVal {
  double v = 0, vx = 0, vy = 0, vxx = 0, vxy = 0, vyy = 0;
};

MonoVal mono_eval(int i, int j, const Vec2& xi, double inv_s, int deriv) {
  MonoVal m;
  const double px = ipow(xi.x(), i), py = ipow(xi.y(), j);
  m.v = px * py;
  if (deriv >= 1) {
    m.vx = (i > 0 ? i * ipow(xi.x(), i - 1) * py : 0.0) * inv_s;
    m.vy = (j > 0 ? j * ipow(xi.y(), j - 1) * px : 0.0) * inv_s;
  }
  if (deriv >= 2) {
    m.vxx = (i > 1 ? i * (i - 1) * ipow(xi.x(), i - 2) * py : 0.0) * inv_s * inv_s;
    m.vyy = (j > 1 ? j * (j - 1) * ipow(xi.y(), j - 2) * px : 0.0) * inv_s * inv_s;
    m.vxy = (i > 0 && j > 0 ? i * j * ipow(xi.x(), i - 1) * ipow(xi.y(), j - 1) : 0.0) *
            inv_s * inv_s;
  }
  return m;
}

// ----------------------------------------------------------------------
// Dof functionals
// ----------------------------------------------------------------------

struct Functional {
  enum class Kind { Point, EdgeNormal, EdgeNN, InteriorComp, InteriorGrad, InteriorCurlBubble };
  Kind kind = Kind::Point;
  int edge = -1;
  int legendre = 0;
  Vec2 point = Vec2::Zero();
  int comp = 0;
  int mi = 0, mj = 0;
};

Vec2 lattice_point(const TriCellContext& ctx, int bi, int bj, int k) {
  return ctx.v[0] + (static_cast<double>(bi) / k) * (ctx.v[1] - ctx.v[0]) +
         (static_cast<double>(bj) / k) * (ctx.v[2] - ctx.v[0]);
}

std::vector<Functional> build_functionals(TriFamily family, int order,
                                          const TriCellContext& ctx) {
  std::vector<Functional> fns;
  switch (family) {
    case TriFamily::LagrangeCont: {
      const int k = order;
      for (int v = 0; v < 3; ++v) fns.push_back({Functional::Kind::Point, -1, 0, ctx.v[v]});
      for (int e = 0; e < 3; ++e) {
        const EdgeFrame& ef = ctx.edge[e];
        for (int i = 1; i < k; ++i) {
          Vec2 p = ef.a + (static_cast<double>(i) / k) * (ef.b - ef.a);
          fns.push_back({Functional::Kind::Point, -1, 0, p});
        }
      }
      for (int bj = 1; bj < k; ++bj)
        for (int bi = 1; bi + bj <= k - 1; ++bi)
          fns.push_back({Functional::Kind::Point, -1, 0, lattice_point(ctx, bi, bj, k)});
      break;
    }
    case TriFamily::LagrangeDisc: {
      const int k = order;
      if (k == 0) {
        fns.push_back({Functional::Kind::Point, -1, 0, (ctx.v[0] + ctx.v[1] + ctx.v[2]) / 3.0});
      } else {
        for (int bj = 0; bj <= k; ++bj)
          for (int bi = 0; bi + bj <= k; ++bi)
            fns.push_back({Functional::Kind::Point, -1, 0, lattice_point(ctx, bi, bj, k)});
      }
      break;
    }
    case TriFamily::RaviartThomas: {
      for (int e = 0; e < 3; ++e)
        for (int i = 0; i <= order; ++i) {
          Functional f;
          f.kind = Functional::Kind::EdgeNormal;
          f.edge = e;
          f.legendre = i;
          fns.push_back(f);
        }
      for (auto [mi, mj] : monomials_up_to(order - 1))
        for (int c = 0; c < 2; ++c) {
          Functional f;
          f.kind = Functional::Kind::InteriorComp;
          f.comp = c;
          f.mi = mi;
          f.mj = mj;
          fns.push_back(f);
        }
      break;
    }
    case TriFamily::BrezziDouglasMarini: {
      for (int e = 0; e < 3; ++e)
        for (int i = 0; i <= order; ++i) {
          Functional f;
          f.kind = Functional::Kind::EdgeNormal;
          f.edge = e;
          f.legendre = i;
          fns.push_back(f);
        }
      for (auto [mi, mj] : monomials_up_to(order - 1))
        if (mi + mj >= 1) {
          Functional f;
          f.kind = Functional::Kind::InteriorGrad;
          f.mi = mi;
          f.mj = mj;
          fns.push_back(f);
        }
      for (auto [mi, mj] : monomials_up_to(order - 2)) {
        Functional f;
        f.kind = Functional::Kind::InteriorCurlBubble;
        f.mi = mi;
        f.mj = mj;
        fns.push_back(f);
      }
      break;
    }
    case TriFamily::HellanHerrmannJohnson: {
      for (int e = 0; e < 3; ++e)
        for (int i = 0; i <= order; ++i) {
          Functional f;
          f.kind = Functional::Kind::EdgeNN;
          f.edge = e;
          f.legendre = i;
          fns.push_back(f);
        }
      for (auto [mi, mj] : monomials_up_to(order - 1))
        for (int c = 0; c < 3; ++c) {
          Functional f;
          f.kind = Functional::Kind::InteriorComp;
          f.comp = c;
          f.mi = mi;
          f.mj = mj;
          fns.push_back(f);
        }
      break;
    }
  }
  return fns;
}

/// Barycentric coordinates as affine functions a + b*x + c*y, one column per
/// vertex.
Eigen::Matrix3d barycentric_coeffs(const TriCellContext& ctx) {
  Eigen::Matrix3d A;
  for (int i = 0; i < 3; ++i) A.row(i) << 1.0, ctx.v[i].x(), ctx.v[i].y();
  return A.inverse();
}

double apply_functional(const Functional& f, const TriCellContext& ctx,
                        const std::function<VecX(const Vec2&)>& fn, int order) {
  switch (f.kind) {
    case Functional::Kind::Point:
      return fn(f.point)(0);
    case Functional::Kind::EdgeNormal:
    case Functional::Kind::EdgeNN: {
      const EdgeFrame& ef = ctx.edge[f.edge];
      std::vector<double> gp, gw;
      gauss_legendre(order + 2, gp, gw);
      double acc = 0.0;
      for (std::size_t q = 0; q < gp.size(); ++q) {
        Vec2 x = ef.a + gp[q] * (ef.b - ef.a);
        VecX val = fn(x);
        double probe;
        if (f.kind == Functional::Kind::EdgeNormal) {
          probe = val(0) * ef.normal.x() + val(1) * ef.normal.y();
        } else {
          // components (11, 22, 12)
          probe = ef.normal.x() * ef.normal.x() * val(0) +
                  ef.normal.y() * ef.normal.y() * val(1) +
                  2.0 * ef.normal.x() * ef.normal.y() * val(2);
        }
        acc += gw[q] * probe * legendre(f.legendre, 2.0 * gp[q] - 1.0);
      }
      return acc;
    }
    case Functional::Kind::InteriorComp:
    case Functional::Kind::InteriorGrad:
    case Functional::Kind::InteriorCurlBubble: {
      QuadRule rule = quad_rule(CellKind::Triangle, 2 * order + 2);
      Mat2 J;
      J.col(0) = ctx.v[1] - ctx.v[0];
      J.col(1) = ctx.v[2] - ctx.v[0];
      Eigen::Matrix3d bary = Eigen::Matrix3d::Zero();
      if (f.kind == Functional::Kind::InteriorCurlBubble) bary = barycentric_coeffs(ctx);
      const double inv_s = 1.0 / ctx.scale;
      double acc = 0.0;
      for (Index q = 0; q < rule.size(); ++q) {
        Vec2 x = ctx.v[0] + J * rule.points[static_cast<std::size_t>(q)];
        VecX val = fn(x);
        Vec2 xi = (x - ctx.center) * inv_s;
        double contrib = 0.0;
        if (f.kind == Functional::Kind::InteriorComp) {
          contrib = val(f.comp) * mono_eval(f.mi, f.mj, xi, inv_s, 0).v;
        } else if (f.kind == Functional::Kind::InteriorGrad) {
          MonoVal m = mono_eval(f.mi, f.mj, xi, inv_s, 1);
          contrib = val(0) * m.vx + val(1) * m.vy;
        } else {
          // curl(b*q) = (d_y(bq), -d_x(bq)), b the cubic bubble
          double b = 1.0, bx = 0.0, by = 0.0;
          double lam[3], lamx[3], lamy[3];
          for (int i = 0; i < 3; ++i) {
            lam[i] = bary(0, i) + bary(1, i) * x.x() + bary(2, i) * x.y();
            lamx[i] = bary(1, i);
            lamy[i] = bary(2, i);
          }
          b = lam[0] * lam[1] * lam[2];
          bx = lamx[0] * lam[1] * lam[2] + lam[0] * lamx[1] * lam[2] + lam[0] * lam[1] * lamx[2];
          by = lamy[0] * lam[1] * lam[2] + lam[0] * lamy[1] * lam[2] + lam[0] * lam[1] * lamy[2];
          MonoVal m = mono_eval(f.mi, f.mj, xi, inv_s, 1);
          double sx = bx * m.v + b * m.vx;
          double sy = by * m.v + b * m.vy;
          contrib = val(0) * sy - val(1) * sx;
        }
        // (1/|T|) * integral: reference weights sum to 1/2 and |T| = det/2,
        // so the Jacobian cancels up to the factor 2.
        acc += 2.0 * rule.weights[static_cast<std::size_t>(q)] * contrib;
      }
      return acc;
    }
  }
  return 0.0;
}

std::function<VecX(const Vec2&)> prime_as_function(const Prime& p, const TriCellContext& ctx,
                                                   int n_comp) {
  const double inv_s = 1.0 / ctx.scale;
  const Vec2 center = ctx.center;
  return [p, center, inv_s, n_comp](const Vec2& x) {
    VecX out = VecX::Zero(n_comp);
    Vec2 xi = (x - center) * inv_s;
    for (const auto& t : p.terms) out(t.comp) += mono_eval(t.i, t.j, xi, inv_s, 0).v;
    return out;
  };
}

} // namespace

// ----------------------------------------------------------------------
// Family metadata
// ----------------------------------------------------------------------

ElementSpec lagrange_element(int degree, bool continuous) {
  if (continuous && degree < 1)
    throw std::invalid_argument("lagrange_element: continuous needs degree >= 1");
  if (!continuous && degree < 0)
    throw std::invalid_argument("lagrange_element: degree must be >= 0");
  return {continuous ? TriFamily::LagrangeCont : TriFamily::LagrangeDisc, degree};
}

ElementSpec raviart_thomas_element(int order) {
  if (order < 0) throw std::invalid_argument("raviart_thomas_element: order must be >= 0");
  return {TriFamily::RaviartThomas, order};
}

ElementSpec bdm_element(int order) {
  if (order < 1) throw std::invalid_argument("bdm_element: order must be >= 1");
  return {TriFamily::BrezziDouglasMarini, order};
}

ElementSpec hhj_element(int order) {
  if (order < 0) throw std::invalid_argument("hhj_element: order must be >= 0");
  return {TriFamily::HellanHerrmannJohnson, order};
}

int tri_family_dim(TriFamily family, int order) {
  switch (family) {
    case TriFamily::LagrangeCont:
    case TriFamily::LagrangeDisc:
      return (order + 1) * (order + 2) / 2;
    case TriFamily::RaviartThomas:
      return (order + 1) * (order + 3);
    case TriFamily::BrezziDouglasMarini:
      return (order + 1) * (order + 2);
    case TriFamily::HellanHerrmannJohnson:
      return 3 * (order + 1) * (order + 2) / 2;
  }
  return 0;
}

int tri_family_components(TriFamily family) {
  switch (family) {
    case TriFamily::LagrangeCont:
    case TriFamily::LagrangeDisc:
      return 1;
    case TriFamily::RaviartThomas:
    case TriFamily::BrezziDouglasMarini:
      return 2;
    case TriFamily::HellanHerrmannJohnson:
      return 3;
  }
  return 0;
}

int tri_dofs_per_vertex(TriFamily family, int) {
  return family == TriFamily::LagrangeCont ? 1 : 0;
}

int tri_dofs_per_edge(TriFamily family, int order) {
  switch (family) {
    case TriFamily::LagrangeCont:
      return order - 1;
    case TriFamily::LagrangeDisc:
      return 0;
    case TriFamily::RaviartThomas:
    case TriFamily::BrezziDouglasMarini:
    case TriFamily::HellanHerrmannJohnson:
      return order + 1;
  }
  return 0;
}

int tri_dofs_per_cell(TriFamily family, int order) {
  return tri_family_dim(family, order) - 3 * tri_dofs_per_vertex(family, order) -
         3 * tri_dofs_per_edge(family, order);
}

std::vector<DofKey> tri_dof_keys(TriFamily family, int order) {
  std::vector<DofKey> keys;
  const int pv = tri_dofs_per_vertex(family, order);
  const int pe = tri_dofs_per_edge(family, order);
  const int pc = tri_dofs_per_cell(family, order);
  for (int v = 0; v < 3; ++v)
    for (int i = 0; i < pv; ++i) keys.push_back({DofKey::Entity::Vertex, v, i});
  for (int e = 0; e < 3; ++e)
    for (int i = 0; i < pe; ++i) keys.push_back({DofKey::Entity::Edge, e, i});
  for (int i = 0; i < pc; ++i) keys.push_back({DofKey::Entity::Cell, -1, i});
  return keys;
}

// ----------------------------------------------------------------------
// Cell contexts
// ----------------------------------------------------------------------

TriCellContext tri_context(const TriMesh& mesh, Index cell) {
  TriCellContext ctx;
  const auto& cv = mesh.cells.at(static_cast<std::size_t>(cell));
  for (int i = 0; i < 3; ++i) ctx.v[i] = mesh.vertices[static_cast<std::size_t>(cv[i])];
  for (int e = 0; e < 3; ++e) {
    const EdgeRecord& rec = mesh.edges[static_cast<std::size_t>(mesh.cell_edges[cell][e])];
    EdgeFrame f;
    f.a = mesh.vertices[static_cast<std::size_t>(rec.vertices[0])];
    f.b = mesh.vertices[static_cast<std::size_t>(rec.vertices[1])];
    f.normal = rec.normal;
    f.length = rec.length;
    ctx.edge[e] = f;
  }
  ctx.center = (ctx.v[0] + ctx.v[1] + ctx.v[2]) / 3.0;
  ctx.scale = std::max({ctx.edge[0].length, ctx.edge[1].length, ctx.edge[2].length});
  Mat2 J;
  J.col(0) = ctx.v[1] - ctx.v[0];
  J.col(1) = ctx.v[2] - ctx.v[0];
  ctx.area = 0.5 * J.determinant();
  return ctx;
}

TriCellContext reference_tri_context() {
  TriCellContext ctx;
  ctx.v = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
  auto frame = [](const Vec2& a, const Vec2& b, const Vec2& opposite) {
    EdgeFrame f;
    f.a = a;
    f.b = b;
    f.length = (b - a).norm();
    Vec2 t = (b - a) / f.length;
    f.normal = Vec2(t.y(), -t.x());
    Vec2 mid = 0.5 * (a + b);
    if (f.normal.dot(mid - opposite) < 0.0) f.normal = -f.normal;
    return f;
  };
  // endpoints ordered lexicographically, normals outward
  ctx.edge[0] = frame(Vec2(0, 1), Vec2(1, 0), Vec2(0, 0));
  ctx.edge[1] = frame(Vec2(0, 0), Vec2(0, 1), Vec2(1, 0));
  ctx.edge[2] = frame(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1));
  ctx.center = Vec2(1.0 / 3.0, 1.0 / 3.0);
  ctx.scale = std::sqrt(2.0);
  ctx.area = 0.5;
  return ctx;
}

// ----------------------------------------------------------------------
// TriBasis
// ----------------------------------------------------------------------

TriBasis::TriBasis(TriFamily family, int order, const TriCellContext& ctx)
    : family_(family), order_(order), ctx_(ctx) {
  const int n = tri_family_dim(family, order);
  const int nc = tri_family_components(family);
  const auto primes = prime_basis(family, order);
  const auto fns = build_functionals(family, order, ctx);
  if (static_cast<int>(primes.size()) != n || static_cast<int>(fns.size()) != n)
    throw std::logic_error("TriBasis: prime/functional count mismatch");

  MatX V(n, n);
  for (int p = 0; p < n; ++p) {
    auto fp = prime_as_function(primes[static_cast<std::size_t>(p)], ctx, nc);
    for (int j = 0; j < n; ++j)
      V(j, p) = apply_functional(fns[static_cast<std::size_t>(j)], ctx, fp, order);
  }
  Eigen::FullPivLU<MatX> lu(V);
  if (!lu.isInvertible())
    throw std::runtime_error("TriBasis: singular dof/prime Vandermonde (broken element)");
  coeff_ = lu.inverse();
}

Tabulation TriBasis::tabulate(const std::vector<Vec2>& points, int deriv_order) const {
  if (deriv_order < 0 || deriv_order > 2)
    throw std::invalid_argument("tabulate: derivative order must be in {0,1,2}");
  if (deriv_order == 2 && n_comp() != 1)
    throw std::invalid_argument("tabulate: second derivatives only for scalar families");

  const int nc = n_comp();
  const Index np = static_cast<Index>(points.size());
  const int nb = dim();
  const auto primes = prime_basis(family_, order_);
  const double inv_s = 1.0 / ctx_.scale;

  std::vector<MatX> pv(static_cast<std::size_t>(nc), MatX::Zero(np, nb));
  std::vector<std::array<MatX, 2>> pg;
  std::vector<std::array<MatX, 3>> ph;
  if (deriv_order >= 1)
    pg.assign(static_cast<std::size_t>(nc), {MatX::Zero(np, nb), MatX::Zero(np, nb)});
  if (deriv_order >= 2)
    ph.assign(static_cast<std::size_t>(nc),
              {MatX::Zero(np, nb), MatX::Zero(np, nb), MatX::Zero(np, nb)});

  for (Index q = 0; q < np; ++q) {
    Vec2 xi = (points[static_cast<std::size_t>(q)] - ctx_.center) * inv_s;
    for (int p = 0; p < nb; ++p) {
      for (const auto& t : primes[static_cast<std::size_t>(p)].terms) {
        MonoVal m = mono_eval(t.i, t.j, xi, inv_s, deriv_order);
        auto c = static_cast<std::size_t>(t.comp);
        pv[c](q, p) += m.v;
        if (deriv_order >= 1) {
          pg[c][0](q, p) += m.vx;
          pg[c][1](q, p) += m.vy;
        }
        if (deriv_order >= 2) {
          ph[c][0](q, p) += m.vxx;
          ph[c][1](q, p) += m.vxy;
          ph[c][2](q, p) += m.vyy;
        }
      }
    }
  }

  Tabulation tab;
  tab.n_comp = nc;
  tab.n_points = np;
  tab.n_basis = nb;
  for (int c = 0; c < nc; ++c) {
    auto cc = static_cast<std::size_t>(c);
    tab.value.push_back(pv[cc] * coeff_);
    if (deriv_order >= 1) tab.grad.push_back({pg[cc][0] * coeff_, pg[cc][1] * coeff_});
    if (deriv_order >= 2)
      tab.hess.push_back({ph[cc][0] * coeff_, ph[cc][1] * coeff_, ph[cc][2] * coeff_});
  }
  return tab;
}

VecX apply_dof_functionals(TriFamily family, int order, const TriCellContext& ctx,
                           const std::function<VecX(const Vec2&)>& fn) {
  const auto fns = build_functionals(family, order, ctx);
  VecX out(static_cast<Index>(fns.size()));
  for (std::size_t j = 0; j < fns.size(); ++j)
    out(static_cast<Index>(j)) = apply_functional(fns[j], ctx, fn, order);
  return out;
}

} // namespace phplate
