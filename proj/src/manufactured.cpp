#include "phplate/manufactured.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace phplate {

namespace {

/// Univariate polynomial with ascending coefficients.
struct Poly1 {
  std::vector<double> c;

  double operator()(double x) const {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
  }
  Poly1 derivative() const {
    Poly1 d;
    for (std::size_t i = 1; i < c.size(); ++i) d.c.push_back(static_cast<double>(i) * c[i]);
    if (d.c.empty()) d.c.push_back(0.0);
    return d;
  }
};

} // namespace

ExactSolution mindlin_exact(const MaterialParams& params) {
  params.validate();
  ExactSolution ex;
  ex.params = params;
  ex.mindlin = true;

  // a(t) = t^3 (t-1)^3 and derivatives; theta_s = grad(a(x)a(y))/3 and
  // w_s = a(x)a(y)/3 - cb/6 * Laplace(a(x)a(y))
  const Poly1 a{{0, 0, 0, -1, 3, -3, 1}};
  const Poly1 a1 = a.derivative();
  const Poly1 a2 = a1.derivative();
  const Poly1 a3 = a2.derivative();
  const Poly1 a4 = a3.derivative();

  const double nu = params.poisson_ratio;
  const double b = params.thickness;
  const double cb = 2.0 * b * b / (5.0 * (1.0 - nu));
  const double rho_b = params.density * b;
  const double rot_inertia = params.density * b * b * b / 12.0;
  const double c0 = params.shear_stiffness();
  const double d0 = params.bending_rigidity();
  const MaterialParams p = params;

  auto w_s = [=](const Vec2& x) {
    return a(x.x()) * a(x.y()) / 3.0 -
           cb / 6.0 * (a2(x.x()) * a(x.y()) + a(x.x()) * a2(x.y()));
  };
  auto theta_s = [=](const Vec2& x) {
    return Vec2(a1(x.x()) * a(x.y()) / 3.0, a(x.x()) * a1(x.y()) / 3.0);
  };
  auto grad_w_s = [=](const Vec2& x) {
    return Vec2(a1(x.x()) * a(x.y()) / 3.0 -
                    cb / 6.0 * (a3(x.x()) * a(x.y()) + a1(x.x()) * a2(x.y())),
                a(x.x()) * a1(x.y()) / 3.0 -
                    cb / 6.0 * (a2(x.x()) * a1(x.y()) + a(x.x()) * a3(x.y())));
  };
  auto hess_g = [=](const Vec2& x) {
    Mat2 h;
    h << a2(x.x()) * a(x.y()), a1(x.x()) * a1(x.y()), a1(x.x()) * a1(x.y()),
        a(x.x()) * a2(x.y());
    return h;
  };
  auto grad_lap_g = [=](const Vec2& x) {
    return Vec2(a3(x.x()) * a(x.y()) + a1(x.x()) * a2(x.y()),
                a2(x.x()) * a1(x.y()) + a(x.x()) * a3(x.y()));
  };
  auto bilap_g = [=](const Vec2& x) {
    return a4(x.x()) * a(x.y()) + 2.0 * a2(x.x()) * a2(x.y()) + a(x.x()) * a4(x.y());
  };

  ex.w_static = w_s;
  ex.theta_static = theta_s;

  ex.e_w = [=](const Vec2& x, double t) { return w_s(x) * std::cos(t); };
  ex.grad_e_w = [=](const Vec2& x, double t) { return Vec2(grad_w_s(x) * std::cos(t)); };
  ex.e_theta = [=](const Vec2& x, double t) { return Vec2(theta_s(x) * std::cos(t)); };
  ex.E_kappa = [=](const Vec2& x, double t) {
    return Mat2(constitutive_bending(hess_g(x) / 3.0, p) * std::sin(t));
  };
  ex.e_gamma = [=](const Vec2& x, double t) {
    Vec2 gamma_s = grad_w_s(x) - theta_s(x);
    return Vec2(constitutive_shear(gamma_s, p) * std::sin(t));
  };

  // Strong-equation forcing for w_d = w_s sin t, theta_d = theta_s sin t:
  //   f   = rho b dtt w_d - div(C(grad w_d - theta_d))
  //   tau = rho b^3/12 dtt theta_d - C(grad w_d - theta_d) - Div(D Grad theta_d)
  // For theta_s = grad(g)/3, Div(D Grad theta_s) = D0 grad(Lap g)/3 and
  // grad w_s - theta_s = -cb/6 grad(Lap g).
  ex.f_spatial = [=](const Vec2& x) {
    return -rho_b * w_s(x) + c0 * cb / 6.0 * bilap_g(x);
  };
  ex.tau_spatial = [=](const Vec2& x) {
    return Vec2(-rot_inertia * theta_s(x) +
                (c0 * cb / 6.0 - d0 / 3.0) * grad_lap_g(x));
  };
  ex.time_factor = [](double t) { return std::sin(t); };
  return ex;
}

ExactSolution kirchhoff_exact(const MaterialParams& params) {
  params.validate();
  ExactSolution ex;
  ex.params = params;
  ex.mindlin = false;

  const double pi = M_PI;
  const double rho_b = params.density * params.thickness;
  const double d0 = params.bending_rigidity();
  const MaterialParams p = params;

  auto s = [=](const Vec2& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); };

  ex.e_w = [=](const Vec2& x, double t) { return s(x) * std::cos(t); };
  ex.grad_e_w = [=](const Vec2& x, double t) {
    const double c = std::cos(t);
    return Vec2(c * pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                c * pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
  };
  ex.E_kappa = [=](const Vec2& x, double t) {
    Mat2 hess;
    const double sx = std::sin(pi * x.x()), sy = std::sin(pi * x.y());
    const double cx = std::cos(pi * x.x()), cy = std::cos(pi * x.y());
    hess << -sx * sy, cx * cy, cx * cy, -sx * sy;
    hess *= pi * pi;
    return Mat2(constitutive_bending(hess, p) * std::sin(t));
  };
  ex.f_spatial = [=](const Vec2& x) {
    return (4.0 * d0 * pi * pi * pi * pi - rho_b) * s(x);
  };
  ex.time_factor = [](double t) { return std::sin(t); };
  ex.w_static = s;
  return ex;
}

// ----------------------------------------------------------------------
// Finite-difference strong-form oracle
// ----------------------------------------------------------------------

namespace {

constexpr double kFdStep = 1e-3;

/// Fourth-order central first derivative.
template <typename F>
double fd1(const F& f, double x) {
  const double h = kFdStep;
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

/// Fourth-order central second derivative.
template <typename F>
double fd2(const F& f, double x) {
  const double h = kFdStep;
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) /
         (12 * h * h);
}

struct EquationResidual {
  double residual = 0.0;
  double scale = 0.0;

  void add_sample(double r, double terms) {
    residual = std::max(residual, std::abs(r));
    scale = std::max(scale, terms);
  }
  double scaled() const { return scale > 0.0 ? residual / scale : residual; }
};

} // namespace

ResidualReport strong_form_residuals(const ExactSolution& ex, int n_samples, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ux(0.05, 0.95);
  std::uniform_real_distribution<double> ut(0.1, 1.0);
  const MaterialParams& p = ex.params;
  const double rho_b = p.density * p.thickness;
  const double rot_inertia = p.density * std::pow(p.thickness, 3) / 12.0;

  std::vector<EquationResidual> eqs(ex.mindlin ? 4 : 2);

  for (int n = 0; n < n_samples; ++n) {
    const Vec2 x(ux(rng), ux(rng));
    const double t = ut(rng);

    auto dt_of = [&](auto field, int slot) {
      return fd1([&](double tt) { return field(x, tt)(slot); }, t);
    };

    if (ex.mindlin) {
      // balance of linear momentum: rho b d_t e_w = div e_gamma + f
      double dew = fd1([&](double tt) { return ex.e_w(x, tt); }, t);
      double div_gam =
          fd1([&](double xx) { return ex.e_gamma(Vec2(xx, x.y()), t).x(); }, x.x()) +
          fd1([&](double yy) { return ex.e_gamma(Vec2(x.x(), yy), t).y(); }, x.y());
      double f = ex.f_spatial(x) * ex.time_factor(t);
      eqs[0].add_sample(rho_b * dew - div_gam - f,
                        std::abs(rho_b * dew) + std::abs(div_gam) + std::abs(f));

      // balance of angular momentum: rho b^3/12 d_t e_theta = Div E_kappa + e_gamma + tau
      for (int c = 0; c < 2; ++c) {
        double dth = dt_of(ex.e_theta, c);
        double div_row =
            fd1([&](double xx) { return ex.E_kappa(Vec2(xx, x.y()), t)(c, 0); }, x.x()) +
            fd1([&](double yy) { return ex.E_kappa(Vec2(x.x(), yy), t)(c, 1); }, x.y());
        double gam = ex.e_gamma(x, t)(c);
        double tau = ex.tau_spatial(x)(c) * ex.time_factor(t);
        eqs[1].add_sample(rot_inertia * dth - div_row - gam - tau,
                          std::abs(rot_inertia * dth) + std::abs(div_row) + std::abs(gam) +
                              std::abs(tau));
      }

      // bending constitutive rate: D^{-1} d_t E_kappa = Grad e_theta
      Mat2 dEk;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          dEk(i, j) = fd1([&](double tt) { return ex.E_kappa(x, tt)(i, j); }, t);
      Mat2 jac_theta;
      for (int i = 0; i < 2; ++i) {
        jac_theta(i, 0) =
            fd1([&](double xx) { return ex.e_theta(Vec2(xx, x.y()), t)(i); }, x.x());
        jac_theta(i, 1) =
            fd1([&](double yy) { return ex.e_theta(Vec2(x.x(), yy), t)(i); }, x.y());
      }
      Mat2 lhs3 = constitutive_bending_inverse(dEk, p);
      Mat2 rhs3 = 0.5 * (jac_theta + jac_theta.transpose());
      eqs[2].add_sample((lhs3 - rhs3).cwiseAbs().maxCoeff(),
                        lhs3.cwiseAbs().maxCoeff() + rhs3.cwiseAbs().maxCoeff());

      // shear constitutive rate: C^{-1} d_t e_gamma = grad e_w - e_theta
      Vec2 dgam(dt_of(ex.e_gamma, 0), dt_of(ex.e_gamma, 1));
      Vec2 grad_w(fd1([&](double xx) { return ex.e_w(Vec2(xx, x.y()), t); }, x.x()),
                  fd1([&](double yy) { return ex.e_w(Vec2(x.x(), yy), t); }, x.y()));
      Vec2 lhs4 = constitutive_shear_inverse(dgam, p);
      Vec2 rhs4 = grad_w - ex.e_theta(x, t);
      eqs[3].add_sample((lhs4 - rhs4).cwiseAbs().maxCoeff(),
                        lhs4.cwiseAbs().maxCoeff() + rhs4.cwiseAbs().maxCoeff());
    } else {
      // rho b d_t e_w = -div Div E_kappa + f
      double dew = fd1([&](double tt) { return ex.e_w(x, tt); }, t);
      double ddiv =
          fd2([&](double xx) { return ex.E_kappa(Vec2(xx, x.y()), t)(0, 0); }, x.x()) +
          fd2([&](double yy) { return ex.E_kappa(Vec2(x.x(), yy), t)(1, 1); }, x.y()) +
          2.0 * fd1(
                    [&](double xx) {
                      return fd1([&](double yy) { return ex.E_kappa(Vec2(xx, yy), t)(0, 1); },
                                 x.y());
                    },
                    x.x());
      double f = ex.f_spatial(x) * ex.time_factor(t);
      eqs[0].add_sample(rho_b * dew + ddiv - f,
                        std::abs(rho_b * dew) + std::abs(ddiv) + std::abs(f));

      // D^{-1} d_t E_kappa = Hess e_w
      Mat2 dEk;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          dEk(i, j) = fd1([&](double tt) { return ex.E_kappa(x, tt)(i, j); }, t);
      Mat2 hess;
      hess(0, 0) = fd2([&](double xx) { return ex.e_w(Vec2(xx, x.y()), t); }, x.x());
      hess(1, 1) = fd2([&](double yy) { return ex.e_w(Vec2(x.x(), yy), t); }, x.y());
      hess(0, 1) = fd1(
          [&](double xx) {
            return fd1([&](double yy) { return ex.e_w(Vec2(xx, yy), t); }, x.y());
          },
          x.x());
      hess(1, 0) = hess(0, 1);
      Mat2 lhs2 = constitutive_bending_inverse(dEk, p);
      eqs[1].add_sample((lhs2 - hess).cwiseAbs().maxCoeff(),
                        lhs2.cwiseAbs().maxCoeff() + hess.cwiseAbs().maxCoeff());
    }
  }

  ResidualReport rep;
  rep.n_samples = n_samples;
  for (const auto& e : eqs) rep.max_scaled_residual = std::max(rep.max_scaled_residual, e.scaled());
  return rep;
}

} // namespace phplate
