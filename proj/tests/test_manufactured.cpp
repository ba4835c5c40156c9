#include "phplate/manufactured.hpp"

#include "phplate/driver.hpp"
#include "phplate/errors.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace phplate;

TEST_CASE("strong-form residual oracle: both solutions satisfy their PDEs") {
  ResidualReport mindlin = strong_form_residuals(mindlin_exact(), 1000, 2024);
  CHECK(mindlin.max_scaled_residual <= 1e-8);
  ResidualReport kirchhoff = strong_form_residuals(kirchhoff_exact(), 1000, 2025);
  CHECK(kirchhoff.max_scaled_residual <= 1e-8);
}

TEST_CASE("mindlin residual oracle still passes for off-table parameters") {
  // the MMS forcing must absorb any admissible parameter set, including a
  // shear correction that breaks the static-solution cancellation
  MaterialParams p = mindlin_params();
  p.shear_correction = 1.0;
  p.thickness = 0.2;
  p.poisson_ratio = 0.25;
  ResidualReport rep = strong_form_residuals(mindlin_exact(p), 500, 99);
  CHECK(rep.max_scaled_residual <= 1e-8);
}

TEST_CASE("mindlin boundary compatibility: clamped values vanish") {
  ExactSolution ex = mindlin_exact();
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < 50; ++s) {
    double c = u(rng), t = u(rng);
    for (Vec2 x : {Vec2(0.0, c), Vec2(1.0, c), Vec2(c, 0.0), Vec2(c, 1.0)}) {
      CHECK(std::abs(ex.e_w(x, t)) < 1e-14);
      CHECK(ex.e_theta(x, t).norm() < 1e-14);
    }
  }
  // the printed rotation vanishes identically on the bottom edge
  for (int s = 0; s < 20; ++s) {
    Vec2 x(u(rng), 0.0);
    CHECK(ex.theta_static(x).norm() < 1e-15);
  }
}

TEST_CASE("kirchhoff boundary compatibility: simply supported data vanish") {
  ExactSolution ex = kirchhoff_exact();
  std::mt19937 rng(18);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < 50; ++s) {
    double c = u(rng), t = u(rng);
    struct Side {
      Vec2 x, n;
    };
    for (const Side& side : {Side{Vec2(0.0, c), Vec2(-1, 0)}, Side{Vec2(1.0, c), Vec2(1, 0)},
                             Side{Vec2(c, 0.0), Vec2(0, -1)}, Side{Vec2(c, 1.0), Vec2(0, 1)}}) {
      CHECK(std::abs(ex.e_w(side.x, t)) < 1e-13);
      double mnn = side.n.dot(ex.E_kappa(side.x, t) * side.n);
      CHECK(std::abs(mnn) < 1e-10);
    }
  }
}

TEST_CASE("time factor zeroes stress and shear at t = 0") {
  ExactSolution ex = mindlin_exact();
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < 20; ++s) {
    Vec2 x(u(rng), u(rng));
    CHECK(ex.E_kappa(x, 0.0).norm() == 0.0);
    CHECK(ex.e_gamma(x, 0.0).norm() == 0.0);
  }
}

TEST_CASE("kirchhoff peak velocity and forcing amplitude") {
  ExactSolution ex = kirchhoff_exact();
  CHECK(ex.e_w(Vec2(0.5, 0.5), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  // f(0.5, 0.5, pi/2) = 4 D pi^4 - rho b with the thin-plate parameters
  const MaterialParams p = kirchhoff_params();
  const double expected = 4.0 * p.bending_rigidity() * std::pow(M_PI, 4) -
                          p.density * p.thickness;
  const double got = ex.f_spatial(Vec2(0.5, 0.5)) * ex.time_factor(M_PI / 2);
  CHECK(got == doctest::Approx(expected).epsilon(1e-13));
  CHECK(expected == doctest::Approx(4847.0).epsilon(1e-3));
}

TEST_CASE("mindlin static load agrees with the factored closed form") {
  // Independent route to the static force: the factored polynomial bracket
  // scaled by E b^3 / (36 (1 - nu^2)); under the tabulated shear correction
  // 5/6 the torque reduces to the pure inertia term.
  ExactSolution ex = mindlin_exact();
  const MaterialParams p = mindlin_params();
  auto bracket = [](double x, double y) {
    auto sq = [](double v) { return v * v; };
    return 12 * y * (y - 1) * (5 * x * x - 5 * x + 1) *
               (2 * y * y * sq(y - 1) + x * (x - 1) * (5 * y * y - 5 * y + 1)) +
           12 * x * (x - 1) * (5 * y * y - 5 * y + 1) *
               (2 * x * x * sq(x - 1) + y * (y - 1) * (5 * x * x - 5 * x + 1));
  };
  const double scale = p.young_modulus * std::pow(p.thickness, 3) /
                       (12.0 * (1.0 - p.poisson_ratio * p.poisson_ratio));
  std::mt19937 rng(20);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < 100; ++s) {
    Vec2 x(u(rng), u(rng));
    const double f_static = ex.f_spatial(x) + p.density * p.thickness * ex.w_static(x);
    CHECK(f_static == doctest::Approx(scale * bracket(x.x(), x.y())).epsilon(1e-11));
    // torque spatial part = -rho b^3/12 theta_s
    Vec2 tau = ex.tau_spatial(x);
    Vec2 expected = -p.density * std::pow(p.thickness, 3) / 12.0 * ex.theta_static(x);
    CHECK((tau - expected).norm() <= 1e-12 * expected.norm() + 1e-18);
  }
}

TEST_CASE("norm pipeline: L2 norm of the sine product is one half") {
  PlateSystem sys = make_system(Scheme::Hhj, 4, 1, kirchhoff_params());
  double norm = l2_norm(
      sys,
      [](const Vec2& x) {
        VecX v(1);
        v(0) = std::sin(M_PI * x.x()) * std::sin(M_PI * x.y());
        return v;
      },
      1);
  CHECK(norm == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("zero discrete solution gives the max exact norm as error") {
  PlateSystem sys = make_system(Scheme::Hhj, 4, 1, kirchhoff_params());
  ExactSolution ex = kirchhoff_exact();
  ErrorAccumulator acc(sys, scheme_error_specs(sys, ex));
  // observe a zero trajectory on the uniform grid {0, 0.25, 0.5, 0.75, 1}
  VecX zero = VecX::Zero(sys.n_free());
  for (int i = 0; i <= 4; ++i) acc.observe(i, 0.25 * i, zero);
  auto errors = acc.results();

  // e_w in H1: max_t |cos t| * ||s||_H1 with ||s||_H1^2 = 1/4 + pi^2/2
  const double h1_exact = std::sqrt(0.25 + M_PI * M_PI / 2.0);
  CHECK(errors[0] == doctest::Approx(h1_exact).epsilon(1e-9));

  // E_kappa in L2: max_t |sin t| * ||D Hess s||_F, via the independent
  // quadrature route at t where sin is largest on the grid (t = 1)
  double kappa_norm = l2_norm(
      sys,
      [&](const Vec2& x) {
        Mat2 m = ex.E_kappa(x, 1.0);
        VecX v(3);
        v << m(0, 0), m(1, 1), std::sqrt(2.0) * m(0, 1);
        return v;
      },
      3);
  CHECK(errors[1] == doctest::Approx(kappa_norm).epsilon(1e-9));
}

TEST_CASE("projected exact data reproduces itself: projection error only") {
  // project the exact solution at several times and feed it to the harness;
  // the resulting "error" is the projection error, small and decreasing in h
  double prev_h1 = 1e300;
  for (int n : {2, 4, 8}) {
    PlateSystem sys = make_system(Scheme::Hhj, n, 1, kirchhoff_params());
    ExactSolution ex = kirchhoff_exact();
    ErrorAccumulator acc(sys, scheme_error_specs(sys, ex));
    for (int i = 0; i <= 2; ++i) {
      double t = 0.5 * i;
      VecX proj = project_state(sys, exact_field_evaluators(sys, ex, t));
      acc.observe(i, t, proj);
    }
    auto errors = acc.results();
    CHECK(errors[0] < prev_h1);
    prev_h1 = errors[0];
  }

  std::vector<double> prev(5, 1e300);
  for (int n : {2, 4}) {
    PlateSystem sys = make_system(Scheme::Afw, n, 1, mindlin_params());
    ExactSolution ex = mindlin_exact();
    ErrorAccumulator acc(sys, scheme_error_specs(sys, ex));
    for (int i = 0; i <= 2; ++i) {
      double t = 0.5 * i;
      VecX proj = project_state(sys, exact_field_evaluators(sys, ex, t));
      acc.observe(i, t, proj);
    }
    auto errors = acc.results();
    for (std::size_t f = 0; f < errors.size(); ++f) {
      CHECK(errors[f] < 1e-1);
      if (sys.fields[f].name != "E_r") CHECK(errors[f] <= prev[f]);
      prev[f] = errors[f];
    }
  }
}

TEST_CASE("convergence rate fits") {
  // exact powers give exact rates
  std::vector<double> h = {0.25, 0.125, 0.0625};
  std::vector<double> e2 = {h[0] * h[0], h[1] * h[1], h[2] * h[2]};
  RateFit fit = convergence_rates(h, e2);
  CHECK(fit.ls_slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.successive[0] == doctest::Approx(2.0).epsilon(1e-12));

  std::vector<double> e1 = {0.4, 0.2, 0.1};
  CHECK(convergence_rates(h, e1).ls_slope == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS(convergence_rates({0.5}, {1.0}));
  CHECK_THROWS(convergence_rates(h, {1.0, 0.0, 1.0}));
  CHECK(finest_slope(h, e2, 2) == doctest::Approx(2.0).epsilon(1e-12));
}
