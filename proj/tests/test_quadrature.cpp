#include "phplate/quadrature.hpp"

#include "doctest.h"

#include <cmath>

using namespace phplate;

namespace {

// closed-form reference integrals used as the exactness oracle
double tri_monomial_integral(int a, int b) {
  // int_T x^a y^b = a! b! / (a+b+2)! on the unit triangle
  double num = 1.0;
  for (int k = 2; k <= a; ++k) num *= k;
  for (int k = 2; k <= b; ++k) num *= k;
  double den = 1.0;
  for (int k = 2; k <= a + b + 2; ++k) den *= k;
  return num / den;
}

double square_monomial_integral(int a, int b) { return 1.0 / ((a + 1.0) * (b + 1.0)); }

double integrate(const QuadRule& rule, int a, int b) {
  double acc = 0.0;
  for (Index q = 0; q < rule.size(); ++q) {
    const Vec2& p = rule.points[static_cast<std::size_t>(q)];
    acc += rule.weights[static_cast<std::size_t>(q)] * std::pow(p.x(), a) * std::pow(p.y(), b);
  }
  return acc;
}

} // namespace

TEST_CASE("weights are positive and sum to the reference measure") {
  for (int d = 0; d <= 14; ++d) {
    QuadRule tri = quad_rule(CellKind::Triangle, d);
    QuadRule sq = quad_rule(CellKind::Square, d);
    for (double w : tri.weights) CHECK(w > 0.0);
    for (double w : sq.weights) CHECK(w > 0.0);
    CHECK(tri.weight_sum() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sq.weight_sum() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("monomial exactness sweep against closed-form integrals") {
  for (int d = 0; d <= 14; ++d) {
    QuadRule tri = quad_rule(CellKind::Triangle, d);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        double ref = tri_monomial_integral(a, b);
        CHECK(integrate(tri, a, b) == doctest::Approx(ref).epsilon(1e-14));
      }
    QuadRule sq = quad_rule(CellKind::Square, d);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; b <= d; ++b) {
        double ref = square_monomial_integral(a, b);
        CHECK(integrate(sq, a, b) == doctest::Approx(ref).epsilon(1e-14));
      }
  }
}

TEST_CASE("degree-1 square rule is the midpoint rule") {
  QuadRule r = quad_rule(CellKind::Square, 1);
  REQUIRE(r.size() == 1);
  CHECK(r.points[0].x() == doctest::Approx(0.5));
  CHECK(r.points[0].y() == doctest::Approx(0.5));
  CHECK(r.weights[0] == doctest::Approx(1.0));
}

TEST_CASE("degree-0 triangle rule is one point of weight 1/2") {
  QuadRule r = quad_rule(CellKind::Triangle, 0);
  REQUIRE(r.size() == 1);
  CHECK(r.weights[0] == doctest::Approx(0.5));
}

TEST_CASE("triangle rule of degree 2 reproduces int x^2 = 1/12") {
  QuadRule r = quad_rule(CellKind::Triangle, 2);
  CHECK(integrate(r, 2, 0) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
}

TEST_CASE("rejects unsupported exactness requests") {
  CHECK_THROWS(quad_rule(CellKind::Triangle, -1));
  CHECK_THROWS(quad_rule(CellKind::Triangle, kMaxQuadExactness + 1));
  CHECK_THROWS(quad_rule(CellKind::Square, kMaxQuadExactness + 1));
}

TEST_CASE("gauss-legendre nodes integrate high-degree monomials") {
  std::vector<double> p, w;
  gauss_legendre(8, p, w); // exact to degree 15 on [0,1]
  for (int d = 0; d <= 15; ++d) {
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += w[i] * std::pow(p[i], d);
    CHECK(acc == doctest::Approx(1.0 / (d + 1)).epsilon(1e-14));
  }
}
