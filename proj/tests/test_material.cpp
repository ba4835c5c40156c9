#include "phplate/material.hpp"

#include "doctest.h"

#include <random>

using namespace phplate;

TEST_CASE("table parameter sets and derived stiffnesses") {
  MaterialParams mindlin = mindlin_params();
  CHECK(mindlin.young_modulus == 1.0);
  CHECK(mindlin.thickness == 0.1);
  // E b k_sc / (2 (1 + nu)) = 0.1 * (5/6) / 2.6
  CHECK(mindlin.shear_stiffness() == doctest::Approx(0.032051282).epsilon(1e-8));

  MaterialParams kirchhoff = kirchhoff_params();
  // 136e9 * 1e-9 / (12 * 0.91)
  CHECK(kirchhoff.bending_rigidity() == doctest::Approx(12.4542124542).epsilon(1e-10));
}

TEST_CASE("parameter validation") {
  MaterialParams p = mindlin_params();
  p.young_modulus = 0.0;
  CHECK_THROWS(p.validate());
  p = mindlin_params();
  p.poisson_ratio = 0.5;
  CHECK_THROWS(p.validate());
  p = mindlin_params();
  p.thickness = -1;
  CHECK_THROWS(p.validate());
  CHECK_NOTHROW(mindlin_params().validate());
}

TEST_CASE("bending map of the identity") {
  MaterialParams p = mindlin_params();
  Mat2 out = constitutive_bending(Mat2::Identity(), p);
  const double d0 = p.bending_rigidity();
  CHECK(out(0, 0) == doctest::Approx(1.3 * d0));
  CHECK(out(1, 1) == doctest::Approx(1.3 * d0));
  CHECK(out(0, 1) == doctest::Approx(0.0));
  CHECK((constitutive_bending(Mat2::Zero(), p)).norm() == 0.0);
}

TEST_CASE("trace-free moments invert by plain scaling") {
  MaterialParams p = mindlin_params();
  Mat2 m;
  m << 2.0, 0.7, 0.7, -2.0; // trace free
  Mat2 k = constitutive_bending_inverse(m, p);
  Mat2 expected = m / (p.bending_rigidity() * (1.0 - p.poisson_ratio));
  CHECK((k - expected).norm() < 1e-14 * expected.norm());
}

TEST_CASE("constitutive round trips") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  MaterialParams p = kirchhoff_params();
  for (int s = 0; s < 50; ++s) {
    Mat2 m;
    double a = u(rng), b = u(rng), c = u(rng);
    m << a, c, c, b;
    Mat2 round = constitutive_bending(constitutive_bending_inverse(m, p), p);
    CHECK((round - m).cwiseAbs().maxCoeff() < 1e-13 * m.cwiseAbs().maxCoeff() + 1e-15);
    Mat2 round2 = constitutive_bending_inverse(constitutive_bending(m, p), p);
    CHECK((round2 - m).cwiseAbs().maxCoeff() < 1e-13 * m.cwiseAbs().maxCoeff() + 1e-15);

    Vec2 q(u(rng), u(rng));
    Vec2 qr = constitutive_shear_inverse(constitutive_shear(q, p), p);
    CHECK((qr - q).norm() < 1e-14 * q.norm() + 1e-16);
  }
}

TEST_CASE("bending map extends to non-symmetric tensors") {
  MaterialParams p = mindlin_params();
  Mat2 m;
  m << 1.0, 2.0, -3.0, 4.0;
  Mat2 round = constitutive_bending(constitutive_bending_inverse(m, p), p);
  CHECK((round - m).cwiseAbs().maxCoeff() < 1e-13);
}
