#include "phplate/quadrature.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace phplate {

double QuadRule::weight_sum() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double legendre(int n, double x) {
  if (n == 0) return 1.0;
  double pm1 = 1.0, p = x;
  for (int k = 2; k <= n; ++k) {
    double pk = ((2 * k - 1) * x * p - (k - 1) * pm1) / k;
    pm1 = p;
    p = pk;
  }
  return p;
}

void gauss_legendre(int n, std::vector<double>& points, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  points.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev estimate, on [-1,1].
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double pm1 = 1.0, p = x;
      for (int k = 2; k <= n; ++k) {
        double pk = ((2 * k - 1) * x * p - (k - 1) * pm1) / k;
        pm1 = p;
        p = pk;
      }
      dp = n * (x * p - pm1) / (x * x - 1.0);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    points[i] = 0.5 * (1.0 - x); // roots come out descending; mapped to [0,1] ascending
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

QuadRule quad_rule(CellKind cell, int exactness) {
  if (exactness < 0) throw std::invalid_argument("quad_rule: exactness must be >= 0");
  if (exactness > kMaxQuadExactness)
    throw std::invalid_argument("quad_rule: exactness above supported ceiling");

  QuadRule rule;
  rule.cell = cell;
  rule.exactness = exactness;

  if (cell == CellKind::Square) {
    int m = (exactness + 2) / 2; // 2m-1 >= exactness
    std::vector<double> p, w;
    gauss_legendre(m, p, w);
    rule.points.reserve(static_cast<std::size_t>(m) * m);
    rule.weights.reserve(static_cast<std::size_t>(m) * m);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) {
        rule.points.emplace_back(p[i], p[j]);
        rule.weights.push_back(w[i] * w[j]);
      }
    return rule;
  }

  // Triangle: x = u, y = v(1-u); dA = (1-u) du dv. The integrand times the
  // Jacobian has degree exactness+1 in u and exactness in v.
  int mu = (exactness + 3) / 2;
  int mv = (exactness + 2) / 2;
  std::vector<double> pu, wu, pv, wv;
  gauss_legendre(mu, pu, wu);
  gauss_legendre(mv, pv, wv);
  rule.points.reserve(static_cast<std::size_t>(mu) * mv);
  rule.weights.reserve(static_cast<std::size_t>(mu) * mv);
  for (int j = 0; j < mv; ++j)
    for (int i = 0; i < mu; ++i) {
      double u = pu[i], v = pv[j];
      rule.points.emplace_back(u, v * (1.0 - u));
      rule.weights.push_back(wu[i] * wv[j] * (1.0 - u));
    }
  return rule;
}

} // namespace phplate
