#pragma once

#include "phplate/assembly.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace phplate {

/// Evaluator of all scalar value slots of a field at (x, t); for fields
/// measured in H1, the slot layout is (value, d/dx, d/dy).
using SpaceTimeEval = std::function<VecX(const Vec2&, double)>;

/// Accumulates per-field spatial errors at every observed time and keeps the
/// max over time: the discrete L-infinity-in-time norm of the L2 (or H1)
/// spatial error. Basis tables at the elevated quadrature points are built
/// once at construction.
class ErrorAccumulator {
public:
  struct Spec {
    std::string field;
    bool h1 = false;
    SpaceTimeEval exact;
  };

  ErrorAccumulator(const PlateSystem& system, std::vector<Spec> specs);

  void observe(Index step, double t, const VecX& e_free);

  /// L-infinity-in-time errors, one per spec, in spec order.
  std::vector<double> results() const { return max_error_; }
  const std::vector<Spec>& specs() const { return specs_; }

private:
  const PlateSystem& sys_;
  std::vector<Spec> specs_;
  std::vector<CellQuad> quads_;
  // tabulations per spec, per component, per cell
  struct CompTab {
    const FunctionSpace* space;
    Index offset;
    std::vector<Tabulation> cells;
  };
  std::vector<std::vector<CompTab>> tabs_;
  std::vector<double> max_error_;
};

/// L2 norm of a pointwise-evaluable function through the same mesh/quadrature
/// pipeline used for the error norms (slots summed in quadrature).
double l2_norm(const PlateSystem& system, const std::function<VecX(const Vec2&)>& fn,
               int n_slots);

/// Successive dyadic rates log2(e_i / e_{i+1}) and the least-squares slope of
/// log(e) against log(h). Requires at least two levels and positive errors.
struct RateFit {
  std::vector<double> successive;
  double ls_slope = 0.0;
};
RateFit convergence_rates(const std::vector<double>& h, const std::vector<double>& err);

/// Least-squares slope over the finest `levels` mesh levels (rows must be
/// sorted by decreasing h).
double finest_slope(const std::vector<double>& h, const std::vector<double>& err,
                    std::size_t levels = 3);

} // namespace phplate
