#pragma once

#include "phplate/assembly.hpp"
#include "phplate/errors.hpp"
#include "phplate/manufactured.hpp"
#include "phplate/report.hpp"
#include "phplate/timeint.hpp"

#include <optional>
#include <string>
#include <vector>

namespace phplate {

/// Configuration of a simulation or sweep. Material parameters default to
/// the scheme's test-problem values when not supplied.
struct RunConfig {
  Scheme scheme = Scheme::Hhj;
  int degree = 1;
  std::vector<int> ns = {4, 8, 16, 32};
  double dt_factor = 0.1;
  double tf = 1.0;
  std::optional<MaterialParams> params;
  Diagonal diagonal = Diagonal::Right;
  bool forcing = true; ///< false runs the unforced (conservation) problem

  MaterialParams effective_params() const {
    if (params) return *params;
    return scheme == Scheme::Hhj ? kirchhoff_params() : mindlin_params();
  }
};

/// Assemble + constrain in one call.
PlateSystem make_system(Scheme scheme, int n, int degree, const MaterialParams& params,
                        Diagonal diagonal = Diagonal::Right);

/// The scheme's manufactured solution.
ExactSolution scheme_exact(Scheme scheme, const MaterialParams& params);

/// Value-slot evaluators of the exact fields in the system's field order
/// (the layout project_state and ErrorAccumulator expect).
std::vector<FieldEvaluator> exact_field_evaluators(const PlateSystem& system,
                                                   const ExactSolution& exact, double t);

/// Error specs of the scheme: L2 for every field, H1 for the thin-plate
/// velocity.
std::vector<ErrorAccumulator::Spec> scheme_error_specs(const PlateSystem& system,
                                                       const ExactSolution& exact);

struct SingleRunResult {
  int n = 0;
  double h = 0.0;
  double dt = 0.0;
  Index n_steps = 0;
  Index free_dofs = 0;
  std::vector<std::string> field_names;
  std::vector<double> errors; ///< one per field (empty for unforced runs)
  Trajectory trajectory;
  StructureReport structure;
};

SingleRunResult run_single(const RunConfig& config, int n);

struct ConvergenceResult {
  ConvergenceReport report;
  bool structure_pass = true;
  bool rate_gate_pass = true; ///< finest-three slope >= degree - 0.25, gated fields
  std::vector<SingleRunResult> runs;
};

ConvergenceResult run_convergence(const RunConfig& config);

/// Pass rule of the convergence sweep: every field except the multiplier
/// (whose exact value is identically zero) must fit a finest-three slope of
/// at least degree - 0.25.
bool rate_gate(const ConvergenceReport& report, int degree);

} // namespace phplate
