#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace phplate {

/// Per-field convergence table: rows sorted by decreasing h, successive
/// dyadic rates, and fitted log-log slopes.
struct FieldTable {
  std::string name;
  std::string norm; ///< "L2" or "H1"
  std::vector<double> h;
  std::vector<double> error;
  std::vector<double> rate;       ///< rate[i] between levels i-1 and i; rate[0] = NaN
  double ls_slope_all = 0.0;
  double ls_slope_finest = 0.0;   ///< least squares over the finest three levels
};

struct ConvergenceReport {
  std::string scheme;
  int degree = 1;
  std::vector<FieldTable> fields;
  std::map<std::string, std::string> metadata;
};

/// CSV columns: field, h, error, rate.
void write_csv(std::ostream& os, const ConvergenceReport& report);
void write_json(std::ostream& os, const ConvergenceReport& report);

/// Energy trace CSV with columns t, H, power_residual.
void write_energy_csv(std::ostream& os, const std::vector<double>& t,
                      const std::vector<double>& energy,
                      const std::vector<double>& power_residual);

/// Self-contained log-log SVG plot of one field's error against h, with a
/// dashed reference line of the given slope anchored at the finest point.
std::string svg_loglog(const FieldTable& table, int reference_slope,
                       const std::string& title);

} // namespace phplate
