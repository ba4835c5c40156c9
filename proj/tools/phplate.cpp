// Batch driver for the structure-preserving plate simulators: structural
// verification, single runs with energy traces, and convergence sweeps with
// CSV/JSON tables and SVG log-log plots.

#include "phplate/driver.hpp"
#include "phplate/report.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace phplate;

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 2;
constexpr int kExitRate = 3;

struct CommonOpts {
  std::string scheme = "hhj";
  int degree = 1;
  std::vector<int> ns;
  double dt_factor = 0.1;
  double tf = 1.0;
  double E = -1, nu = -10, rho = -1, thickness = -1, kshear = -1;
  std::string diagonal = "right";
  std::string out_dir = ".";
  std::vector<std::string> formats = {"csv", "json", "svg"};
  bool no_forcing = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--scheme", o.scheme, "Discretization scheme")
      ->check(CLI::IsMember({"bjt", "afw", "hhj"}));
  cmd->add_option("--degree,-k", o.degree, "Polynomial degree")->check(CLI::Range(1, 3));
  cmd->add_option("--n", o.ns, "Mesh sizes (cells per side)")->delimiter(',');
  cmd->add_option("--dt-factor", o.dt_factor, "Time step as a fraction of h");
  cmd->add_option("--tf", o.tf, "Final time [s]");
  cmd->add_option("--E", o.E, "Young modulus [Pa]");
  cmd->add_option("--nu", o.nu, "Poisson ratio");
  cmd->add_option("--rho", o.rho, "Density [kg/m^3]");
  cmd->add_option("--thickness", o.thickness, "Plate thickness [m]");
  cmd->add_option("--kshear", o.kshear, "Shear correction factor");
  cmd->add_option("--diagonal", o.diagonal, "Triangle split pattern")
      ->check(CLI::IsMember({"right", "left", "crisscross"}));
  cmd->add_option("--out", o.out_dir, "Output directory");
  cmd->add_option("--format", o.formats, "Output formats")->delimiter(',');
}

RunConfig to_config(const CommonOpts& o) {
  RunConfig cfg;
  cfg.scheme = scheme_from_name(o.scheme);
  cfg.degree = o.degree;
  if (!o.ns.empty()) cfg.ns = o.ns;
  cfg.dt_factor = o.dt_factor;
  cfg.tf = o.tf;
  cfg.forcing = !o.no_forcing;
  cfg.diagonal = o.diagonal == "right"
                     ? Diagonal::Right
                     : (o.diagonal == "left" ? Diagonal::Left : Diagonal::Crisscross);
  MaterialParams p = cfg.effective_params();
  if (o.E > 0) p.young_modulus = o.E;
  if (o.nu > -1) p.poisson_ratio = o.nu;
  if (o.rho > 0) p.density = o.rho;
  if (o.thickness > 0) p.thickness = o.thickness;
  if (o.kshear > 0) p.shear_correction = o.kshear;
  cfg.params = p;
  return cfg;
}

bool wants(const CommonOpts& o, const std::string& f) {
  for (const auto& s : o.formats)
    if (s == f) return true;
  return false;
}

void print_structure(const StructureReport& rep, Scheme scheme, int n, int degree) {
  std::cout << "scheme=" << scheme_name(scheme) << " n=" << n << " k=" << degree << "\n";
  for (const auto& [name, dim] : rep.field_dims)
    std::cout << "  dofs[" << name << "] = " << dim << "\n";
  std::cout << "  free dofs = " << rep.free_dim << "\n";
  std::cout << "  ||M - M^T|| / ||M|| = " << rep.sym_residual << "\n";
  std::cout << "  ||J + J^T|| / ||J|| = " << rep.skew_residual << "\n";
  if (scheme == Scheme::Afw)
    std::cout << "  M: symmetric indefinite, negative inertia "
              << (rep.neg_inertia_matches ? "== " : "!= ") << "multiplier dofs ("
              << rep.multiplier_dim << ")\n";
  else
    std::cout << "  M: " << (rep.mass_spd ? "symmetric positive definite" : "NOT positive definite")
              << "\n";
  std::cout << "  structure " << (rep.pass ? "OK" : "VIOLATED") << "\n";
}

int cmd_verify(const CommonOpts& o) {
  RunConfig cfg = to_config(o);
  bool all_pass = true;
  for (int n : cfg.ns) {
    PlateSystem sys = make_system(cfg.scheme, n, cfg.degree, cfg.effective_params(), cfg.diagonal);
    StructureReport rep = verify_structure(sys);
    print_structure(rep, cfg.scheme, n, cfg.degree);
    all_pass = all_pass && rep.pass;
  }
  return all_pass ? kExitOk : kExitInvariant;
}

int cmd_run(const CommonOpts& o) {
  RunConfig cfg = to_config(o);
  const int n = cfg.ns.front();
  SingleRunResult res = run_single(cfg, n);
  std::filesystem::create_directories(o.out_dir);

  const std::string stem = std::string(scheme_name(cfg.scheme)) + "_k" +
                           std::to_string(cfg.degree) + "_n" + std::to_string(n);
  if (wants(o, "csv")) {
    std::ofstream f(o.out_dir + "/" + stem + "_energy.csv");
    write_energy_csv(f, res.trajectory.t, res.trajectory.energy, res.trajectory.power_residual);
  }
  if (wants(o, "json") && !res.errors.empty()) {
    std::ofstream f(o.out_dir + "/" + stem + "_errors.json");
    f << "{\n";
    for (std::size_t i = 0; i < res.errors.size(); ++i)
      f << "  \"" << res.field_names[i] << "\": " << res.errors[i]
        << (i + 1 < res.errors.size() ? ",\n" : "\n");
    f << "}\n";
  }

  std::cout << "n=" << n << " h=" << res.h << " dt=" << res.dt << " steps=" << res.n_steps
            << " free_dofs=" << res.free_dofs << "\n";
  std::cout << "max solver residual = " << res.trajectory.max_solver_residual << "\n";
  const double href = res.trajectory.max_abs_energy();
  std::cout << "max power-balance residual (relative) = "
            << (href > 0 ? res.trajectory.max_abs_power_residual() / href : 0.0) << "\n";
  for (std::size_t i = 0; i < res.errors.size(); ++i)
    std::cout << "error[" << res.field_names[i] << "] = " << res.errors[i] << "\n";
  return res.structure.pass ? kExitOk : kExitInvariant;
}

int cmd_converge(const CommonOpts& o) {
  RunConfig cfg = to_config(o);
  ConvergenceResult res = run_convergence(cfg);
  std::filesystem::create_directories(o.out_dir);

  const std::string stem =
      std::string(scheme_name(cfg.scheme)) + "_k" + std::to_string(cfg.degree);
  if (wants(o, "csv")) {
    std::ofstream f(o.out_dir + "/" + stem + "_convergence.csv");
    write_csv(f, res.report);
  }
  if (wants(o, "json")) {
    std::ofstream f(o.out_dir + "/" + stem + "_convergence.json");
    write_json(f, res.report);
  }
  if (wants(o, "svg")) {
    for (const auto& table : res.report.fields) {
      std::ofstream f(o.out_dir + "/" + stem + "_" + table.name + ".svg");
      f << svg_loglog(table, cfg.degree,
                      res.report.scheme + " k=" + std::to_string(cfg.degree) + "  " + table.name +
                          " (" + table.norm + ")");
    }
  }

  for (const auto& table : res.report.fields) {
    std::cout << table.name << " (" << table.norm << "): slope[all] = " << table.ls_slope_all
              << ", slope[finest3] = " << table.ls_slope_finest << "\n";
  }
  if (!res.structure_pass) {
    std::cout << "structure invariants VIOLATED\n";
    return kExitInvariant;
  }
  if (!res.rate_gate_pass) {
    std::cout << "rate check FAILED (expected slope >= k - 0.25 on the finest levels)\n";
    return kExitRate;
  }
  std::cout << "rate check passed\n";
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure-preserving mixed finite element plate simulator"};
  app.require_subcommand(1);

  CommonOpts vo, ro, co;
  CLI::App* verify = app.add_subcommand("verify", "Assemble and check structural invariants");
  add_common(verify, vo);
  CLI::App* run = app.add_subcommand("run", "Single simulation with energy trace and errors");
  add_common(run, ro);
  run->add_flag("--no-forcing", ro.no_forcing, "Disable forcing (conservation run)");
  CLI::App* converge = app.add_subcommand("converge", "Convergence sweep over mesh sizes");
  add_common(converge, co);

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return cmd_verify(vo);
    if (run->parsed()) return cmd_run(ro);
    if (converge->parsed()) return cmd_converge(co);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitOk;
}
