// Acceptance suite: runs every structural, conservation and convergence
// requirement end to end and prints one PASS/FAIL line per criterion.

#include "oracle_dense.hpp"
#include "phplate/driver.hpp"
#include "phplate/linalg.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <vector>

using namespace phplate;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
  std::printf("criterion %d [%s]: %s%s%s\n", criterion, name.c_str(), pass ? "PASS" : "FAIL",
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++failures;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

MaterialParams params_of(Scheme s) {
  return s == Scheme::Hhj ? kirchhoff_params() : mindlin_params();
}

// ---------------------------------------------------------------- 1
void structure_suite() {
  Timer timer;
  bool pass = true;
  std::string detail;
  for (Scheme scheme : {Scheme::Bjt, Scheme::Afw, Scheme::Hhj})
    for (int k : {1, 2, 3})
      for (int n : {2, 4, 8}) {
        PlateSystem sys = make_system(scheme, n, k, params_of(scheme));
        StructureReport rep = verify_structure(sys);
        bool ok = rep.sym_residual <= 1e-12 && rep.skew_residual <= 1e-12;
        if (scheme == Scheme::Afw)
          ok = ok && rep.neg_inertia_matches && rep.multiplier_dim == sys.field("E_r").size;
        else
          ok = ok && rep.mass_spd;
        if (!ok && detail.empty())
          detail = std::string("first violation at ") + scheme_name(scheme) + " k=" +
                   std::to_string(k) + " n=" + std::to_string(n);
        pass = pass && ok;
      }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "27 systems, %.1f s", timer.seconds());
  report(1, "structure", pass, detail.empty() ? buf : detail);
}

// ---------------------------------------------------------------- 2
void oracle_suite() {
  Timer timer;
  bool pass = true;
  double worst = 0.0;
  auto rel_dev = [](const SpMat& got, const MatX& ref) {
    const double scale = ref.cwiseAbs().maxCoeff();
    const double dev = (MatX(got) - ref).cwiseAbs().maxCoeff();
    // a zero block pair (possible on the degenerate two-triangle mesh) must
    // agree exactly
    return scale == 0.0 ? dev : dev / scale;
  };
  auto check = [&](const PlateSystem& sys) {
    testing::DenseSystem ref = testing::oracle_assemble(sys);
    double dm = rel_dev(sys.M, ref.M);
    double dj = rel_dev(sys.J, ref.J);
    worst = std::max({worst, dm, dj});
    pass = pass && dm <= 1e-13 && dj <= 1e-13;
  };
  for (int k : {1, 2, 3}) {
    auto rect1 = std::make_shared<const RectMesh>(build_rect_grid(1));
    check(assemble_system(Scheme::Bjt, rect1, k, mindlin_params()));
    auto tri1 = std::make_shared<const TriMesh>(build_tri_grid(1));
    check(assemble_system(Scheme::Afw, tri1, k, mindlin_params()));
    check(assemble_system(Scheme::Hhj, tri1, k, kirchhoff_params()));
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "max relative deviation %.2e, %.1f s", worst, timer.seconds());
  report(2, "dense-oracle equivalence", pass, buf);
}

// ---------------------------------------------------------------- 3
void conservation_suite() {
  Timer timer;
  bool pass = true;
  std::string detail;
  for (Scheme scheme : {Scheme::Bjt, Scheme::Afw, Scheme::Hhj}) {
    RunConfig cfg;
    cfg.scheme = scheme;
    cfg.degree = 1;
    cfg.forcing = false;
    SingleRunResult unforced = run_single(cfg, 8);
    const double h0 = unforced.trajectory.energy.front();
    const double drift = std::abs(unforced.trajectory.energy.back() - h0) / h0;
    bool ok = drift <= 1e-9;

    cfg.forcing = true;
    SingleRunResult forced = run_single(cfg, 8);
    const double power = forced.trajectory.max_abs_power_residual() /
                         forced.trajectory.max_abs_energy();
    ok = ok && power <= 1e-10;
    if (!ok && detail.empty()) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s: drift %.2e, power residual %.2e",
                    scheme_name(scheme), drift, power);
      detail = buf;
    }
    pass = pass && ok;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f s", timer.seconds());
  report(3, "energy conservation / power balance", pass, detail.empty() ? buf : detail);
}

// ------------------------------------------------------------ 4, 5, 6
struct SlopeCheck {
  std::string field;
  double lo = 0.0;
  double hi = 1e300;
};

bool convergence_case(Scheme scheme, int k, const std::vector<int>& ns,
                      const std::vector<SlopeCheck>& checks, std::string& detail) {
  RunConfig cfg;
  cfg.scheme = scheme;
  cfg.degree = k;
  cfg.ns = ns;
  ConvergenceResult res = run_convergence(cfg);
  bool pass = res.structure_pass;
  for (const auto& chk : checks) {
    double slope = 0.0;
    for (const auto& f : res.report.fields)
      if (f.name == chk.field) slope = f.ls_slope_finest;
    const bool ok = slope >= chk.lo && slope <= chk.hi;
    std::printf("    %s k=%d %-8s slope %.3f  window [%.2f, %s]  %s\n", scheme_name(scheme), k,
                chk.field.c_str(), slope, chk.lo,
                chk.hi > 1e100 ? "inf" : std::to_string(chk.hi).substr(0, 4).c_str(),
                ok ? "ok" : "OUT OF WINDOW");
    pass = pass && ok;
    if (!ok) {
      char buf[200];
      if (!detail.empty()) detail += "; ";
      std::snprintf(buf, sizeof(buf), "%s k=%d %s slope %.3f outside [%.2f, %.2f]",
                    scheme_name(scheme), k, chk.field.c_str(), slope, chk.lo, chk.hi);
      detail += buf;
    }
  }
  return pass;
}

void kirchhoff_convergence() {
  Timer timer;
  bool pass = true;
  std::string detail;
  for (int k : {1, 2}) {
    std::vector<SlopeCheck> checks = {{"e_w", k - 0.25, k + 0.6}, {"E_kappa", k - 0.25, k + 0.6}};
    pass = convergence_case(Scheme::Hhj, k, {4, 8, 16, 32}, checks, detail) && pass;
  }
  std::vector<SlopeCheck> checks3 = {{"e_w", 2.75, 3.6}, {"E_kappa", 2.75, 3.6}};
  pass = convergence_case(Scheme::Hhj, 3, {4, 8, 16}, checks3, detail) && pass;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f s", timer.seconds());
  report(4, "thin-plate convergence", pass, detail.empty() ? buf : detail);
}

void bjt_convergence() {
  Timer timer;
  bool pass = true;
  std::string detail;
  for (int k : {1, 2}) {
    std::vector<SlopeCheck> checks;
    for (const char* f : {"e_w", "e_theta", "E_kappa", "e_gamma"})
      checks.push_back({f, k - 0.25, k + 0.6});
    pass = convergence_case(Scheme::Bjt, k, {4, 8, 16, 32}, checks, detail) && pass;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f s", timer.seconds());
  report(5, "square-mesh Mindlin convergence", pass, detail.empty() ? buf : detail);
}

void afw_convergence() {
  Timer timer;
  bool pass = true;
  std::string detail;
  std::vector<SlopeCheck> k1 = {{"e_w", 0.75, 1.6},
                                {"e_theta", 0.75, 1.6},
                                {"e_gamma", 0.75, 1.6},
                                {"E_kappa", 1.25, 1e300}};
  pass = convergence_case(Scheme::Afw, 1, {4, 8, 16, 32}, k1, detail) && pass;
  std::vector<SlopeCheck> k2;
  for (const char* f : {"e_w", "e_theta", "E_kappa", "e_gamma"}) k2.push_back({f, 1.75, 2.6});
  pass = convergence_case(Scheme::Afw, 2, {4, 8, 16, 32}, k2, detail) && pass;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f s", timer.seconds());
  report(6, "triangle-mesh Mindlin convergence", pass, detail.empty() ? buf : detail);
}

// ---------------------------------------------------------------- 7
void manufactured_suite() {
  Timer timer;
  ResidualReport mindlin = strong_form_residuals(mindlin_exact(), 1000, 31412);
  ResidualReport kirchhoff = strong_form_residuals(kirchhoff_exact(), 1000, 27182);
  bool pass = mindlin.max_scaled_residual <= 1e-8 && kirchhoff.max_scaled_residual <= 1e-8;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "scaled residuals %.2e / %.2e, %.1f s",
                mindlin.max_scaled_residual, kirchhoff.max_scaled_residual, timer.seconds());
  report(7, "manufactured-solution strong-form oracle", pass, buf);
}

} // namespace

int main() {
  Timer total;
  structure_suite();
  oracle_suite();
  conservation_suite();
  kirchhoff_convergence();
  bjt_convergence();
  afw_convergence();
  manufactured_suite();
  std::printf("acceptance total: %.1f s, %d criterion failure(s)\n", total.seconds(), failures);
  return failures == 0 ? 0 : 1;
}
