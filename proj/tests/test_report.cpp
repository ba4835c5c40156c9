#include "phplate/report.hpp"

#include "phplate/driver.hpp"

#include "doctest.h"

#include <sstream>

using namespace phplate;

namespace {

ConvergenceReport sample_report() {
  ConvergenceReport rep;
  rep.scheme = "hhj";
  rep.degree = 1;
  FieldTable t;
  t.name = "e_w";
  t.norm = "H1";
  t.h = {0.25, 0.125, 0.0625};
  t.error = {4e-2, 2e-2, 1e-2};
  t.rate = {std::nan(""), 1.0, 1.0};
  t.ls_slope_all = 1.0;
  t.ls_slope_finest = 1.0;
  rep.fields.push_back(t);
  rep.metadata["tf"] = "1";
  return rep;
}

} // namespace

TEST_CASE("csv table layout and determinism") {
  ConvergenceReport rep = sample_report();
  std::ostringstream a, b;
  write_csv(a, rep);
  write_csv(b, rep);
  CHECK(a.str() == b.str());
  std::istringstream is(a.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "field,h,error,rate");
  std::string first;
  std::getline(is, first);
  CHECK(first.substr(0, 4) == "e_w,");
  CHECK(first.find("2.5") != std::string::npos);
  CHECK(first.find("nan") != std::string::npos);
}

TEST_CASE("rows are sorted by decreasing h") {
  ConvergenceReport rep = sample_report();
  for (std::size_t i = 1; i < rep.fields[0].h.size(); ++i)
    CHECK(rep.fields[0].h[i] < rep.fields[0].h[i - 1]);
}

TEST_CASE("json mirrors the csv and carries metadata") {
  ConvergenceReport rep = sample_report();
  std::ostringstream os;
  write_json(os, rep);
  const std::string s = os.str();
  CHECK(s.find("\"scheme\": \"hhj\"") != std::string::npos);
  CHECK(s.find("\"e_w\"") != std::string::npos);
  CHECK(s.find("\"ls_slope_finest\"") != std::string::npos);
  CHECK(s.find("\"metadata\"") != std::string::npos);
  CHECK(s.find("\"tf\"") != std::string::npos);
}

TEST_CASE("svg is self-contained with data points and a reference slope") {
  ConvergenceReport rep = sample_report();
  std::string svg = svg_loglog(rep.fields[0], 1, "test plot");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(svg.find("slope 1") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);
  // deterministic emission
  CHECK(svg == svg_loglog(rep.fields[0], 1, "test plot"));
}

TEST_CASE("energy trace csv has one row per time point") {
  std::ostringstream os;
  write_energy_csv(os, {0.0, 0.1, 0.2}, {1.0, 1.0, 1.0}, {1e-15, -1e-15});
  std::istringstream is(os.str());
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 4); // header + 3
}

TEST_CASE("single run writes consistent trajectory lengths") {
  RunConfig cfg;
  cfg.scheme = Scheme::Hhj;
  cfg.degree = 1;
  cfg.ns = {4};
  SingleRunResult res = run_single(cfg, 4);
  // round(tf / (h/10)) + 1 rows
  CHECK(res.n_steps == 40);
  CHECK(res.trajectory.t.size() == 41);
  CHECK(res.trajectory.energy.size() == 41);
  CHECK(res.trajectory.power_residual.size() == 40);
  CHECK(res.errors.size() == res.field_names.size());
  // errors stay below the exact-solution norm bound
  CHECK(res.errors[0] < 2.3);
  CHECK(res.errors[0] > 0.0);
}

TEST_CASE("rate gate passes on-target slopes and rejects degraded ones") {
  ConvergenceReport rep = sample_report(); // e_w slope 1.0
  CHECK(rate_gate(rep, 1));
  CHECK_FALSE(rate_gate(rep, 2)); // 1.0 < 2 - 0.25

  FieldTable bad;
  bad.name = "e_gamma";
  bad.norm = "L2";
  bad.ls_slope_finest = 0.5;
  rep.fields.push_back(bad);
  CHECK_FALSE(rate_gate(rep, 1));

  // the multiplier field is reported but never gated
  rep.fields.back().name = "E_r";
  CHECK(rate_gate(rep, 1));
}

TEST_CASE("unforced configuration skips error reporting but keeps traces") {
  RunConfig cfg;
  cfg.scheme = Scheme::Afw;
  cfg.degree = 1;
  cfg.ns = {2};
  cfg.forcing = false;
  SingleRunResult res = run_single(cfg, 2);
  CHECK(res.errors.empty());
  REQUIRE(res.trajectory.energy.size() > 1);
  const double h0 = res.trajectory.energy.front();
  CHECK(std::abs(res.trajectory.energy.back() - h0) <= 1e-9 * h0);
}
