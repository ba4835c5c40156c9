#include "phplate/report.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace phplate {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

} // namespace

void write_csv(std::ostream& os, const ConvergenceReport& report) {
  os << "field,h,error,rate\n";
  for (const auto& f : report.fields)
    for (std::size_t i = 0; i < f.h.size(); ++i) {
      os << f.name << ',' << fmt(f.h[i]) << ',' << fmt(f.error[i]) << ',';
      if (i == 0)
        os << "nan";
      else
        os << fmt(f.rate[i]);
      os << '\n';
    }
}

void write_json(std::ostream& os, const ConvergenceReport& report) {
  nlohmann::ordered_json j;
  j["scheme"] = report.scheme;
  j["degree"] = report.degree;
  for (const auto& f : report.fields) {
    nlohmann::ordered_json jf;
    jf["norm"] = f.norm;
    jf["h"] = f.h;
    jf["error"] = f.error;
    std::vector<double> rates(f.rate.begin() + (f.rate.empty() ? 0 : 1), f.rate.end());
    jf["rate"] = rates;
    jf["ls_slope_all"] = f.ls_slope_all;
    jf["ls_slope_finest"] = f.ls_slope_finest;
    j["fields"][f.name] = jf;
  }
  j["metadata"] = report.metadata;
  os << j.dump(2) << '\n';
}

void write_energy_csv(std::ostream& os, const std::vector<double>& t,
                      const std::vector<double>& energy,
                      const std::vector<double>& power_residual) {
  os << "t,H,power_residual\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    os << fmt(t[i]) << ',' << fmt(energy[i]) << ',';
    os << fmt(i == 0 ? 0.0 : power_residual[i - 1]) << '\n';
  }
}

std::string svg_loglog(const FieldTable& table, int reference_slope, const std::string& title) {
  const int width = 480, height = 400;
  const double ml = 70, mr = 20, mt = 40, mb = 50;

  double lx0 = 0, lx1 = 0, ly0 = 0, ly1 = 0;
  for (std::size_t i = 0; i < table.h.size(); ++i) {
    double lx = std::log10(table.h[i]), ly = std::log10(table.error[i]);
    if (i == 0) {
      lx0 = lx1 = lx;
      ly0 = ly1 = ly;
    }
    lx0 = std::min(lx0, lx);
    lx1 = std::max(lx1, lx);
    ly0 = std::min(ly0, ly);
    ly1 = std::max(ly1, ly);
  }
  // reference line span may extend the y range
  {
    double lyref = std::log10(table.error.back()) +
                   reference_slope * (lx1 - std::log10(table.h.back()));
    ly1 = std::max(ly1, lyref);
  }
  lx0 -= 0.12;
  lx1 += 0.12;
  ly0 -= 0.25;
  ly1 += 0.25;

  auto px = [&](double lx) { return ml + (lx - lx0) / (lx1 - lx0) * (width - ml - mr); };
  auto py = [&](double ly) { return height - mb - (ly - ly0) / (ly1 - ly0) * (height - mt - mb); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
       "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
       " " + std::to_string(height) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + fmt_short(width / 2.0) + "\" y=\"22\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"14\">" + title + "</text>\n";

  // frame
  s += "<rect x=\"" + fmt_short(ml) + "\" y=\"" + fmt_short(mt) + "\" width=\"" +
       fmt_short(width - ml - mr) + "\" height=\"" + fmt_short(height - mt - mb) +
       "\" fill=\"none\" stroke=\"black\"/>\n";

  // decade ticks on the error axis
  for (int d = static_cast<int>(std::ceil(ly0)); d <= static_cast<int>(std::floor(ly1)); ++d) {
    double y = py(d);
    s += "<line x1=\"" + fmt_short(ml - 4) + "\" y1=\"" + fmt_short(y) + "\" x2=\"" +
         fmt_short(ml) + "\" y2=\"" + fmt_short(y) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt_short(ml - 8) + "\" y=\"" + fmt_short(y + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" +
         std::to_string(d) + "</text>\n";
  }
  // ticks at the mesh sizes
  for (std::size_t i = 0; i < table.h.size(); ++i) {
    double x = px(std::log10(table.h[i]));
    s += "<line x1=\"" + fmt_short(x) + "\" y1=\"" + fmt_short(height - mb) + "\" x2=\"" +
         fmt_short(x) + "\" y2=\"" + fmt_short(height - mb + 4) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt_short(x) + "\" y=\"" + fmt_short(height - mb + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
         fmt_short(table.h[i]) + "</text>\n";
  }
  s += "<text x=\"" + fmt_short((ml + width - mr) / 2.0) + "\" y=\"" +
       fmt_short(height - 12.0) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">h</text>\n";

  // data polyline + markers
  std::string pts;
  for (std::size_t i = 0; i < table.h.size(); ++i) {
    pts += fmt_short(px(std::log10(table.h[i]))) + "," +
           fmt_short(py(std::log10(table.error[i]))) + " ";
  }
  s += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.6\"/>\n";
  for (std::size_t i = 0; i < table.h.size(); ++i) {
    s += "<circle cx=\"" + fmt_short(px(std::log10(table.h[i]))) + "\" cy=\"" +
         fmt_short(py(std::log10(table.error[i]))) + "\" r=\"3\" fill=\"#1f5fa8\"/>\n";
  }

  // dashed reference slope anchored at the finest point
  {
    double hxf = std::log10(table.h.back());
    double eyf = std::log10(table.error.back());
    double hx0 = std::log10(table.h.front());
    double ey0 = eyf + reference_slope * (hx0 - hxf);
    s += "<line x1=\"" + fmt_short(px(hxf)) + "\" y1=\"" + fmt_short(py(eyf)) + "\" x2=\"" +
         fmt_short(px(hx0)) + "\" y2=\"" + fmt_short(py(ey0)) +
         "\" stroke=\"#888888\" stroke-dasharray=\"6,4\"/>\n";
    s += "<text x=\"" + fmt_short(px(hx0) + 4) + "\" y=\"" + fmt_short(py(ey0)) +
         "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555555\">slope " +
         std::to_string(reference_slope) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

} // namespace phplate
