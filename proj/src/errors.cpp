#include "phplate/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace phplate {

ErrorAccumulator::ErrorAccumulator(const PlateSystem& sys, std::vector<Spec> specs)
    : sys_(sys), specs_(std::move(specs)) {
  const int exact = elevated_exactness(sys.degree);
  quads_.reserve(static_cast<std::size_t>(sys.n_cells()));
  for (Index c = 0; c < sys.n_cells(); ++c) quads_.push_back(cell_quadrature(sys, c, exact));

  tabs_.resize(specs_.size());
  max_error_.assign(specs_.size(), 0.0);
  for (std::size_t s = 0; s < specs_.size(); ++s) {
    const Field& field = sys.field(specs_[s].field);
    if (specs_[s].h1 && (field.comps.size() != 1 || field.comps[0]->components() != 1))
      throw std::invalid_argument("ErrorAccumulator: H1 norm needs a scalar field");
    for (std::size_t comp = 0; comp < field.comps.size(); ++comp) {
      CompTab ct;
      ct.space = field.comps[comp].get();
      ct.offset = field.comp_offset(comp);
      ct.cells.reserve(static_cast<std::size_t>(sys.n_cells()));
      const int deriv = specs_[s].h1 ? 1 : 0;
      for (Index c = 0; c < sys.n_cells(); ++c)
        ct.cells.push_back(ct.space->tabulate(c, quads_[static_cast<std::size_t>(c)].points, deriv));
      tabs_[s].push_back(std::move(ct));
    }
  }
}

void ErrorAccumulator::observe(Index, double t, const VecX& e_free) {
  VecX full = sys_.expand_from_free(e_free);

  for (std::size_t s = 0; s < specs_.size(); ++s) {
    double err2 = 0.0;
    for (Index c = 0; c < sys_.n_cells(); ++c) {
      const CellQuad& cq = quads_[static_cast<std::size_t>(c)];
      const Index nq = cq.weights.size();

      // exact values at the quadrature points
      int total_slots = 0;
      for (const auto& ct : tabs_[s]) total_slots += ct.space->components();
      if (specs_[s].h1) total_slots = 3;
      MatX exact(nq, total_slots);
      for (Index q = 0; q < nq; ++q)
        exact.row(q) = specs_[s].exact(cq.points[static_cast<std::size_t>(q)], t).transpose();

      int slot = 0;
      for (const auto& ct : tabs_[s]) {
        const Tabulation& tab = ct.cells[static_cast<std::size_t>(c)];
        const auto& dofs = ct.space->cell_dofs(c);
        VecX coeffs = VecX::Zero(tab.n_basis);
        for (Index i = 0; i < tab.n_basis; ++i) {
          Index g = dofs[static_cast<std::size_t>(i)];
          if (g >= 0) coeffs(i) = full(ct.offset + g);
        }
        for (int j = 0; j < ct.space->components(); ++j) {
          const double wslot = (ct.space->components() == 3 && j == 2) ? 2.0 : 1.0;
          VecX diff = tab.value[static_cast<std::size_t>(j)] * coeffs - exact.col(slot + j);
          err2 += wslot * diff.cwiseAbs2().dot(cq.weights);
        }
        if (specs_[s].h1) {
          for (int d = 0; d < 2; ++d) {
            VecX diff = tab.grad[0][static_cast<std::size_t>(d)] * coeffs - exact.col(1 + d);
            err2 += diff.cwiseAbs2().dot(cq.weights);
          }
        }
        slot += ct.space->components();
      }
    }
    max_error_[s] = std::max(max_error_[s], std::sqrt(err2));
  }
}

double l2_norm(const PlateSystem& sys, const std::function<VecX(const Vec2&)>& fn, int n_slots) {
  const int exact = elevated_exactness(sys.degree);
  double acc = 0.0;
  for (Index c = 0; c < sys.n_cells(); ++c) {
    CellQuad cq = cell_quadrature(sys, c, exact);
    for (Index q = 0; q < cq.weights.size(); ++q) {
      VecX v = fn(cq.points[static_cast<std::size_t>(q)]);
      for (int j = 0; j < n_slots; ++j) acc += cq.weights(q) * v(j) * v(j);
    }
  }
  return std::sqrt(acc);
}

RateFit convergence_rates(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2)
    throw std::invalid_argument("convergence_rates: need at least two levels");
  for (double e : err)
    if (!(e > 0.0)) throw std::invalid_argument("convergence_rates: errors must be positive");

  RateFit fit;
  for (std::size_t i = 0; i + 1 < h.size(); ++i)
    fit.successive.push_back(std::log(err[i] / err[i + 1]) / std::log(h[i] / h[i + 1]));

  double mh = 0.0, me = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    mh += std::log(h[i]);
    me += std::log(err[i]);
  }
  mh /= static_cast<double>(h.size());
  me /= static_cast<double>(h.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    num += (std::log(h[i]) - mh) * (std::log(err[i]) - me);
    den += (std::log(h[i]) - mh) * (std::log(h[i]) - mh);
  }
  fit.ls_slope = num / den;
  return fit;
}

double finest_slope(const std::vector<double>& h, const std::vector<double>& err,
                    std::size_t levels) {
  const std::size_t n = std::min(levels, h.size());
  std::vector<double> hs(h.end() - static_cast<std::ptrdiff_t>(n), h.end());
  std::vector<double> es(err.end() - static_cast<std::ptrdiff_t>(n), err.end());
  return convergence_rates(hs, es).ls_slope;
}

} // namespace phplate
