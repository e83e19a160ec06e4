#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <string>
#include <vector>

#include "hym/metric.hpp"

namespace hym {

/// Wedge bookkeeping for the four-form Tr(Theta ^ Theta) on a chart times the
/// w-torus. Every constant in the flux/volume comparison comes from here.
struct WedgeConvention {
  Complex dz_dzbar = dz_dzbar_in_dx1dx2();
  Complex dw_dwbar = dz_dzbar_in_dx1dx2();
  double w_torus_area = 1;

  /// Tr(Theta^Theta) = k phi_zzbar dx1dx2 dy1dy2 integrated over the w-torus,
  /// starting from -2 pi^2 phi_zzbar dz^dzbar^dw^dwbar.
  double four_form_factor() const {
    return (-2 * pi<double>() * pi<double>() * dz_dzbar * dw_dwbar).real() * w_torus_area;
  }
};

struct QuadratureNode {
  Complex z;
  double weight;
};

/// Midpoint product rule. Polar grids split [0, R] into panels at the given
/// breaks (so the rule never straddles a kink of the integrand); the cell grid
/// covers the unit cell of the generic chart. Both are second order.
class QuadratureGrid {
 public:
  static QuadratureGrid polar(int chart, double radius, std::vector<double> breaks, int per_panel, int n_theta) {
    if (!(radius > 0) || per_panel < 1 || n_theta < 1) throw ValidationError("quadrature: bad polar grid");
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> edges{0};
    for (double b : breaks)
      if (b > 0 && b < radius) edges.push_back(b);
    edges.push_back(radius);
    QuadratureGrid g;
    g.chart_ = chart;
    g.area_ = pi<double>() * radius * radius;
    g.radius_ = radius;
    g.breaks_ = breaks;
    g.per_panel_ = per_panel;
    g.n_theta_ = n_theta;
    const double dt = 2 * pi<double>() / n_theta;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
      const double dr = (edges[p + 1] - edges[p]) / per_panel;
      for (int i = 0; i < per_panel; ++i) {
        const double r = edges[p] + (i + 0.5) * dr;
        for (int k = 0; k < n_theta; ++k) g.nodes_.push_back({std::polar(r, (k + 0.5) * dt), r * dr * dt});
      }
    }
    return g;
  }

  static QuadratureGrid cell(int chart, int n) {
    if (n < 1) throw ValidationError("quadrature: bad cell grid");
    QuadratureGrid g;
    g.chart_ = chart;
    g.area_ = 1;
    g.per_panel_ = n;
    const double h = 1.0 / n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g.nodes_.push_back({Complex((i + 0.5) * h, (j + 0.5) * h), h * h});
    return g;
  }

  /// Same rule at half the spacing.
  QuadratureGrid refined() const {
    return radius_ > 0 ? polar(chart_, radius_, breaks_, 2 * per_panel_, n_theta_) : cell(chart_, 2 * per_panel_);
  }

  int chart() const { return chart_; }
  int order() const { return 2; }
  double area() const { return area_; }
  double radius() const { return radius_; }
  const std::vector<QuadratureNode>& nodes() const { return nodes_; }
  double weight_sum() const {
    double s = 0;
    for (const auto& n : nodes_) s += n.weight;
    return s;
  }

  /// sum f(z) w over the nodes; tiles run concurrently and are accumulated in
  /// tile order, so the result does not depend on scheduling.
  template <typename T, typename F>
  T integrate(F&& f, std::size_t tile = 4096) const {
    std::vector<std::future<T>> parts;
    for (std::size_t a = 0; a < nodes_.size(); a += tile) {
      const std::size_t b = std::min(nodes_.size(), a + tile);
      parts.push_back(std::async(std::launch::async, [&, a, b] {
        T s{};
        for (std::size_t i = a; i < b; ++i) s += f(nodes_[i].z) * nodes_[i].weight;
        return s;
      }));
    }
    T total{};
    for (auto& p : parts) total += p.get();
    return total;
  }

 private:
  int chart_ = -1;
  double area_ = 0, radius_ = 0;
  std::vector<double> breaks_;
  int per_panel_ = 0, n_theta_ = 0;
  std::vector<QuadratureNode> nodes_;
};

/// Default branch-chart grid with panels at r0 and 4 r0 / 3.
inline QuadratureGrid branch_grid(const GluedMetric& m, int chart, int per_panel = 256, int n_theta = 8) {
  const double r0 = m.geometry().r0;
  return QuadratureGrid::polar(chart, m.geometry().chart_radius(), {r0, m.cutoff().outer_radius()}, per_panel,
                               n_theta);
}

struct TraceIdentity {
  /// sup |Tr(dz^dzbar block) + d^2 sigma / dz dzbar|.
  double sup_error = 0;
  /// sup of |Tr| over the dw^dwbar and both mixed blocks.
  double other_blocks_sup = 0;
};

inline void require_branch(const GluedMetric& m, const QuadratureGrid& grid, const char* who) {
  if (!m.is_branch(grid.chart())) throw ValidationError(std::string(who) + ": needs a branch chart");
  if (grid.radius() > m.geometry().chart_radius()) throw ValidationError(std::string(who) + ": grid leaves the chart");
}

/// The unnormalized trace on a branch chart against -ddbar(phi1 + phi2).
inline TraceIdentity trace_identity_check(const GluedMetric& m, const QuadratureGrid& grid) {
  require_branch(m, grid, "trace_identity_check");
  TraceIdentity t;
  for (const auto& n : grid.nodes()) {
    const auto b = m.curvature_blocks(n.z, Complex(0), false);
    const double sigma_zzbar = ddbar_radial(m.phi_pair(std::abs(n.z)).sigma, std::abs(n.z));
    t.sup_error = std::max(t.sup_error, std::abs(b.zz.trace() + sigma_zzbar));
    t.other_blocks_sup =
        std::max({t.other_blocks_sup, std::abs(b.ww.trace()), std::abs(b.zwb.trace()), std::abs(b.zbw.trace())});
  }
  return t;
}

/// Integral over the chart of Tr Theta restricted to dz^dzbar, as a real
/// area integral (dz^dzbar = -2i dx1 dx2).
inline Complex chart_trace_integral(const GluedMetric& m, const QuadratureGrid& grid) {
  require_branch(m, grid, "chart_trace_integral");
  const Complex k = WedgeConvention{}.dz_dzbar;
  return k * grid.integrate<Complex>([&](Complex z) { return m.curvature_blocks(z, Complex(0), false).zz.trace(); });
}

/// Radial potential phi(r) as a jet (value, d/dr, d^2/dr^2).
using RadialJet = std::function<Jet<double>(double)>;

/// phi = 2r, the singular limit.
inline RadialJet singular_phi() {
  return [](double r) { return Jet<double>{2 * r, 2, 0}; };
}

/// phi = r^2 e^{phi1 - phi2} + e^{phi2 - phi1} from the glued data.
inline RadialJet glued_phi(const GluedMetric& m) {
  return [&m](double r) {
    const Jet<double> D = m.phi_pair(r).diff;
    const Jet<double> x = Jet<double>::variable(r);
    return x * x * exp(D) + exp(-D);
  };
}

struct FluxRecord {
  double volume = 0;
  double volume_refined = 0;
  double boundary = 0;
  /// The constant 16 pi^2 r0 quoted for this integral.
  double paper = 0;
  double ratio = 0;
  /// |V(h) - V(h/2)| / |V(h/2)| <= 1%.
  bool converged = false;
  double discrepancy() const { return std::abs(volume_refined - boundary) / std::abs(boundary); }
};

/// Volume integral of Tr(Theta^Theta) over the disc of the grid and the
/// divergence-theorem boundary term at its rim. The volume is reported at
/// the finer of the two resolutions.
inline FluxRecord flux_vs_volume(const QuadratureGrid& grid, const RadialJet& phi, double r0) {
  if (!(grid.radius() > 0)) throw ValidationError("flux_vs_volume: needs a polar grid");
  const double k = WedgeConvention{}.four_form_factor();
  auto integrand = [&](Complex z) {
    const double r = std::abs(z);
    return k * ddbar_radial(phi(r), r);
  };
  FluxRecord f;
  f.volume = grid.integrate<double>(integrand);
  f.volume_refined = grid.refined().integrate<double>(integrand);
  const double R = grid.radius();
  f.boundary = k / 4 * 2 * pi<double>() * R * phi(R).d1;
  f.paper = 16 * pi<double>() * pi<double>() * r0;
  f.ratio = f.volume_refined / f.paper;
  f.converged = std::abs(f.volume - f.volume_refined) <= 0.01 * std::abs(f.volume_refined);
  return f;
}

/// Sum over all charts of the z-slice trace integrals. Branch charts
/// contribute their dz^dzbar quadrature; on the generic and divisor charts
/// the trace is the Poincare form, which has no dz^dzbar component.
inline double c1_vanishing_check(const GluedMetric& m, const std::vector<QuadratureGrid>& grids) {
  const auto& atlas = m.atlas();
  if (grids.size() != atlas.size()) throw ValidationError("c1_vanishing_check: one grid per chart required");
  for (std::size_t c = 0; c < grids.size(); ++c)
    if (grids[c].chart() != static_cast<int>(c))
      throw ValidationError("c1_vanishing_check: chart " + std::to_string(c) + " has no grid");
  Complex total = 0;
  for (std::size_t c = 0; c < grids.size(); ++c)
    if (m.is_branch(static_cast<int>(c))) total += chart_trace_integral(m, grids[c]);
  return std::abs(total);
}

/// Default grids for the whole atlas.
inline std::vector<QuadratureGrid> atlas_grids(const GluedMetric& m, int per_panel = 256) {
  std::vector<QuadratureGrid> grids;
  for (int c = 0; c < static_cast<int>(m.atlas().size()); ++c) {
    if (m.is_branch(c)) grids.push_back(branch_grid(m, c, per_panel));
    else if (c == 0) grids.push_back(QuadratureGrid::cell(0, 64));
    else grids.push_back(QuadratureGrid::polar(c, m.geometry().chart_radius(), {}, per_panel, 8));
  }
  return grids;
}

}  // namespace hym
