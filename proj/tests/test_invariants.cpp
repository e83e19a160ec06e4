#include <cmath>

#include "doctest.h"
#include "hym/invariants.hpp"

using namespace hym;

namespace {

const GluedMetric& metric_010() {
  static const GluedMetric m = [] {
    const GeometryConfig g;
    return GluedMetric(g, rescale_to_physical(solve_radial(0.1), g.r0));
  }();
  return m;
}

const double kPi = pi<double>();

}  // namespace

TEST_SUITE("invariants") {

TEST_CASE("wedge bookkeeping") {
  const WedgeConvention w;
  CHECK(w.dz_dzbar == Complex(0, -2));
  CHECK(w.dw_dwbar == Complex(0, -2));
  // -2 pi^2 (-2i)^2 = 8 pi^2 per unit w-area.
  CHECK(w.four_form_factor() == doctest::Approx(8 * kPi * kPi).epsilon(1e-15));
}

TEST_CASE("quadrature grids: weights positive and summing to the chart area") {
  const auto p = QuadratureGrid::polar(3, 0.1, {0.05, 0.0667}, 17, 5);
  CHECK(p.chart() == 3);
  CHECK(p.order() == 2);
  CHECK(p.nodes().size() == 3 * 17 * 5);
  for (const auto& n : p.nodes()) CHECK(n.weight > 0);
  CHECK(std::abs(p.weight_sum() - p.area()) < 1e-10);
  CHECK(p.area() == doctest::Approx(kPi * 0.01).epsilon(1e-15));
  CHECK(p.refined().nodes().size() == 2 * p.nodes().size());
  const auto c = QuadratureGrid::cell(0, 32);
  CHECK(std::abs(c.weight_sum() - 1) < 1e-10);
  // r^2 on the disc: exact pi R^4 / 2 up to O(h^2).
  const double m2 = p.integrate<double>([](Complex z) { return std::norm(z); });
  CHECK(m2 == doctest::Approx(kPi * 1e-4 / 2).epsilon(1e-3));
  // Tiling does not change the sum.
  auto f = [](Complex z) { return std::exp(z.real()) * std::cos(z.imag()); };
  CHECK(p.integrate<double>(f, 7) == doctest::Approx(p.integrate<double>(f)).epsilon(1e-14));
  CHECK_THROWS_AS(QuadratureGrid::polar(1, 0.0, {}, 4, 4), ValidationError);
  CHECK_THROWS_AS(QuadratureGrid::cell(0, 0), ValidationError);
}

TEST_CASE("trace identity on every branch chart") {
  const auto& M = metric_010();
  for (int chart = 1; chart <= M.geometry().n; ++chart) {
    const auto t = trace_identity_check(M, branch_grid(M, chart));
    CHECK(t.sup_error < 1e-8);
    CHECK(t.other_blocks_sup == 0.0);
  }
  // Outer plateau: both sides vanish.
  const auto outer = M.curvature_blocks(Complex(0.08, 0), Complex(0), false);
  CHECK(outer.zz.trace() == Complex(0));
  CHECK_THROWS_AS(trace_identity_check(M, QuadratureGrid::cell(0, 8)), ValidationError);
}

TEST_CASE("chart integrals of the trace vanish") {
  const auto& M = metric_010();
  for (int chart = 1; chart <= M.geometry().n; ++chart) CHECK(std::abs(chart_trace_integral(M, branch_grid(M, chart))) < 1e-6);
}

TEST_CASE("flux against volume, singular profile") {
  for (double r0 : {0.05, 0.1}) {
    const auto grid = QuadratureGrid::polar(1, 2 * r0, {r0, 4 * r0 / 3}, 64, 8);
    const auto f = flux_vs_volume(grid, singular_phi(), r0);
    CHECK(f.discrepancy() < 5e-3);
    CHECK(f.converged);
    CHECK(f.boundary == doctest::Approx(16 * kPi * kPi * kPi * r0).epsilon(1e-14));
    CHECK(f.paper == doctest::Approx(16 * kPi * kPi * r0).epsilon(1e-15));
    CHECK(f.ratio == doctest::Approx(kPi).epsilon(5e-3));
  }
  const auto a = flux_vs_volume(QuadratureGrid::polar(1, 0.1, {}, 64, 8), singular_phi(), 0.05);
  const auto b = flux_vs_volume(QuadratureGrid::polar(1, 0.2, {}, 64, 8), singular_phi(), 0.1);
  CHECK(b.volume_refined / a.volume_refined == doctest::Approx(2).epsilon(5e-3));
  CHECK(b.boundary / a.boundary == doctest::Approx(2).epsilon(5e-3));
  CHECK_THROWS_AS(flux_vs_volume(QuadratureGrid::cell(0, 4), singular_phi(), 0.05), ValidationError);
}

TEST_CASE("flux against volume, glued profile, second order") {
  const auto& M = metric_010();
  const auto phi = glued_phi(M);
  double prev = 0;
  for (int per_panel : {32, 64, 128}) {
    const auto f = flux_vs_volume(branch_grid(M, 1, per_panel), phi, M.geometry().r0);
    CHECK(f.discrepancy() < 1e-2);
    CHECK(f.converged);
    if (prev > 0) CHECK(prev / f.discrepancy() == doctest::Approx(4).epsilon(0.15));
    prev = f.discrepancy();
  }
}

TEST_CASE("c1-level integral vanishes") {
  const auto& M = metric_010();
  const auto grids = atlas_grids(M);
  CHECK(c1_vanishing_check(M, grids) < 1e-5);
  auto missing = grids;
  missing.pop_back();
  CHECK_THROWS_AS(c1_vanishing_check(M, missing), ValidationError);
  auto swapped = grids;
  std::swap(swapped[1], swapped[2]);
  CHECK_THROWS_AS(c1_vanishing_check(M, swapped), ValidationError);
  // A degree-nonzero divisor never gets this far.
  GeometryConfig bad;
  bad.divisor_points.push_back({0.95, 0.95});
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  CHECK_THROWS_AS(TorusDivisor({{0.2, 0.2, 1}, {0.5, 0.5, -3}}), ValidationError);
}

}  // TEST_SUITE
