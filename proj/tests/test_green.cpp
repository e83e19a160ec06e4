#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "hym/green.hpp"
#include "oracles/fourier_green.hpp"

using namespace hym;
using C = std::complex<double>;
using CL = std::complex<long double>;

namespace {

TorusDivisor default_divisor() {
  return TorusDivisor({{0.2, 0.2, 1}, {0.7, 0.25, 1}, {0.25, 0.7, 1}, {0.7, 0.7, 1}, {0.45, 0.45, -4}});
}

std::vector<oracle::Charge> charges(const TorusDivisor& d) {
  std::vector<oracle::Charge> out;
  for (const auto& p : d.points()) out.push_back({p.x, p.y, p.coeff});
  return out;
}

double distance_to_divisor(const TorusDivisor& d, C z) {
  double best = 1;
  for (const auto& p : d.points()) best = std::min(best, std::abs(reduce_to_cell(C(z - C(p.x, p.y)))));
  return best;
}

/// 100 uniform points at torus distance > dmin from the divisor.
std::vector<C> sample_points(const TorusDivisor& d, double dmin, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0, 1);
  std::vector<C> out;
  while (out.size() < 100) {
    const C z(U(rng), U(rng));
    if (distance_to_divisor(d, z) > dmin) out.push_back(z);
  }
  return out;
}

constexpr double kChartRadius = 0.1;

}  // namespace

TEST_SUITE("torus_green") {

TEST_CASE("theta1 zeros, oddness and quasi-periodicity") {
  using T = Theta<double>;
  CHECK(std::abs(T::theta1(0.0)) == 0.0);
  const C z(0.3, 0.2);
  CHECK(std::abs(T::theta1(-z) + T::theta1(z)) < 1e-15);
  CHECK(std::abs(T::theta1(z + 1.0) + T::theta1(z)) < 1e-12);
  // theta1(z + i) = -e^{pi} e^{-2 pi i z} theta1(z).
  const double pi = hym::pi<double>();
  const C factor = -std::exp(pi) * std::exp(C(0, -2 * pi) * z);
  CHECK(std::abs(T::theta1(z + C(0, 1)) - factor * T::theta1(z)) < 1e-12 * std::abs(T::theta1(z + C(0, 1))));
  for (C lattice : {C(1, 0), C(0, 1), C(1, 1), C(-2, 1)}) CHECK(std::abs(T::theta1(lattice)) < 1e-13);
}

TEST_CASE("theta1'(0) equals pi theta2 theta3 theta4") {
  using T = Theta<double>;
  const double rhs = hym::pi<double>() * T::theta2_0() * T::theta3_0() * T::theta4_0();
  CHECK(std::abs(T::theta1_prime0() - rhs) < 1e-12);
  CHECK(std::abs(T::theta1_over_z(0.0) - T::theta1_prime0()) < 1e-14);
  const C d(1e-5, -2e-5);
  CHECK(std::abs(T::theta1_over_z(d) - T::theta1(d) / d) < 1e-9);
}

TEST_CASE("divisor validation") {
  CHECK_THROWS_AS(TorusDivisor({{0.2, 0.2, 1}, {0.4, 0.4, -3}}), ValidationError);
  CHECK_THROWS_AS(TorusDivisor({{0.25, 0.5, 1}, {1.25, -0.5, -1}}), ValidationError);
  CHECK_THROWS_AS(TorusDivisor({{0.2, 0.2, 0}}), ValidationError);
  const TorusDivisor d({{1.25, -0.5, 2}, {0.5, 0.5, -2}});
  CHECK(d[0].x == 0.25);
  CHECK(d[0].y == 0.5);
}

TEST_CASE("G is doubly periodic") {
  const auto D = default_divisor();
  const GreenField<double> G(D);
  double worst = 0;
  for (const C& z : sample_points(D, 1e-3, 11)) {
    const double g = G(z);
    worst = std::max({worst, std::abs(G(z + 1.0) - g), std::abs(G(z + C(0, 1)) - g),
                      std::abs(G(z - C(3, 2)) - g)});
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("G matches the Fourier-series Poisson solve") {
  const auto D = default_divisor();
  const GreenField<double> G(D);
  const auto ch = charges(D);
  CHECK(std::abs(G(C(0.1, 0.55)) - oracle::fourier_green(ch, 0.1, 0.55)) < 1e-8);
  double worst = 0;
  for (const C& z : sample_points(D, 0.05, 12))
    worst = std::max(worst, std::abs(G(z) - oracle::fourier_green(ch, z.real(), z.imag())));
  CHECK(worst < 1e-8);
  // The closed form has exact mean zero; the midpoint grid mean only sees
  // quadrature error from the log singularities.
  CHECK(std::abs(G.grid_mean()) < 1e-3);
}

TEST_CASE("logarithmic behaviour at the divisor") {
  const auto D = default_divisor();
  const GreenField<double> G(D);
  for (std::size_t a = 0; a < D.size(); ++a) {
    const C xi(D[a].x, D[a].y);
    const double c = D[a].coeff;
    // G + c log|delta| tends to 2 g_a(xi) at a rate set by |grad g_a|.
    const double limit = 2 * G.harmonic_part(a, xi, kChartRadius);
    for (double r : {1e-2, 1e-4, 1e-6})
      CHECK(std::abs(G(xi + C(r * 0.6, r * 0.8)) + c * std::log(r) - limit) < 20 * r);
  }
}

TEST_CASE("pole error names the point and divergence sign") {
  const auto D = default_divisor();
  const GreenField<double> G(D);
  try {
    G(C(0.45, 0.45) + C(1, -1));
    FAIL("expected PoleError");
  } catch (const PoleError& e) {
    CHECK(e.index() == 4);
    CHECK(e.sign() == -1);
  }
  try {
    G(C(0.7, 0.25));
    FAIL("expected PoleError");
  } catch (const PoleError& e) {
    CHECK(e.index() == 1);
    CHECK(e.sign() == 1);
  }
}

TEST_CASE("laplacian probe on quadratics") {
  auto f = [](const C& z) { return z.real() * z.real(); };
  CHECK(laplacian_probe<double>(f, C(0.3, -0.2), 1e-3) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK_THROWS_AS(laplacian_probe<double>(f, C(0, 0), 0.0), ValidationError);
}

TEST_CASE("G is harmonic away from the divisor") {
  const auto D = default_divisor();
  const GreenField<long double> G(D);
  double worst = 0;
  for (const C& z : sample_points(D, 0.05, 13))
    worst = std::max(worst, double(std::abs(laplacian_probe<long double>(G, CL(z), 2e-6L))));
  CHECK(worst < 1e-5);
}

TEST_CASE("translation equivariance of G differences") {
  const auto D = default_divisor();
  const GreenField<double> G(D);
  const C v(0.137, -0.291);
  const GreenField<double> Gt(D.translated(v.real(), v.imag()));
  const auto pts = sample_points(D, 0.05, 14);
  double worst = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
    const double before = G(pts[i]) - G(pts[i + 1]);
    const double after = Gt(pts[i] + v) - Gt(pts[i + 1] + v);
    worst = std::max(worst, std::abs(after - before));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("harmonic parts: removable singularity, mean value, harmonicity") {
  const auto D = default_divisor();
  const GreenField<double> G(D);
  const GreenField<long double> GL(D);
  const double pi = hym::pi<double>();
  for (std::size_t a = 0; a < D.size(); ++a) {
    CAPTURE(a);
    const C xi(D[a].x, D[a].y);
    const double c = D[a].coeff;
    // Agrees with the definition away from the center.
    const C z = xi + C(0.03, -0.04);
    CHECK(std::abs(G.harmonic_part(a, z, kChartRadius) - (G(z) + c * std::log(0.05)) / 2) < 1e-12);
    // g_a has a nonzero gradient at the center, so values at |delta| -> 0
    // converge linearly; the symmetric average cancels the linear term.
    const double g0 = G.harmonic_part(a, xi, kChartRadius);
    CHECK(std::isfinite(g0));
    for (double r : {1e-4, 1e-5, 1e-6}) {
      const double gp = G.harmonic_part(a, xi + C(r, 0), kChartRadius);
      const double gm = G.harmonic_part(a, xi - C(r, 0), kChartRadius);
      CHECK(std::abs((gp + gm) / 2 - g0) < 1e-6);
      CHECK(std::abs(gp - g0) < 10 * r);
    }
    // 32-point circle average around a few centers in the chart.
    for (C center : {xi, xi + C(0.02, 0.01), xi + C(-0.03, 0.02)}) {
      const double rad = 0.05;
      double avg = 0;
      for (int k = 0; k < 32; ++k)
        avg += G.harmonic_part(a, center + rad * std::polar(1.0, 2 * pi * k / 32), kChartRadius);
      avg /= 32;
      CHECK(std::abs(avg - G.harmonic_part(a, center, kChartRadius)) < 1e-8);
    }
    auto g = [&](const CL& w) { return GL.harmonic_part(a, w, 0.1L); };
    for (C p : {xi, xi + C(0.05, 0.05), xi + C(-0.08, 0.0)})
      CHECK(std::abs(double(laplacian_probe<long double>(g, CL(p), 2e-6L))) < 1e-5);
    CHECK_THROWS_AS(G.harmonic_part(a, xi + C(0.1, 0.01), kChartRadius), ValidationError);
  }
}

}  // TEST_SUITE
