#include <complex>
#include <random>

#include "doctest.h"
#include "hym/charts.hpp"

using namespace hym;
using C = std::complex<double>;

namespace {

struct Sampler {
  std::mt19937_64 rng{21};
  std::uniform_real_distribution<double> U{-1, 1};
  C disc(double radius) {
    for (;;) {
      const C z(U(rng), U(rng));
      if (std::abs(z) < 1) return radius * z;
    }
  }
  C box() { return {U(rng), U(rng)}; }
};

double max_abs(const Matrix2c<double>& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("bundle_charts") {

TEST_CASE("default geometry is valid and builds the atlas") {
  const GeometryConfig g;
  CHECK_NOTHROW(g.validate());
  const auto atlas = build_atlas(g);
  REQUIRE(atlas.size() == 6);
  CHECK(atlas[0].kind == ChartKind::Generic);
  for (int a = 1; a <= 4; ++a) CHECK(atlas[a].kind == ChartKind::Branch);
  CHECK(atlas[5].kind == ChartKind::Divisor);
  const auto D = g.divisor();
  int degree = 0;
  for (const auto& p : D.points()) degree += p.coeff;
  CHECK(degree == 0);
  CHECK(D[4].coeff == -4);
}

TEST_CASE("geometry validation") {
  GeometryConfig g;
  g.divisor_points[0] = {0.27, 0.27};
  CHECK_THROWS_AS(g.validate(), ValidationError);
  g = {};
  g.n = 6;
  CHECK_THROWS_AS(g.validate(), ValidationError);
  g = {};
  g.branch_points.pop_back();
  CHECK_THROWS_AS(g.validate(), ValidationError);
  g = {};
  g.r0 = 0.0;
  CHECK_THROWS_AS(g.validate(), ValidationError);
  g = {};
  g.branch_points[0] = {1.2, 0.2};
  CHECK_THROWS_AS(g.validate(), ValidationError);
  // Overlap detected across the torus seam.
  g = {};
  g.branch_points[0] = {0.02, 0.5};
  g.branch_points[1] = {0.95, 0.5};
  CHECK_THROWS_AS(g.validate(), ValidationError);
}

TEST_CASE("transitions are the identity at w = 0") {
  const auto atlas = build_atlas(GeometryConfig{});
  for (const auto& chart : atlas) {
    const auto m = transition_smooth_to_holo(chart, C(0.03, -0.02), C(0, 0));
    CHECK(max_abs(m - Matrix2c<double>::Identity()) == 0.0);
  }
}

TEST_CASE("branch transitions: unimodular, branch independent, regular at z = 0") {
  Sampler S;
  double det_err = 0, swap_err = 0;
  for (int k = 0; k < 100; ++k) {
    const C z = S.disc(0.1), w = S.box();
    const C s = std::sqrt(z);
    const auto m = branch_transition(s, w);
    det_err = std::max(det_err, std::abs(m.determinant() - 1.0));
    swap_err = std::max(swap_err, max_abs(m - branch_transition(C(-s), w)));
  }
  CHECK(det_err < 1e-12);
  CHECK(swap_err < 1e-12);
  const C w(0.3, -0.4);
  const auto m0 = branch_transition(C(0, 0), w);
  const C piw = C(0, pi<double>()) * std::conj(w);
  CHECK(std::abs(m0(0, 0) - 1.0) == 0.0);
  CHECK(std::abs(m0(0, 1)) == 0.0);
  CHECK(std::abs(m0(1, 0) - piw) < 1e-15);
  // Continuity into the branch point.
  const auto near = branch_transition(std::sqrt(C(1e-12, 1e-12)), w);
  CHECK(max_abs(near - m0) < 1e-10);
}

TEST_CASE("conjugation identity against the frame change") {
  Sampler S;
  CHECK(conjugation_identity_error(C(0.04, 0.01), C(0, 0)) < 1e-15);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    const C z = S.disc(0.1), w = S.box();
    const double e = conjugation_identity_error(z, w);
    worst = std::max(worst, e);
    CHECK(std::abs(conjugation_identity_error(z, w, true) - e) < 1e-13);
  }
  CHECK(worst < 1e-12);
  CHECK_THROWS_AS(conjugation_identity_error(C(0, 0), C(0.1, 0)), ValidationError);
}

TEST_CASE("overlaps and lattice equivariance of the generic transition") {
  const GeometryConfig g;
  const auto atlas = build_atlas(g);
  Sampler S;
  double overlap = 0, equiv = 0;
  for (int k = 0; k < 50; ++k) {
    const C z = S.disc(0.1), w = S.box();
    overlap = std::max(overlap, max_abs(transition_smooth_to_holo(atlas[5], z, w) -
                                        transition_smooth_to_holo(atlas[0], z, w)));
    for (C lambda : {C(1, 0), C(0, 1), C(-2, 3)}) {
      Matrix2c<double> twist = Matrix2c<double>::Zero();
      twist(0, 0) = std::exp(C(0, pi<double>()) * atlas[0].w1(z) * std::conj(lambda));
      twist(1, 1) = std::exp(C(0, pi<double>()) * atlas[0].w2(z) * std::conj(lambda));
      const auto lhs = transition_smooth_to_holo(atlas[0], z, w + lambda);
      const auto rhs = transition_smooth_to_holo(atlas[0], z, w) * twist;
      equiv = std::max(equiv, max_abs(lhs - rhs));
    }
  }
  CHECK(overlap < 1e-12);
  CHECK(equiv < 1e-12);
}

TEST_CASE("Poincare curvature and its first Chern form") {
  const auto p = poincare_curvature();
  CHECK(p.ws_w == C(0, 0));
  CHECK(p.wsbar_wbar == C(0, 0));
  CHECK(p.ws_wsbar == C(0, 0));
  CHECK(p.w_wbar == C(0, 0));
  CHECK(p.ws_wbar == C(0, -pi<double>()));
  CHECK(p.wsbar_w == C(0, -pi<double>()));
  CHECK(p.c1 == doctest::Approx(-0.5));
  // d theta by differences; indices (w*, wbar*, w, wbar).
  const std::array<C, 4> x{C(0.2, 0.1), C(0.2, -0.1), C(0.4, 0.3), C(0.4, -0.3)};
  const auto F = poincare_curvature_fd(x, 1e-4);
  CHECK(std::abs(F[0][3] - p.ws_wbar) < 1e-8);
  CHECK(std::abs(F[1][2] - p.wsbar_w) < 1e-8);
  CHECK(std::abs(F[0][2]) < 1e-12);
  CHECK(std::abs(F[1][3]) < 1e-12);
  CHECK(std::abs(F[0][1]) < 1e-12);
  CHECK(std::abs(F[2][3]) < 1e-12);
}

TEST_CASE("numerology") {
  const auto a = numerology(4, 1);
  CHECK(a.genus == 3);
  CHECK(a.deg_half_canonical == 2);
  CHECK(a.deg_divisor_pullback == 2);
  CHECK(a.c2 == 2);
  const auto b = numerology(8, 3);
  CHECK(b.genus == 5);
  CHECK(b.deg_half_canonical == 4);
  CHECK(b.deg_divisor_pullback == 4);
  CHECK(b.c2 == 6);
  CHECK_THROWS_AS(numerology(2, 1), ValidationError);
  CHECK_THROWS_AS(numerology(4, 0), ValidationError);
}

}  // TEST_SUITE
