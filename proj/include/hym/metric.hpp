#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "hym/charts.hpp"
#include "hym/cutoff.hpp"
#include "hym/green.hpp"
#include "hym/jet.hpp"
#include "hym/physical.hpp"

namespace hym {

using Complex = std::complex<double>;
using Mat2 = Matrix2c<double>;

/// Which piece of the glued branch-chart data applies at radius r.
enum class GlueRegion { Inner, Transition, Outer };

struct PhiPair {
  Jet<double> phi1, phi2;
  /// delta = phi1 - phi2 + ln r (identically 0 in the outer region).
  Jet<double> delta;
  /// sigma = phi1 + phi2 (identically 0 in the outer region).
  Jet<double> sigma;
  /// D = phi1 - phi2.
  Jet<double> diff;
  GlueRegion region;
};

/// The four coefficient blocks of the curvature on a branch chart in the
/// smooth frame, and the contraction with omega_eps.
struct CurvatureSample {
  Complex z{}, w{};
  Mat2 ww = Mat2::Zero();    ///< dw ^ dwbar
  Mat2 zz = Mat2::Zero();    ///< dz ^ dzbar
  Mat2 zwb = Mat2::Zero();   ///< dz ^ dwbar
  Mat2 zbw = Mat2::Zero();   ///< dzbar ^ dw
  Mat2 lambda = Mat2::Zero();
};

struct PsiValue {
  double value = 0;
  bool in_annulus = false;
};

/// Lambda applied to a (1,1)-form with dw^dwbar block A and dz^dzbar block B
/// for omega_eps = eps dy1^dy2 + eps^-1 dx1^dx2 on a complex surface:
/// m (i/2) Theta ^ omega / omega^2 with dz^dzbar = -2i dx1^dx2.
inline Mat2 contract_lambda(const Mat2& ww, const Mat2& zz, double eps) {
  return ww / eps + eps * zz;
}

/// Wedge bookkeeping: dz^dzbar = -2i dx1^dx2 (likewise dw^dwbar in y).
inline Complex dz_dzbar_in_dx1dx2() { return {0, -2}; }

/// Curvature of a holomorphic-frame metric field H(dz, dw) (offsets from the
/// base point) via the transposed form dbar(d H H^-1), by centered
/// differences with step h along x, y, y1, y2, conjugated to the smooth
/// frame by A. The mixed blocks need the extra cross stencil.
template <typename F>
CurvatureSample curvature_fd(F&& H, const Mat2& A, Complex z, Complex w, double h, double eps,
                             bool mixed = true) {
  auto at = [&](const double* d) { return H(Complex(d[0], d[1]), Complex(d[2], d[3])); };
  const double zero[4] = {0, 0, 0, 0};
  const Mat2 H0 = at(zero);
  const Mat2 Hi = H0.inverse();
  std::array<Mat2, 4> D1, D2;  // first and pure second derivatives along x, y, y1, y2
  for (int k = 0; k < 4; ++k) {
    double p[4] = {0, 0, 0, 0}, m[4] = {0, 0, 0, 0};
    p[k] = h;
    m[k] = -h;
    const Mat2 hp = at(p), hm = at(m);
    D1[k] = (hp - hm) / (2 * h);
    D2[k] = (hp - 2.0 * H0 + hm) / (h * h);
  }
  const Complex I(0, 1);
  const Mat2 Hz = (D1[0] - I * D1[1]) / 2.0, Hzb = (D1[0] + I * D1[1]) / 2.0;
  const Mat2 Hw = (D1[2] - I * D1[3]) / 2.0, Hwb = (D1[2] + I * D1[3]) / 2.0;
  const Mat2 Hzzb = (D2[0] + D2[1]) / 4.0, Hwwb = (D2[2] + D2[3]) / 4.0;
  // d_b (H_a H^-1) = H_ab H^-1 - H_a H^-1 H_b H^-1
  auto dK = [&](const Mat2& Hab, const Mat2& Ha, const Mat2& Hb) -> Mat2 {
    return Hab * Hi - Ha * Hi * Hb * Hi;
  };
  const Mat2 Ai = A.inverse();
  CurvatureSample s;
  s.z = z;
  s.w = w;
  s.zz = A * Mat2(-dK(Hzzb, Hz, Hzb).transpose()) * Ai;
  s.ww = A * Mat2(-dK(Hwwb, Hw, Hwb).transpose()) * Ai;
  if (mixed) {
    auto cross = [&](int i, int j) -> Mat2 {
      Mat2 acc = Mat2::Zero();
      for (int si : {1, -1})
        for (int sj : {1, -1}) {
          double d[4] = {0, 0, 0, 0};
          d[i] += si * h;
          d[j] += sj * h;
          acc += double(si * sj) * at(d);
        }
      return acc / (4 * h * h);
    };
    const Mat2 Hxy1 = cross(0, 2), Hxy2 = cross(0, 3), Hyy1 = cross(1, 2), Hyy2 = cross(1, 3);
    const Mat2 Hzwb = (Hxy1 + I * Hxy2 - I * Hyy1 + Hyy2) / 4.0;
    const Mat2 Hzbw = (Hxy1 - I * Hxy2 + I * Hyy1 + Hyy2) / 4.0;
    s.zwb = A * Mat2(-dK(Hzwb, Hz, Hwb).transpose()) * Ai;
    s.zbw = A * Mat2(dK(Hzbw, Hw, Hzb).transpose()) * Ai;
  }
  s.lambda = contract_lambda(s.ww, s.zz, eps);
  return s;
}

/// Glued and conformally normalized metric data over the atlas. Charts are
/// addressed by atlas index: 0 = generic U0, 1..n branch, n+1.. divisor.
/// Points on U0 are global torus coordinates; on all other charts they are
/// the local coordinate z - xi.
class GluedMetric {
 public:
  GluedMetric(GeometryConfig geometry, PhysicalProfile<Real> profile)
      : geo_(std::move(geometry)),
        profile_(std::move(profile)),
        cutoff_(geo_.r0),
        green_(geo_.divisor()),
        atlas_(build_atlas<double>(geo_)) {
    if (std::abs(profile_.r0() - geo_.r0) > 1e-15)
      throw ValidationError("metric: profile r0 differs from geometry r0");
  }

  const GeometryConfig& geometry() const { return geo_; }
  const PhysicalProfile<Real>& profile() const { return profile_; }
  const CutoffProfile& cutoff() const { return cutoff_; }
  const GreenField<double>& green() const { return green_; }
  const std::vector<Chart<double>>& atlas() const { return atlas_; }
  double epsilon() const { return profile_.epsilon(); }

  bool is_branch(int chart) const { return chart_at(chart).kind == ChartKind::Branch; }

  /// phi1, phi2 and derived jets at radius r in [0, 2 r0] of a branch chart.
  PhiPair phi_pair(double r) const {
    const double r0 = geo_.r0;
    if (!(r >= 0 && r <= 2 * r0)) throw ValidationError("phi_pair: radius outside the branch chart");
    PhiPair p;
    if (r >= cutoff_.outer_radius()) {
      const Jet<double> half_log{0.5 * std::log(r), 0.5 / r, -0.5 / (r * r)};
      p.phi1 = -half_log;
      p.phi2 = half_log;
      p.delta = p.sigma = Jet<double>::constant(0);
      p.diff = -2.0 * half_log;
      p.region = GlueRegion::Outer;
      return p;
    }
    if (r <= r0) {
      const auto uj = profile_.u(Real(r));
      const Jet<double> u{to_double(uj.v), to_double(uj.d1), to_double(uj.d2)};
      p.phi1 = -u;
      p.phi2 = u;
      p.sigma = Jet<double>::constant(0);
      p.diff = -2.0 * u;
      p.delta = r > 0 ? p.diff + log(Jet<double>::variable(r)) : Jet<double>{};
      p.region = GlueRegion::Inner;
      return p;
    }
    const auto wj = profile_.w(Real(r));
    const Jet<double> w{to_double(wj.v), to_double(wj.d1), to_double(wj.d2)};
    const Jet<double> rho = cutoff_.in_r(r);
    const Jet<double> L = log(Jet<double>::variable(r));
    const Jet<double> a = log1p(rho * expm1(-w));
    const Jet<double> b = log1p(rho * expm1(w));
    p.phi1 = a - 0.5 * L;
    p.phi2 = b + 0.5 * L;
    p.delta = a - b;
    p.sigma = a + b;
    p.diff = p.delta - L;
    p.region = GlueRegion::Transition;
    return p;
  }

  /// kappa = e^{(phi2 - phi1)/4}.
  double kappa(double r) const { return std::exp(-phi_pair(r).diff.v / 4); }

  /// psi on the annulus r0 <= r <= 2 r0; exact 0 with in_annulus = false elsewhere.
  PsiValue psi(double r) const {
    const double r0 = geo_.r0;
    if (r < r0 || r > 2 * r0) return {0.0, false};
    if (r >= cutoff_.outer_radius()) return {0.0, true};
    const auto p = phi_pair(r);
    const double eps = epsilon();
    const double pi2 = pi<double>() * pi<double>();
    return {pi2 / eps * 2 * r * std::sinh(p.delta.v) - eps / 2 * ddbar_radial(p.delta, r), true};
  }

  /// Smooth-frame Hermitian matrix of the glued metric (normalized or not).
  Mat2 metric_hat(int chart, Complex z, bool normalized) const {
    const auto& c = chart_at(chart);
    switch (c.kind) {
      case ChartKind::Generic:
        check_generic(z);
        return std::exp(green_(z) / 2) * Mat2::Identity();
      case ChartKind::Divisor:
        return std::exp(harmonic(c, z)) * Mat2::Identity();
      case ChartKind::Branch: {
        const double g = harmonic(c, z);
        const auto p = phi_pair(std::abs(z));
        Mat2 m = Mat2::Zero();
        if (normalized) {
          m(0, 0) = std::exp(g + p.diff.v / 2);
          m(1, 1) = std::exp(g - p.diff.v / 2);
        } else {
          m(0, 0) = std::exp(g + p.phi1.v);
          m(1, 1) = std::exp(g + p.phi2.v);
        }
        return m;
      }
    }
    return Mat2::Zero();
  }

  /// Unitary normalizer N with N^t conj(N) = normalized metric_hat.
  Mat2 normalizer(int chart, Complex z) const {
    const auto& c = chart_at(chart);
    if (c.kind == ChartKind::Generic) {
      check_generic(z);
      return std::exp(green_(z) / 4) * Mat2::Identity();
    }
    const double e = std::exp(harmonic(c, z) / 2);
    if (c.kind == ChartKind::Divisor) return e * Mat2::Identity();
    const double k = kappa(std::abs(z));
    Mat2 n = Mat2::Zero();
    n(0, 0) = e / k;
    n(1, 1) = e * k;
    return n;
  }

  /// Holomorphic-frame matrix A^t H_hat conj(A).
  Mat2 metric_tilde(int chart, Complex z, Complex w, bool normalized) const {
    const Mat2 A = transition_smooth_to_holo(chart_at(chart), z, w);
    return A.transpose() * metric_hat(chart, z, normalized) * A.conjugate();
  }

  /// psi diag(1, -1) on branch annuli, zero elsewhere.
  Mat2 lambda_analytic(int chart, Complex z) const {
    const auto& c = chart_at(chart);
    if (c.kind == ChartKind::Generic) check_generic(z);
    else check_local(z);
    Mat2 m = Mat2::Zero();
    if (c.kind != ChartKind::Branch) return m;
    const double s = psi(std::abs(z)).value;
    m(0, 0) = s;
    m(1, 1) = -s;
    return m;
  }

  /// Closed-form curvature blocks on a branch chart (smooth frame).
  CurvatureSample curvature_blocks(Complex z, Complex w, bool normalized) const {
    check_local(z);
    const double r = std::abs(z);
    const auto p = phi_pair(r);
    const double pi_ = pi<double>();
    const Complex ipi(0, pi_);
    CurvatureSample s;
    s.z = z;
    s.w = w;
    // r^2 e^D - e^-D; away from the plateau this is 2 r sinh(delta).
    const double A = p.region == GlueRegion::Inner
                         ? pi_ * pi_ * (r * r * std::exp(p.diff.v) - std::exp(-p.diff.v))
                         : pi_ * pi_ * 2 * r * std::sinh(p.delta.v);
    s.ww(0, 0) = A;
    s.ww(1, 1) = -A;
    if (normalized) {
      const double d = ddbar_radial(p.diff, r) / 2;
      s.zz(0, 0) = -d;
      s.zz(1, 1) = d;
    } else {
      s.zz(0, 0) = -ddbar_radial(p.phi1, r);
      s.zz(1, 1) = -ddbar_radial(p.phi2, r);
    }
    // For radial f: df/dz = f' zbar / (2r), z df/dz = r f' / 2.
    const Complex dz_D = r > 0 ? p.diff.d1 * std::conj(z) / (2 * r) : Complex(0);
    const Complex dzb_D = std::conj(dz_D);
    const double one_plus = p.region == GlueRegion::Inner ? 1 + r * p.diff.d1 / 2 : 0.5 + r * p.delta.d1 / 2;
    s.zwb(0, 1) = -ipi * one_plus;
    s.zwb(1, 0) = ipi * dz_D;
    s.zbw(0, 1) = ipi * std::exp(-p.diff.v) * dzb_D;
    s.zbw(1, 0) = -ipi * std::exp(p.diff.v) * one_plus;
    s.lambda = contract_lambda(s.ww, s.zz, epsilon());
    return s;
  }

  /// Curvature of the metric_tilde field by centered differences of
  /// dbar(d H H^-1), transported to the smooth frame. Step h in every real
  /// direction of (z, w); mixed blocks need the extra cross stencil.
  CurvatureSample curvature_numeric(int chart, Complex z, Complex w, double h, bool normalized,
                                    bool mixed = true) const {
    if (!(h > 0)) throw ValidationError("curvature_numeric: h must be positive");
    const auto& c = chart_at(chart);
    const double reach = std::sqrt(2.0) * h;
    if (c.kind == ChartKind::Generic) {
      for (double dx : {-reach, reach})
        for (double dy : {-reach, reach}) check_generic(z + Complex(dx, dy));
    } else if (!(std::abs(z) + reach < geo_.chart_radius())) {
      throw ValidationError("curvature_numeric: stencil leaves the chart");
    }
    auto H = [&](Complex dz, Complex dw) { return metric_tilde(chart, z + dz, w + dw, normalized); };
    return curvature_fd(H, transition_smooth_to_holo(c, z, w), z, w, h, epsilon(), mixed);
  }

  Mat2 lambda_numeric(int chart, Complex z, Complex w, double h, bool normalized = true) const {
    return curvature_numeric(chart, z, w, h, normalized, false).lambda;
  }

  /// max |metric_hat(branch) - F^t (e^{G/2} I) conj(F)| with F the frame
  /// change between the U0 and branch smooth frames, at a collar point.
  double gluing_mismatch(int chart, Complex z) const {
    const auto& c = chart_at(chart);
    if (c.kind != ChartKind::Branch) throw ValidationError("gluing_mismatch: needs a branch chart");
    const Mat2 F = frame_change(std::sqrt(z));
    const Mat2 from_u0 = F.transpose() * (std::exp(green_(c.center + z) / 2) * Mat2::Identity()) * F.conjugate();
    return (metric_hat(chart, z, false) - from_u0).cwiseAbs().maxCoeff();
  }

  /// sup |psi| over [r0, 4 r0 / 3] on a uniform radial sample.
  double psi_sup(int samples = 2000) const {
    double best = 0;
    const double a = geo_.r0, b = cutoff_.outer_radius();
    for (int k = 0; k <= samples; ++k) best = std::max(best, std::abs(psi(a + (b - a) * k / samples).value));
    return best;
  }

 private:
  const Chart<double>& chart_at(int chart) const {
    if (chart < 0 || chart >= static_cast<int>(atlas_.size()))
      throw ValidationError("metric: chart index " + std::to_string(chart) + " out of range");
    return atlas_[chart];
  }
  double harmonic(const Chart<double>& c, Complex z) const {
    check_local(z);
    return green_.harmonic_part(c.index, c.center + z, geo_.chart_radius());
  }
  void check_local(Complex z) const {
    if (!(std::abs(z) <= geo_.chart_radius()))
      throw ValidationError("metric: point outside the chart disc");
  }
  /// U0 excludes the divisor points and the discs of radius 3 r0 / 2 around branch points.
  void check_generic(Complex z) const {
    for (int a = 0; a < geo_.point_count(); ++a) {
      const double d = std::abs(reduce_to_cell(z - geo_.center(a)));
      if (geo_.is_branch(a) ? d <= 1.5 * geo_.r0 : d == 0)
        throw ValidationError("metric: point not in U0 (near point " + std::to_string(a) + ")");
    }
  }

  GeometryConfig geo_;
  PhysicalProfile<Real> profile_;
  CutoffProfile cutoff_;
  GreenField<double> green_;
  std::vector<Chart<double>> atlas_;
};

/// True when a curvature stencil of step h centred at radius r reaches across
/// r0 or 4 r0 / 3, where the cutoff is only C^2.
inline bool straddles_junction(const GluedMetric& m, double r, double h) {
  const double reach = 2 * std::sqrt(2.0) * h;
  for (double rj : {m.cutoff().inner_radius(), m.cutoff().outer_radius()})
    if (std::abs(r - rj) <= reach) return true;
  return false;
}

}  // namespace hym
