#pragma once

// Independent reference for the radial problem: series start at r ~ 0,
// adaptive Runge-Kutta-Fehlberg 7(8) to r = 1, bisection on u(0).

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/numeric/odeint.hpp>

namespace oracle {

struct Blowup {
  int sign;
};

struct ShootingResult {
  double u0 = 0;
  std::vector<double> r;
  std::vector<double> u;
};

inline double shoot(double a, double eps, const std::vector<double>& samples,
                    std::vector<double>* out) {
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 2>;
  const double ie2 = 1.0 / (eps * eps);
  const double b = std::exp(a) * ie2 / 4.0;
  const double c = ie2 * (std::exp(a) * b - std::exp(-a)) / 16.0;
  const double r0 = 1e-3 * eps;
  State y{a + b * r0 * r0 + c * r0 * r0 * r0 * r0, 2 * b * r0 + 4 * c * r0 * r0 * r0};
  auto rhs = [&](const State& x, State& dx, double r) {
    if (x[0] > 5.0) throw Blowup{+1};
    if (x[0] < -60.0) throw Blowup{-1};
    dx[0] = x[1];
    dx[1] = ie2 * (std::exp(x[0]) - r * r * std::exp(-x[0])) - x[1] / r;
  };
  std::vector<double> times{r0};
  for (double s : samples)
    if (s > r0) times.push_back(s);
  if (times.back() < 1.0) times.push_back(1.0);
  double last = y[0];
  std::vector<double> vals;
  auto obs = [&](const State& x, double) {
    vals.push_back(x[0]);
    last = x[0];
  };
  auto stepper = ode::make_controlled(1e-14, 1e-14, ode::runge_kutta_fehlberg78<State>());
  ode::integrate_times(stepper, rhs, y, times.begin(), times.end(), 1e-6 * eps, obs);
  if (out) out->assign(vals.begin() + 1, vals.end());
  return last;
}

/// Bisection on u(0) so that u(1) = 0; samples are radii in (0, 1].
inline ShootingResult solve(double eps, const std::vector<double>& samples) {
  double lo = -10.0, hi = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    double end;
    try {
      end = shoot(mid, eps, {}, nullptr);
    } catch (const Blowup& bl) {
      end = bl.sign > 0 ? INFINITY : -INFINITY;
    }
    (end > 0 ? hi : lo) = mid;
  }
  ShootingResult res;
  res.u0 = 0.5 * (lo + hi);
  res.r = samples;
  shoot(res.u0, eps, samples, &res.u);
  return res;
}

}  // namespace oracle
