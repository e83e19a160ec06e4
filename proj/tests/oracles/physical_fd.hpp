#pragma once

// Direct solve of u'' + u'/r = 4 pi^2 eps^-2 (e^{2u} - r^2 e^{-2u}) on
// [0, 2 r0], u'(0) = 0, u(2 r0) = ln(2 r0)/2: uniform second-order finite
// differences, Newton with a tridiagonal solve, Richardson on M and 2M.

#include <cmath>
#include <vector>

namespace oracle {

inline std::vector<double> physical_fd(double eps, double r0, int m) {
  const double pi = 3.14159265358979323846;
  const double k = 4 * pi * pi / (eps * eps);
  const double H = 2 * r0 / m;
  std::vector<double> u(m + 1, 0.5 * std::log(2 * r0));
  std::vector<double> a(m + 1), b(m + 1), c(m + 1), f(m + 1);
  for (int it = 0; it < 100; ++it) {
    double norm = 0;
    for (int i = 0; i < m; ++i) {
      const double r = i * H;
      const double e2 = std::exp(2 * u[i]), em2 = std::exp(-2 * u[i]);
      const double src = k * (e2 - r * r * em2), dsrc = 2 * k * (e2 + r * r * em2);
      if (i == 0) {
        a[i] = 0;
        b[i] = -4 / (H * H) - dsrc;
        c[i] = 4 / (H * H);
        f[i] = 4 * (u[1] - u[0]) / (H * H) - src;
      } else {
        a[i] = 1 / (H * H) - 1 / (2 * r * H);
        b[i] = -2 / (H * H) - dsrc;
        c[i] = 1 / (H * H) + 1 / (2 * r * H);
        f[i] = a[i] * u[i - 1] + (-2 / (H * H)) * u[i] + c[i] * u[i + 1] - src;
      }
      norm = std::max(norm, std::abs(f[i]));
    }
    a[m] = 0;
    b[m] = 1;
    c[m] = 0;
    f[m] = 0;
    // Thomas algorithm for J du = -f.
    std::vector<double> cp(m + 1), dp(m + 1);
    cp[0] = c[0] / b[0];
    dp[0] = -f[0] / b[0];
    for (int i = 1; i <= m; ++i) {
      const double den = b[i] - a[i] * cp[i - 1];
      cp[i] = c[i] / den;
      dp[i] = (-f[i] - a[i] * dp[i - 1]) / den;
    }
    std::vector<double> du(m + 1);
    du[m] = dp[m];
    for (int i = m - 1; i >= 0; --i) du[i] = dp[i] - cp[i] * du[i + 1];
    double step = 0;
    for (int i = 0; i <= m; ++i) {
      u[i] += du[i];
      step = std::max(step, std::abs(du[i]));
    }
    if (step < 1e-14) break;
  }
  return u;
}

/// Richardson-extrapolated u at r = frac * 2 r0 (frac * m must be integral).
inline double physical_fd_at(double eps, double r0, double frac, int m) {
  const auto coarse = physical_fd(eps, r0, m);
  const auto fine = physical_fd(eps, r0, 2 * m);
  const int i = static_cast<int>(std::lround(frac * m));
  return (4 * fine[2 * i] - coarse[i]) / 3;
}

}  // namespace oracle
