#pragma once

#include <cstddef>
#include <vector>

namespace hym {

/// Finite-difference weights (Fornberg 1988) for derivatives 0..max_order at
/// x0 from samples at `nodes`. Result is indexed [order][node].
template <typename Scalar>
std::vector<std::vector<Scalar>> fornberg_weights(const Scalar& x0,
                                                  const std::vector<Scalar>& nodes,
                                                  int max_order) {
  const std::size_t n = nodes.size();
  std::vector<std::vector<Scalar>> c(max_order + 1, std::vector<Scalar>(n, Scalar(0)));
  Scalar c1 = 1;
  Scalar c4 = nodes[0] - x0;
  c[0][0] = 1;
  for (std::size_t i = 1; i < n; ++i) {
    const int mn = std::min<int>(static_cast<int>(i), max_order);
    Scalar c2 = 1;
    const Scalar c5 = c4;
    c4 = nodes[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const Scalar c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[k][i] = c1 * (Scalar(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[k][j] = (c4 * c[k][j] - Scalar(k) * c[k - 1][j]) / c3;
      }
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

}  // namespace hym
