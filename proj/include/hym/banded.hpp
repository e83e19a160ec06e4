#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hym/precision.hpp"

namespace hym {

/// Square band matrix with `lower` sub- and `upper` super-diagonals, solved
/// by Gaussian elimination with partial pivoting (LAPACK gbsv layout: the
/// factorization needs `lower` extra super-diagonals for fill-in).
template <typename Scalar>
class BandedMatrix {
 public:
  BandedMatrix(int n, int lower, int upper)
      : n_(n), kl_(lower), ku_(upper), ld_(2 * lower + upper + 1),
        data_(static_cast<std::size_t>(ld_) * n, Scalar(0)) {}

  int size() const { return n_; }

  bool in_band(int i, int j) const { return j - i <= ku_ && i - j <= kl_; }

  Scalar& operator()(int i, int j) {
    if (!in_band(i, j)) throw std::out_of_range("BandedMatrix: entry outside band");
    return at(i, j);
  }

  void set_zero() { std::fill(data_.begin(), data_.end(), Scalar(0)); }

  /// Solves A x = b in place of b; destroys the matrix.
  void solve_in_place(VectorX<Scalar>& b) {
    using std::abs;
    const int ku_f = kl_ + ku_;
    for (int k = 0; k < n_; ++k) {
      const int last = std::min(n_ - 1, k + kl_);
      int piv = k;
      Scalar best = abs(at(k, k));
      for (int i = k + 1; i <= last; ++i) {
        const Scalar v = abs(at(i, k));
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best == Scalar(0)) throw std::runtime_error("BandedMatrix: singular pivot");
      const int jmax = std::min(n_ - 1, k + ku_f);
      if (piv != k) {
        for (int j = k; j <= jmax; ++j) std::swap(at(k, j), at(piv, j));
        std::swap(b[k], b[piv]);
      }
      const Scalar d = at(k, k);
      for (int i = k + 1; i <= last; ++i) {
        const Scalar m = at(i, k) / d;
        if (m == Scalar(0)) continue;
        at(i, k) = Scalar(0);
        for (int j = k + 1; j <= jmax; ++j) at(i, j) -= m * at(k, j);
        b[i] -= m * b[k];
      }
    }
    for (int i = n_ - 1; i >= 0; --i) {
      Scalar s = b[i];
      const int jmax = std::min(n_ - 1, i + ku_f);
      for (int j = i + 1; j <= jmax; ++j) s -= at(i, j) * b[j];
      b[i] = s / at(i, i);
    }
  }

 private:
  // Storage row index kl+ku+i-j keeps the factor's widened upper band.
  Scalar& at(int i, int j) {
    return data_[static_cast<std::size_t>(j) * ld_ + (kl_ + ku_ + i - j)];
  }

  int n_, kl_, ku_, ld_;
  std::vector<Scalar> data_;
};

}  // namespace hym
