#pragma once

#include <boost/multiprecision/float128.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <cmath>
#include <type_traits>

namespace hym {

/// Scalar used for certified radial solves (IEEE binary128).
using Real = boost::multiprecision::float128;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
inline double to_double(const Scalar& x) {
  return static_cast<double>(x);
}

template <typename Scalar>
inline Scalar pi() {
  if constexpr (std::is_same_v<Scalar, Real>) {
    return boost::multiprecision::float128(
        "3.14159265358979323846264338327950288");
  } else {
    return static_cast<Scalar>(3.14159265358979323846264338327950288L);
  }
}

template <typename Scalar>
inline bool is_finite(const Scalar& x) {
  using std::isfinite;
  using boost::multiprecision::isfinite;
  return isfinite(x);
}

}  // namespace hym
