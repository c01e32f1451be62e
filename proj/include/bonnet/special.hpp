#pragma once

#include <cmath>
#include <complex>

namespace bonnet {

/// Below this |k w| the hyperbolic ratios switch to their Taylor forms.
inline constexpr double kSmallHyperbolicArgument = 1e-4;

namespace detail {

template <class T>
double magnitude(const T& v) {
  using std::abs;
  return static_cast<double>(abs(v));
}

}  // namespace detail

/// k coth(k w), finite as k -> 0 (where it tends to 1/w).
template <class Scalar, class Real>
Scalar scaled_coth(Real k, const Scalar& w) {
  const Scalar y = Scalar(k) * w;
  if (detail::magnitude(y) < kSmallHyperbolicArgument) {
    const Scalar y2 = y * y;
    return (Scalar(1) + y2 / Scalar(3) - y2 * y2 / Scalar(45)) / w;
  }
  using std::tanh;
  return Scalar(k) / tanh(y);
}

/// k / sinh(k w), finite as k -> 0 (where it tends to 1/w).
template <class Scalar, class Real>
Scalar scaled_csch(Real k, const Scalar& w) {
  const Scalar y = Scalar(k) * w;
  if (detail::magnitude(y) < kSmallHyperbolicArgument) {
    const Scalar y2 = y * y;
    return (Scalar(1) - y2 / Scalar(6) + Scalar(7) * y2 * y2 / Scalar(360)) / w;
  }
  using std::sinh;
  return Scalar(k) / sinh(y);
}

}  // namespace bonnet
