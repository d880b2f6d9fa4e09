#pragma once

#include <cmath>
#include <limits>

// Extended nonnegative reals [0, inf] on top of IEEE floating point.
// IEEE already gives a + inf = inf and min(inf, a) = a; the helpers below
// cover the cases where it would produce NaN (0 * inf, inf - inf).

namespace wlens {

template <typename Scalar = double>
inline constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();

inline constexpr double kDefaultTol = 1e-9;

template <typename Scalar>
constexpr bool is_inf(Scalar a) {
  return a == std::numeric_limits<Scalar>::infinity();
}

/// Product with the measure-theoretic convention 0 * inf = 0.
template <typename Scalar>
constexpr Scalar ext_mul(Scalar a, Scalar b) {
  if (a == Scalar(0) || b == Scalar(0)) return Scalar(0);
  return a * b;
}

/// a <= b + tol, where anything is <= inf and inf is <= only inf.
template <typename Scalar>
constexpr bool ext_le(Scalar a, Scalar b, Scalar tol) {
  if (is_inf(b)) return true;
  if (is_inf(a)) return false;
  return a <= b + tol;
}

/// |a - b| <= tol, with inf equal only to inf.
template <typename Scalar>
constexpr bool ext_near(Scalar a, Scalar b, Scalar tol) {
  if (is_inf(a) || is_inf(b)) return a == b;
  return std::abs(a - b) <= tol;
}

/// Valid extended nonnegative value: not NaN, not negative.
template <typename Scalar>
constexpr bool is_ext_nonneg(Scalar a) {
  return !std::isnan(a) && a >= Scalar(0);
}

}  // namespace wlens
