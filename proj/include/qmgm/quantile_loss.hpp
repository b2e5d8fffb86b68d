#pragma once

#include <cmath>
#include <type_traits>

namespace qmgm {

// Check function rho_tau(u) = u * (tau - 1{u < 0}).
template <typename Scalar>
constexpr Scalar quantile_loss(Scalar u, Scalar tau) {
  static_assert(std::is_floating_point_v<Scalar>);
  return u * (tau - (u < Scalar(0) ? Scalar(1) : Scalar(0)));
}

// Proximal operator of t*|x|: sign(v) * max(|v| - t, 0).
template <typename Scalar>
constexpr Scalar soft_threshold(Scalar v, Scalar t) {
  static_assert(std::is_floating_point_v<Scalar>);
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return Scalar(0);
}

}  // namespace qmgm
