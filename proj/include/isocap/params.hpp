#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace isocap {

/// Spatial dimension and exponent of the p-capacity. Requires 1 < p < N.
struct Params {
  int dim = 3;
  double p = 2.0;

  Params() = default;
  Params(int dim_, double p_) : dim(dim_), p(p_) { validate(); }

  void validate() const {
    if (dim < 2) throw std::invalid_argument("dimension must be at least 2");
    if (!(p > 1.0 && p < static_cast<double>(dim)))
      throw std::invalid_argument("exponent p must satisfy 1 < p < N (got p=" + std::to_string(p) +
                                  ", N=" + std::to_string(dim) + ")");
  }

  /// Decay exponent (N-p)/(p-1) of the capacitary potential of a ball.
  double decay_exponent() const { return (dim - p) / (p - 1.0); }
};

/// Volume of the unit ball in R^N, pi^{N/2} / Gamma(N/2 + 1).
template <typename Scalar = double>
Scalar unit_ball_volume(int dim) {
  using std::pow;
  using std::tgamma;
  const Scalar half_n = Scalar(dim) / Scalar(2);
  return pow(std::numbers::pi_v<Scalar>, half_n) / tgamma(half_n + Scalar(1));
}

/// Surface measure of the unit sphere S^{N-1}, N * omega_N.
template <typename Scalar = double>
Scalar unit_sphere_area(int dim) {
  return Scalar(dim) * unit_ball_volume<Scalar>(dim);
}

}  // namespace isocap
