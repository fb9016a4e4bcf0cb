#pragma once

#include <Eigen/Core>

#include <functional>

#include "isocap/params.hpp"

namespace isocap {

/// Angular sampling of S^{N-1}.
///
/// N = 2: M uniformly spaced angles theta_j = 2 pi j / M with equal weights.
/// N = 3: axisymmetric mode. Nodes are M Gauss-Legendre points mu_j = cos(polar angle) in
/// [-1, 1]; weights carry the azimuthal factor 2 pi so that they sum to 4 pi.
class AngularGrid {
 public:
  AngularGrid() = default;

  static AngularGrid circle(int size);
  static AngularGrid axisymmetric(int size);
  static AngularGrid for_dimension(int dim, int size);
  static int default_size(int dim) { return dim == 2 ? 512 : 256; }

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  /// Ray direction of node j as a vector in R^N (for N = 3 taken in the x-z meridian plane).
  Eigen::VectorXd direction(int j) const;

  /// theta_j . c. For N = 3 only the axial component c(2) contributes (c must lie on the axis).
  double dot_direction(int j, const Eigen::VectorXd& c) const;

  /// Barycentric interpolation weights (N = 3 only).
  const Eigen::VectorXd& bary_weights() const { return bary_; }

 private:
  int dim_ = 2;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd bary_;
};

/// Continuous extension of values sampled on an angular grid: trigonometric interpolation for
/// N = 2, the polynomial through the Gauss-Legendre nodes for N = 3. O(M) per evaluation.
class GridInterpolant {
 public:
  GridInterpolant(const AngularGrid& grid, const Eigen::VectorXd& values);
  double operator()(double node) const;

 private:
  int dim_;
  Eigen::VectorXd nodes_, bary_, values_;
  // N = 2: f(theta) = sum_k cos_k cos(k theta) + sin_k sin(k theta).
  Eigen::VectorXd cos_, sin_;
};

/// A domain star-shaped about the origin, {r theta : 0 <= r < rho(theta)}, with rho sampled on an
/// angular grid. Immutable after construction.
class StarDomain {
 public:
  StarDomain(Params params, AngularGrid grid, Eigen::VectorXd rho);

  /// Samples f at the grid nodes (theta for N = 2, mu = cos(polar angle) for N = 3).
  static StarDomain from_function(Params params, AngularGrid grid,
                                  const std::function<double(double)>& f);
  static StarDomain ball(Params params, double radius, int grid_size = 0);

  const Params& params() const { return params_; }
  const AngularGrid& grid() const { return grid_; }
  const Eigen::VectorXd& rho() const { return rho_; }
  int dim() const { return params_.dim; }

  /// max_j |rho_j - 1| < 1/2.
  bool nearly_spherical() const;

  StarDomain scaled(double lambda) const;
  StarDomain with_params(Params params) const;

  /// Profile of the same domain on a grid of a different size. Uniform subsampling when the size
  /// divides M (N = 2), trigonometric interpolation otherwise; Lagrange interpolation through the
  /// Gauss-Legendre nodes for N = 3.
  StarDomain resampled(int new_size) const;

  /// Interpolated profile value at an arbitrary angular coordinate. Build a GridInterpolant
  /// instead when evaluating many points.
  double profile_at(double node) const;

 private:
  Params params_;
  AngularGrid grid_;
  Eigen::VectorXd rho_;
};

}  // namespace isocap
