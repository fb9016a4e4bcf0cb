#include "isocap/shapes.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "isocap/spectral.hpp"

namespace isocap::shapes {

StarDomain ellipsoid(const Params& params, double a, double b, int grid_size) {
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("ellipsoid: semi-axes must be positive");
  const AngularGrid grid = AngularGrid::for_dimension(params.dim, grid_size);
  if (params.dim == 2) {
    return StarDomain::from_function(params, grid, [a, b](double th) {
      const double c = std::cos(th) / a, s = std::sin(th) / b;
      return 1.0 / std::sqrt(c * c + s * s);
    });
  }
  return StarDomain::from_function(params, grid, [a, b](double mu) {
    return 1.0 / std::sqrt(mu * mu / (a * a) + (1.0 - mu * mu) / (b * b));
  });
}

StarDomain unit_volume_ellipsoid(const Params& params, double aspect, int grid_size) {
  if (!(aspect > 0.0)) throw std::invalid_argument("ellipsoid: aspect must be positive");
  // a b = 1 in 2D, a b^2 = 1 in 3D.
  const double b = std::pow(aspect, -1.0 / params.dim);
  return ellipsoid(params, aspect * b, b, grid_size);
}

StarDomain harmonic(const Params& params, int k, double t, int grid_size) {
  if (k < 0) throw std::invalid_argument("harmonic: degree must be nonnegative");
  const int dim = params.dim;
  return StarDomain::from_function(params, AngularGrid::for_dimension(dim, grid_size),
                                   [=](double x) { return 1.0 + t * basis_function(dim, k, 0, x); });
}

StarDomain random_band_limited(const Params& params, int max_degree, double amplitude,
                               std::uint64_t seed, int grid_size) {
  if (max_degree < 1) throw std::invalid_argument("random_band_limited: max_degree must be >= 1");
  if (!(amplitude >= 0.0 && amplitude < 1.0))
    throw std::invalid_argument("random_band_limited: amplitude must lie in [0, 1)");
  const AngularGrid grid = AngularGrid::for_dimension(params.dim, grid_size);
  if (max_degree > max_resolvable_degree(grid))
    throw std::invalid_argument("random_band_limited: degree exceeds grid resolution");

  ModeSpectrum spec(params, max_degree);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (int k = 1; k <= max_degree; ++k)
    for (int i = 0; i < spec.multiplicity(); ++i) spec.a(k, i) = g(rng) / k;
  Eigen::VectorXd phi = synthesize(spec, grid);
  const double sup = phi.cwiseAbs().maxCoeff();
  if (sup > 0.0) phi *= amplitude / sup;
  return StarDomain(params, grid, Eigen::VectorXd::Ones(grid.size()) + phi);
}

}  // namespace isocap::shapes
