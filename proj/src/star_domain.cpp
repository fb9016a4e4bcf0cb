#include "isocap/star_domain.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <unsupported/Eigen/FFT>
#include <vector>

#include "isocap/quadrature.hpp"

namespace isocap {

AngularGrid AngularGrid::circle(int size) {
  if (size < 4) throw std::invalid_argument("angular grid needs at least 4 nodes");
  AngularGrid g;
  g.dim_ = 2;
  g.nodes_.resize(size);
  for (int j = 0; j < size; ++j) g.nodes_(j) = 2.0 * std::numbers::pi * j / size;
  g.weights_ = Eigen::VectorXd::Constant(size, 2.0 * std::numbers::pi / size);
  return g;
}

AngularGrid AngularGrid::axisymmetric(int size) {
  if (size < 4) throw std::invalid_argument("angular grid needs at least 4 nodes");
  AngularGrid g;
  g.dim_ = 3;
  auto [x, w] = quad::gauss_legendre(size);
  g.bary_ = quad::gauss_legendre_barycentric_weights(x, w);
  g.nodes_ = std::move(x);
  g.weights_ = 2.0 * std::numbers::pi * w;
  return g;
}

AngularGrid AngularGrid::for_dimension(int dim, int size) {
  if (size <= 0) size = default_size(dim);
  if (dim == 2) return circle(size);
  if (dim == 3) return axisymmetric(size);
  throw std::invalid_argument("geometry supports only N = 2 and N = 3");
}

Eigen::VectorXd AngularGrid::direction(int j) const {
  if (dim_ == 2) return Eigen::Vector2d(std::cos(nodes_(j)), std::sin(nodes_(j)));
  const double mu = nodes_(j);
  return Eigen::Vector3d(std::sqrt(std::max(0.0, 1.0 - mu * mu)), 0.0, mu);
}

double AngularGrid::dot_direction(int j, const Eigen::VectorXd& c) const {
  if (dim_ == 2) return c(0) * std::cos(nodes_(j)) + c(1) * std::sin(nodes_(j));
  return c(2) * nodes_(j);
}

StarDomain::StarDomain(Params params, AngularGrid grid, Eigen::VectorXd rho)
    : params_(params), grid_(std::move(grid)), rho_(std::move(rho)) {
  params_.validate();
  if (params_.dim != 2 && params_.dim != 3)
    throw std::invalid_argument("StarDomain supports only N = 2 and N = 3");
  if (grid_.dim() != params_.dim) throw std::invalid_argument("grid dimension mismatch");
  if (rho_.size() != grid_.size()) throw std::invalid_argument("profile size does not match grid");
  for (Eigen::Index j = 0; j < rho_.size(); ++j)
    if (!(rho_(j) > 0.0) || !std::isfinite(rho_(j)))
      throw std::invalid_argument("radial profile must be positive and finite at every node");
}

StarDomain StarDomain::from_function(Params params, AngularGrid grid,
                                     const std::function<double(double)>& f) {
  Eigen::VectorXd rho(grid.size());
  for (int j = 0; j < grid.size(); ++j) rho(j) = f(grid.nodes()(j));
  return StarDomain(params, std::move(grid), std::move(rho));
}

StarDomain StarDomain::ball(Params params, double radius, int grid_size) {
  auto grid = AngularGrid::for_dimension(params.dim, grid_size);
  Eigen::VectorXd rho = Eigen::VectorXd::Constant(grid.size(), radius);
  return StarDomain(params, std::move(grid), std::move(rho));
}

bool StarDomain::nearly_spherical() const { return (rho_.array() - 1.0).abs().maxCoeff() < 0.5; }

StarDomain StarDomain::scaled(double lambda) const {
  if (!(lambda > 0.0)) throw std::invalid_argument("scale factor must be positive");
  return StarDomain(params_, grid_, lambda * rho_);
}

StarDomain StarDomain::with_params(Params params) const {
  return StarDomain(params, grid_, rho_);
}

GridInterpolant::GridInterpolant(const AngularGrid& grid, const Eigen::VectorXd& values)
    : dim_(grid.dim()), nodes_(grid.nodes()), bary_(grid.bary_weights()), values_(values) {
  if (values.size() != grid.size()) throw std::invalid_argument("interpolant: size mismatch");
  if (dim_ != 2) return;
  const int m = grid.size();
  const int half = m / 2;
  std::vector<double> in(values.data(), values.data() + m);
  std::vector<std::complex<double>> out;
  Eigen::FFT<double> fft;
  fft.fwd(out, in);
  cos_.resize(half + 1);
  sin_.resize(half + 1);
  for (int k = 0; k <= half; ++k) {
    // The Nyquist mode is split symmetrically between +-M/2.
    const double scale = (k == 0 || (m % 2 == 0 && k == half)) ? 1.0 / m : 2.0 / m;
    cos_(k) = scale * out[k].real();
    sin_(k) = -scale * out[k].imag();
  }
}

double GridInterpolant::operator()(double node) const {
  if (dim_ == 3) return quad::barycentric_interpolate(nodes_, bary_, values_, node);
  // cos(k x), sin(k x) by rotation.
  const double c1 = std::cos(node), s1 = std::sin(node);
  double c = 1.0, s = 0.0, value = 0.0;
  for (Eigen::Index k = 0; k < cos_.size(); ++k) {
    value += cos_(k) * c + sin_(k) * s;
    const double cn = c * c1 - s * s1;
    s = s * c1 + c * s1;
    c = cn;
  }
  return value;
}

double StarDomain::profile_at(double node) const { return GridInterpolant(grid_, rho_)(node); }

StarDomain StarDomain::resampled(int new_size) const {
  if (new_size == grid_.size()) return *this;
  AngularGrid grid = AngularGrid::for_dimension(params_.dim, new_size);
  Eigen::VectorXd rho(new_size);
  if (params_.dim == 2 && grid_.size() % new_size == 0) {
    const int stride = grid_.size() / new_size;
    for (int j = 0; j < new_size; ++j) rho(j) = rho_(j * stride);
  } else {
    const GridInterpolant f(grid_, rho_);
    for (int j = 0; j < new_size; ++j) rho(j) = f(grid.nodes()(j));
  }
  return StarDomain(params_, std::move(grid), std::move(rho));
}

}  // namespace isocap
