#include "isocap/spectral.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace isocap {

namespace {

void check_dim(int dim) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("mode spectra are defined for N = 2 and N = 3 only");
}

// Orthonormal zonal harmonics Y_0..Y_kmax at mu.
void zonal_harmonics(int kmax, double mu, std::vector<double>& out) {
  out.resize(kmax + 1);
  double p0 = 1.0, p1 = mu;
  for (int k = 0; k <= kmax; ++k) {
    double pk;
    if (k == 0) {
      pk = p0;
    } else if (k == 1) {
      pk = p1;
    } else {
      pk = ((2.0 * k - 1.0) * mu * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    out[k] = std::sqrt((2.0 * k + 1.0) / (4.0 * std::numbers::pi)) * pk;
  }
}

// Projection of values onto degrees 0..kmax using the grid quadrature.
Eigen::MatrixXd project(const AngularGrid& grid, const Eigen::VectorXd& values, int kmax) {
  const int dim = grid.dim();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(kmax + 1, dim == 2 ? 2 : 1);
  std::vector<double> y;
  for (int j = 0; j < grid.size(); ++j) {
    const double wv = grid.weights()(j) * values(j);
    const double node = grid.nodes()(j);
    if (dim == 2) {
      a(0, 0) += wv / std::sqrt(2.0 * std::numbers::pi);
      for (int k = 1; k <= kmax; ++k) {
        a(k, 0) += wv * std::cos(k * node) / std::sqrt(std::numbers::pi);
        a(k, 1) += wv * std::sin(k * node) / std::sqrt(std::numbers::pi);
      }
    } else {
      zonal_harmonics(kmax, node, y);
      for (int k = 0; k <= kmax; ++k) a(k, 0) += wv * y[k];
    }
  }
  return a;
}

}  // namespace

ModeSpectrum::ModeSpectrum(Params params_, int max_degree_)
    : params(params_), max_degree(max_degree_) {
  check_dim(params.dim);
  if (max_degree < 0) throw std::invalid_argument("max_degree must be nonnegative");
  a = Eigen::MatrixXd::Zero(max_degree + 1, params.dim == 2 ? 2 : 1);
}

double basis_function(int dim, int k, int i, double node) {
  check_dim(dim);
  if (dim == 2) {
    if (k == 0) return i == 0 ? 1.0 / std::sqrt(2.0 * std::numbers::pi) : 0.0;
    return (i == 0 ? std::cos(k * node) : std::sin(k * node)) / std::sqrt(std::numbers::pi);
  }
  if (i != 0) return 0.0;
  std::vector<double> y;
  zonal_harmonics(k, node, y);
  return y[k];
}

int max_resolvable_degree(const AngularGrid& grid) {
  // Trapezoid rule on M points is exact for trigonometric degree < M; Gauss-Legendre with M
  // nodes for polynomial degree <= 2M - 1.
  return grid.dim() == 2 ? (grid.size() - 1) / 2 : grid.size() - 1;
}

ModeSpectrum decompose(const StarDomain& domain, int max_degree) {
  if (max_degree > max_resolvable_degree(domain.grid()))
    throw std::invalid_argument("decompose: degree " + std::to_string(max_degree) +
                                " exceeds the grid limit " +
                                std::to_string(max_resolvable_degree(domain.grid())));
  ModeSpectrum s(domain.params(), max_degree);
  const Eigen::VectorXd phi = domain.rho().array() - 1.0;
  s.a = project(domain.grid(), phi, max_degree);
  return s;
}

Eigen::VectorXd synthesize(const ModeSpectrum& spectrum, const AngularGrid& grid) {
  if (grid.dim() != spectrum.params.dim) throw std::invalid_argument("grid dimension mismatch");
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(grid.size());
  std::vector<double> y;
  for (int j = 0; j < grid.size(); ++j) {
    const double node = grid.nodes()(j);
    if (grid.dim() == 2) {
      double v = spectrum.a(0, 0) / std::sqrt(2.0 * std::numbers::pi);
      for (int k = 1; k <= spectrum.max_degree; ++k)
        v += (spectrum.a(k, 0) * std::cos(k * node) + spectrum.a(k, 1) * std::sin(k * node)) /
             std::sqrt(std::numbers::pi);
      phi(j) = v;
    } else {
      zonal_harmonics(spectrum.max_degree, node, y);
      double v = 0.0;
      for (int k = 0; k <= spectrum.max_degree; ++k) v += spectrum.a(k, 0) * y[k];
      phi(j) = v;
    }
  }
  return phi;
}

StarDomain domain_from_spectrum(const ModeSpectrum& spectrum, const AngularGrid& grid) {
  Eigen::VectorXd rho = synthesize(spectrum, grid).array() + 1.0;
  return StarDomain(spectrum.params, grid, std::move(rho));
}

double h_half_norm(const ModeSpectrum& spectrum) {
  double total = 0.0;
  for (int k = 0; k <= spectrum.max_degree; ++k)
    total += (k + spectrum.params.dim - 1.0) * spectrum.degree_energy(k);
  return total;
}

double second_variation(const ModeSpectrum& spectrum) {
  const Params& params = spectrum.params;
  double form = 0.0;
  for (int k = 0; k <= spectrum.max_degree; ++k)
    form += q_eigenvalue(params, k) * spectrum.degree_energy(k);
  return params.p * std::pow(params.decay_exponent(), params.p) * form;
}

double fuglede_prediction(const ModeSpectrum& spectrum) {
  const int size = std::max(256, 8 * (spectrum.max_degree + 1));
  const AngularGrid grid = AngularGrid::for_dimension(spectrum.params.dim, size);
  const double sup = synthesize(spectrum, grid).cwiseAbs().maxCoeff();
  if (!(sup < 0.5))
    throw std::domain_error("fuglede_prediction: spectrum is not nearly spherical (max |phi| = " +
                            std::to_string(sup) + ")");
  return 0.5 * second_variation(spectrum);
}

double spectral_tail_fraction(const StarDomain& domain) {
  const AngularGrid& grid = domain.grid();
  const int kmax = max_resolvable_degree(grid);
  const Eigen::VectorXd phi = domain.rho().array() - 1.0;
  const Eigen::MatrixXd a = project(grid, phi, kmax);
  double total = 0.0, tail = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    const double e = a.row(k).squaredNorm();
    total += e;
    if (2 * k > kmax) tail += e;
  }
  if (total <= 1e-28 * std::max(1.0, phi.squaredNorm())) return 0.0;
  return tail / total;
}

}  // namespace isocap
