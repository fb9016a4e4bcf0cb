#pragma once

#include <Eigen/Core>

#include <cmath>

#include "isocap/params.hpp"
#include "isocap/star_domain.hpp"

namespace isocap {

/// Negative root of (p-1) a^2 + (N-p) a - k(k+N-2) = 0: the decay exponent of the degree-k mode
/// of the linearized p-Laplacian around the ball potential. alpha_root(0) = -(N-p)/(p-1).
template <typename Scalar = double>
Scalar alpha_root(const Params& params, int k) {
  using std::sqrt;
  params.validate();
  const Scalar n = Scalar(params.dim);
  const Scalar p = Scalar(params.p);
  const Scalar kk = Scalar(k) * (Scalar(k) + n - Scalar(2));
  const Scalar disc = (n - p) * (n - p) + Scalar(4) * (p - Scalar(1)) * kk;
  return -((n - p) + sqrt(disc)) / (Scalar(2) * (p - Scalar(1)));
}

/// Eigenvalue of the second-variation form on a degree-k spherical harmonic:
/// -(N-1) + (N - p + sqrt((N-p)^2 + 4(p-1)k(k+N-2))) / 2. Vanishes at k = 1.
template <typename Scalar = double>
Scalar q_eigenvalue(const Params& params, int k) {
  using std::sqrt;
  params.validate();
  const Scalar n = Scalar(params.dim);
  const Scalar p = Scalar(params.p);
  const Scalar kk = Scalar(k) * (Scalar(k) + n - Scalar(2));
  const Scalar disc = (n - p) * (n - p) + Scalar(4) * (p - Scalar(1)) * kk;
  return -(n - Scalar(1)) + ((n - p) + sqrt(disc)) / Scalar(2);
}

/// Coefficients of phi = rho - 1 against an L^2(S^{N-1})-orthonormal basis.
///
/// N = 2: column 0 holds the cos(k theta) coefficients, column 1 the sin(k theta) ones (the
/// basis is 1/sqrt(2 pi), cos(k theta)/sqrt(pi), sin(k theta)/sqrt(pi)). N = 3: one column of
/// zonal harmonics Y_k = sqrt((2k+1)/(4 pi)) P_k(mu); the multiplicity per degree is 1.
struct ModeSpectrum {
  Params params;
  int max_degree = 0;
  Eigen::MatrixXd a;

  ModeSpectrum() = default;
  ModeSpectrum(Params params_, int max_degree_);

  int multiplicity() const { return static_cast<int>(a.cols()); }
  /// sum_i a_{k,i}^2
  double degree_energy(int k) const { return a.row(k).squaredNorm(); }
  double l2_norm_squared() const { return a.squaredNorm(); }
};

/// Orthonormal basis function Y_{k,i} at an angle (N = 2) or at mu = cos(polar angle) (N = 3).
double basis_function(int dim, int k, int i, double node);

/// Largest degree that decompose() accepts on this grid.
int max_resolvable_degree(const AngularGrid& grid);

ModeSpectrum decompose(const StarDomain& domain, int max_degree);

/// phi evaluated at the grid nodes.
Eigen::VectorXd synthesize(const ModeSpectrum& spectrum, const AngularGrid& grid);

/// Domain with profile rho = 1 + phi on the given grid.
StarDomain domain_from_spectrum(const ModeSpectrum& spectrum, const AngularGrid& grid);

/// Squared H^{1/2} norm through the exterior harmonic extension: sum_k (k + N - 1) a_k^2.
double h_half_norm(const ModeSpectrum& spectrum);

/// Second shape derivative of Cap_p at B_1 in direction phi:
/// p ((N-p)/(p-1))^p sum_k Q_k sum_i a_{k,i}^2.
double second_variation(const ModeSpectrum& spectrum);

/// Leading-order deficit (1/2) second_variation for a nearly spherical domain. Throws
/// std::domain_error when the synthesized |phi| reaches 1/2.
double fuglede_prediction(const ModeSpectrum& spectrum);

/// Fraction of the energy of phi - mean(phi) carried by degrees in the upper half of the band
/// the grid resolves. Zero for constant profiles.
double spectral_tail_fraction(const StarDomain& domain);

}  // namespace isocap
