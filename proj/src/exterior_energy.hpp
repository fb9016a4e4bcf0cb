#pragma once

// Discrete p-Dirichlet energy of the exterior of a star domain in compactified coordinates.
//
// A point of the exterior is x = rho(theta) t^{-1/beta} theta with beta = (N-p)/(p-1) and
// t in (0, 1]; t = 1 is the boundary and t = 0 is infinity. In these coordinates
//
//   int |grad u|^p dx = int int (rho^{N-p} / beta) (beta^2 u_t^2 + s^2 (u_eta / t
//                       + beta (ln rho)_eta u_t)^2)^{p/2} dt w deta,
//
// where eta is the angle (N = 2, s = 1, w = 1) or mu = cos(polar angle) (N = 3, s^2 = 1 - mu^2,
// w = 2 pi). The capacitary potential of a ball is u = t. The (t, eta) rectangle cells are split
// along both diagonals (four P1 triangles, each with weight 1/2, one-point centroid quadrature)
// and ln rho is interpolated linearly between angular nodes.
//
// The unknown is w = u / t, which tends to a smooth angular profile at infinity, so that
// u_eta / t = w_eta carries no 1/t singularity. Rows t_i = i/n, i = 0..n-1, are unknown; the
// boundary row t = 1 is fixed at w = 1.

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <vector>

#include "isocap/star_domain.hpp"

namespace isocap::detail {

class ExteriorEnergy {
 public:
  ExteriorEnergy(const StarDomain& domain, int n_radial);

  int unknowns() const { return n_ * nodes_; }
  int radial_cells() const { return n_; }
  const Eigen::VectorXd& angular_nodes() const { return eta_; }

  /// Ball potential, w = 1.
  Eigen::VectorXd initial_guess() const;

  /// Lower-triangular sparsity pattern of the Hessian with zero values.
  Eigen::SparseMatrix<double> hessian_pattern() const;

  double energy(const Eigen::VectorXd& u, double kappa) const;

  /// Energy, gradient and lower-triangular Hessian. hess must come from hessian_pattern().
  double assemble(const Eigen::VectorXd& u, double kappa, Eigen::VectorXd& grad,
                  Eigen::SparseMatrix<double>& hess) const;

  /// (n+1) x angular-nodes matrix including the Dirichlet rows t = 0 and t = 1.
  Eigen::MatrixXd full_potential(const Eigen::VectorXd& u) const;

  /// Volume of the domain whose boundary is the interpolated profile, with the same angular
  /// quadrature as the energy.
  double discrete_volume() const { return volume_; }

 private:
  struct AngularCell {
    int j0, j1;
    double h;
    double g;        // (ln rho)' on the cell
    double rho[2];   // rho at 1/3 and 2/3 of the cell
    double s[2];     // tangential metric factor at 1/3 and 2/3
  };

  template <bool WithDerivatives>
  double evaluate(const Eigen::VectorXd& u, double kappa, Eigen::VectorXd* grad,
                  Eigen::SparseMatrix<double>* hess) const;

  int node_index(int i, int j) const { return i * nodes_ + j; }

  int dim_;
  double p_;
  double beta_;
  int n_;
  int nodes_;
  bool periodic_;
  double weight_;  // azimuthal factor
  Eigen::VectorXd eta_;
  std::vector<AngularCell> cells_;
  double volume_ = 0.0;
  // Value offset in the CSC arrays for (column node, neighbour slot), -1 outside the lower part.
  std::vector<int> slot_pos_;
  Eigen::SparseMatrix<double> pattern_;
};

}  // namespace isocap::detail
