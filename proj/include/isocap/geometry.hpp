#pragma once

#include <Eigen/Core>

#include "isocap/star_domain.hpp"

namespace isocap {

/// (1/N) int_{S^{N-1}} rho^N.
double volume(const StarDomain& domain);

/// (1/|Omega|) int_{S^{N-1}} rho^{N+1}/(N+1) theta. For N = 3 only the axial (z) entry can be
/// nonzero.
Eigen::VectorXd barycenter(const StarDomain& domain);

/// |Omega Delta B_radius(center)|, integrated exactly along each ray from the origin. For N = 3
/// the center must lie on the symmetry axis (std::invalid_argument otherwise).
double symm_diff_with_ball(const StarDomain& domain, const Eigen::VectorXd& center, double radius);

/// min_x |Omega Delta B_r(x)| / |B_r| with |B_r| = |Omega|. Centers are searched on the symmetry
/// axis for N = 3.
double fraenkel_asymmetry(const StarDomain& domain);

/// Center attaining fraenkel_asymmetry.
Eigen::VectorXd fraenkel_center(const StarDomain& domain);

/// int_{Omega Delta B_1(x_Omega)} |1 - |x - x_Omega|| dx.
double alpha_asymmetry(const StarDomain& domain);

}  // namespace isocap
