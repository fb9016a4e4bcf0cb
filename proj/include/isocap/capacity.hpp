#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "isocap/params.hpp"
#include "isocap/star_domain.hpp"

namespace isocap {

// Capacities use the unnormalized energy Cap_p(E) = inf { int |grad u|^p : u >= 1 on E, u -> 0 at
// infinity }. In particular Cap_2(B_1) = 4 pi in R^3 (no 1/p factor).

/// Closed-form p-capacity of a ball of radius r: N omega_N ((N-p)/(p-1))^{p-1} r^{N-p}.
template <typename Scalar = double>
Scalar ball_capacity(const Params& params, Scalar r) {
  using std::pow;
  params.validate();
  if (!(r > Scalar(0))) throw std::invalid_argument("ball_capacity: radius must be positive");
  const Scalar n = Scalar(params.dim);
  const Scalar p = Scalar(params.p);
  return unit_sphere_area<Scalar>(params.dim) * pow((n - p) / (p - Scalar(1)), p - Scalar(1)) *
         pow(r, n - p);
}

/// Capacitary potential of B_r evaluated at distance s >= r: (r/s)^{(N-p)/(p-1)}.
template <typename Scalar = double>
Scalar radial_potential(const Params& params, Scalar r, Scalar s) {
  using std::pow;
  params.validate();
  if (!(r > Scalar(0))) throw std::invalid_argument("radial_potential: radius must be positive");
  if (s < r) throw std::invalid_argument("radial_potential: s must lie outside the ball");
  return pow(r / s, Scalar(params.decay_exponent()));
}

/// True when the kappa-regularized exterior energy of a bounded set is finite for kappa > 0,
/// i.e. the far-field |grad u|^2 is integrable: p < 3 - 2/N.
inline bool perturbed_energy_finite(const Params& params) {
  return params.p < 3.0 - 2.0 / params.dim;
}

struct SolverConfig {
  int n_radial = 256;
  /// Continuation values of kappa, applied in order for 1 < p < 2 before the target kappa. Empty
  /// by default: in the compactified coordinates the discrete Hessian stays nondegenerate.
  std::vector<double> kappa_schedule{};
  double grad_tol = 1e-9;
  int max_iters = 60;
  /// Also solve on the grid with half the resolution in both directions and report the
  /// difference as error_estimate.
  bool richardson = true;

  /// Default configuration for the given exponent.
  static SolverConfig defaults_for(const Params& params);
  void validate() const;
};

struct CapacityResult {
  double value = 0.0;
  /// Discrete potential on the (t, angle) grid; row i is t_i = i / n_radial (row 0 is infinity,
  /// the last row is the boundary of the domain), columns follow angular_nodes.
  Eigen::MatrixXd potential;
  Eigen::VectorXd angular_nodes;
  int iterations = 0;
  double residual = 0.0;
  /// |value(h) - value(h/2)| when Richardson estimation is enabled, otherwise 0.
  double error_estimate = 0.0;
  /// Volume of the domain as represented by the discretization.
  double discrete_volume = 0.0;
  double kappa = 0.0;
  /// Energy after each accepted optimizer step (all continuation stages).
  std::vector<double> energy_history;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

CapacityResult solve_capacity(const StarDomain& domain, const SolverConfig& cfg);
CapacityResult solve_capacity(const StarDomain& domain);

/// Minimizes int ((kappa^2 + |grad u|^2)^{p/2} - kappa^p) over the exterior; kappa = 0 is the
/// p-capacity. Throws std::domain_error when kappa > 0 and the energy is infinite.
CapacityResult perturbed_capacity(const StarDomain& domain, double kappa, const SolverConfig& cfg);

/// Capacity of the domain rescaled to the volume of B_1, using the volume the discretization
/// actually represents: value * (omega_N / discrete_volume)^{(N-p)/N}.
double unit_volume_capacity(const CapacityResult& result, const Params& params);

struct DeficitResult {
  double value = 0.0;
  double error_estimate = 0.0;
  CapacityResult capacity;
};

/// Cap_p(lambda Omega) - Cap_p(B_1) with lambda fixing |lambda Omega| = |B_1|.
DeficitResult deficit(const StarDomain& domain, const SolverConfig& cfg);
DeficitResult deficit(const StarDomain& domain);

std::string to_json(const CapacityResult& result, bool include_potential = false);

}  // namespace isocap
