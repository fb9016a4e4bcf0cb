#pragma once

#include <stdexcept>

#include "isocap/capacity.hpp"
#include "isocap/params.hpp"
#include "isocap/star_domain.hpp"

namespace isocap {

/// Piecewise linear through (omega, 0) with slope -1/eta below omega and -eta above.
/// Written against a generic ordered field so that it can be evaluated exactly.
template <typename Scalar>
Scalar volume_penalty(const Scalar& s, const Scalar& eta, const Scalar& omega) {
  if (!(eta > Scalar(0))) throw std::invalid_argument("f_eta: eta must be positive");
  if (s < Scalar(0)) throw std::invalid_argument("f_eta: volume must be nonnegative");
  if (s <= omega) return Scalar(omega - s) / eta;
  return eta * Scalar(omega - s);
}

/// f_eta with kink at omega_N = |B_1|.
template <typename Scalar = double>
Scalar f_eta(Scalar s, Scalar eta, int dim) {
  return volume_penalty<Scalar>(s, eta, unit_ball_volume<Scalar>(dim));
}

struct PenaltyParams {
  double eta = 0.1;
  double epsilon = 0.0;
  double sigma = 0.1;

  void validate() const {
    if (!(eta > 0.0)) throw std::invalid_argument("PenaltyParams: eta must be positive");
    if (!(sigma > 0.0)) throw std::invalid_argument("PenaltyParams: sigma must be positive");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("PenaltyParams: epsilon must be >= 0");
  }
};

/// Cap_p(Omega) + f_eta(|Omega|) + sqrt(epsilon^2 + sigma^2 (alpha(Omega) - epsilon)^2).
double penalized_cost(const StarDomain& domain, const PenaltyParams& pen, const SolverConfig& cfg);

/// Profile min(rho, S), not rescaled.
StarDomain truncate(const StarDomain& domain, double S);

/// lambda * min(rho, S) with lambda chosen so that the result has the volume of B_1.
StarDomain truncate_rescale(const StarDomain& domain, double S);

/// The same domain scaled to the volume of B_1.
StarDomain normalize_volume(const StarDomain& domain);

/// |Omega \ B_S|, exact along each ray.
double volume_outside(const StarDomain& domain, double S);

struct TruncationReport {
  double S = 0.0;
  double S2 = 0.0;
  double cap_full = 0.0;
  double err_full = 0.0;
  double cap_truncated = 0.0;
  double err_truncated = 0.0;
  double outside_S = 0.0;
  double outside_S2 = 0.0;
  /// Cap_p(B_1) (1 - |Omega \ B_S| / |B_1|)^{(N-p)/N}
  double lower_bound = 0.0;
  bool lower_bound_holds = false;
  /// Cap_p(Omega cap B_S) <= Cap_p(Omega) + 2 * error estimate
  bool upper_bound_holds = false;
  /// (Cap_p(Omega) - Cap_p(Omega cap B_S)) (1 - S/S2)^{-p} |Omega \ B_S2|^{-(N-p)/N}, NaN when
  /// |Omega \ B_S2| = 0.
  double empirical_c = 0.0;

  double tolerance() const { return 2.0 * (err_full > err_truncated ? err_full : err_truncated); }
};

/// Requires |Omega| = |B_1| and S2 > S > 0.
TruncationReport truncation_bounds_report(const StarDomain& domain, double S, double S2,
                                          const SolverConfig& cfg);

std::string to_json(const TruncationReport& report);

}  // namespace isocap
