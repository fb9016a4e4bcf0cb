#include "isocap/functionals.hpp"

#include <cmath>
#include <limits>
#include <json.hpp>

#include "isocap/geometry.hpp"

namespace isocap {

double penalized_cost(const StarDomain& domain, const PenaltyParams& pen,
                      const SolverConfig& cfg) {
  pen.validate();
  const double cap = solve_capacity(domain, cfg).value;
  const double alpha = alpha_asymmetry(domain);
  const double vol = volume(domain);
  const double dev = alpha - pen.epsilon;
  return cap + f_eta(vol, pen.eta, domain.dim()) +
         std::sqrt(pen.epsilon * pen.epsilon + pen.sigma * pen.sigma * dev * dev);
}

StarDomain truncate(const StarDomain& domain, double S) {
  if (!(S > 0.0)) throw std::invalid_argument("truncation radius must be positive");
  return StarDomain(domain.params(), domain.grid(), domain.rho().cwiseMin(S));
}

StarDomain normalize_volume(const StarDomain& domain) {
  const int n = domain.dim();
  return domain.scaled(std::pow(unit_ball_volume(n) / volume(domain), 1.0 / n));
}

StarDomain truncate_rescale(const StarDomain& domain, double S) {
  return normalize_volume(truncate(domain, S));
}

double volume_outside(const StarDomain& domain, double S) {
  const int n = domain.dim();
  const auto& w = domain.grid().weights();
  double total = 0.0;
  for (int j = 0; j < domain.grid().size(); ++j) {
    const double r = domain.rho()(j);
    if (r > S) total += w(j) * (std::pow(r, n) - std::pow(S, n)) / n;
  }
  return total;
}

TruncationReport truncation_bounds_report(const StarDomain& domain, double S, double S2,
                                          const SolverConfig& cfg) {
  if (!(S > 0.0 && S2 > S)) throw std::invalid_argument("truncation radii must satisfy S2 > S > 0");
  const Params& params = domain.params();
  const int n = params.dim;
  const double omega = unit_ball_volume(n);
  if (std::abs(volume(domain) - omega) > 1e-9 * omega)
    throw std::invalid_argument("truncation_bounds_report: domain must have the volume of B_1");

  TruncationReport rep;
  rep.S = S;
  rep.S2 = S2;
  const CapacityResult full = solve_capacity(domain, cfg);
  const CapacityResult trunc = solve_capacity(truncate(domain, S), cfg);
  rep.cap_full = full.value;
  rep.err_full = full.error_estimate;
  rep.cap_truncated = trunc.value;
  rep.err_truncated = trunc.error_estimate;
  rep.outside_S = volume_outside(domain, S);
  rep.outside_S2 = volume_outside(domain, S2);
  const double expo = (n - params.p) / n;
  rep.lower_bound = ball_capacity(params, 1.0) * std::pow(1.0 - rep.outside_S / omega, expo);
  rep.lower_bound_holds = rep.lower_bound <= rep.cap_truncated + rep.tolerance();
  rep.upper_bound_holds = rep.cap_truncated <= rep.cap_full + rep.tolerance();
  if (rep.outside_S2 > 0.0) {
    rep.empirical_c = (rep.cap_full - rep.cap_truncated) * std::pow(1.0 - S / S2, -params.p) *
                      std::pow(rep.outside_S2, -expo);
  } else {
    rep.empirical_c = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

std::string to_json(const TruncationReport& r) {
  nlohmann::json j;
  j["S"] = r.S;
  j["S2"] = r.S2;
  j["cap_full"] = r.cap_full;
  j["err_full"] = r.err_full;
  j["cap_truncated"] = r.cap_truncated;
  j["err_truncated"] = r.err_truncated;
  j["volume_outside_S"] = r.outside_S;
  j["volume_outside_S2"] = r.outside_S2;
  j["lower_bound"] = r.lower_bound;
  j["lower_bound_holds"] = r.lower_bound_holds;
  j["upper_bound_holds"] = r.upper_bound_holds;
  if (std::isnan(r.empirical_c)) {
    j["empirical_c"] = nullptr;
  } else {
    j["empirical_c"] = r.empirical_c;
  }
  return j.dump(2);
}

}  // namespace isocap
