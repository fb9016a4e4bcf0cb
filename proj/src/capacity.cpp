#include "isocap/capacity.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <json.hpp>

#include "exterior_energy.hpp"
#include "isocap/spectral.hpp"

namespace isocap {

namespace {

// Profiles whose spectrum carries more than this fraction of its energy in the upper half of the
// resolvable band are treated as under-resolved.
constexpr double kMaxTailFraction = 1e-3;

struct StageOutcome {
  int iterations = 0;
  double residual = 0.0;
};

class NewtonMinimizer {
 public:
  NewtonMinimizer(const detail::ExteriorEnergy& energy, const SolverConfig& cfg)
      : energy_(energy), cfg_(cfg), hess_(energy.hessian_pattern()) {
    ldlt_.analyzePattern(hess_);
  }

  StageOutcome minimize(Eigen::VectorXd& u, double kappa, std::vector<double>& history) {
    Eigen::VectorXd grad(u.size());
    Eigen::VectorXd prev_grad, cg_dir;
    StageOutcome out;
    double e = energy_.assemble(u, kappa, grad, hess_);
    if (!std::isfinite(e)) throw ConvergenceError("energy is not finite at the initial guess");
    history.push_back(e);
    bool use_cg = false;
    for (int it = 0; it < cfg_.max_iters; ++it) {
      out.residual = grad.norm();
      if (out.residual <= cfg_.grad_tol) return out;

      Eigen::VectorXd dir;
      if (it == 0) initial_residual_ = out.residual;
      const bool newton = !use_cg && newton_direction(grad, dir);
      if (!newton) {
        // Polak-Ribiere+ conjugate gradient step.
        if (cg_dir.size() == 0 || prev_grad.size() == 0) {
          cg_dir = -grad;
        } else {
          const double beta_pr =
              std::max(0.0, grad.dot(grad - prev_grad) / prev_grad.squaredNorm());
          cg_dir = -grad + beta_pr * cg_dir;
          if (grad.dot(cg_dir) >= 0.0) cg_dir = -grad;
        }
        dir = cg_dir;
      }
      const double slope = grad.dot(dir);
      // Newton decrement at which the energy is converged to near rounding level.
      const double floor = 1e-13 * std::abs(e);
      if (newton && -slope <= floor) return out;

      double step = 1.0;
      if (!newton) step = std::min(1.0, 1.0 / std::max(1e-300, dir.lpNorm<Eigen::Infinity>()));
      Eigen::VectorXd trial;
      double e_trial = std::numeric_limits<double>::infinity();
      bool accepted = false;
      for (int ls = 0; ls < 60; ++ls) {
        trial = u + step * dir;
        e_trial = energy_.energy(trial, kappa);
        if (std::isfinite(e_trial) && e_trial <= e + 1e-4 * step * slope) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        if (-slope <= floor) return out;
        if (newton) {
          use_cg = true;
          continue;
        }
        throw ConvergenceError("line search failed to reduce the discrete energy");
      }
      u = std::move(trial);
      prev_grad = grad;
      e = energy_.assemble(u, kappa, grad, hess_);
      history.push_back(e);
      ++out.iterations;
      // Return to Newton once conjugate gradients made progress.
      use_cg = false;
      if (newton) cg_dir.resize(0);
    }
    out.residual = grad.norm();
    if (out.residual <= cfg_.grad_tol) return out;
    char msg[96];
    std::snprintf(msg, sizeof msg,
                  "optimizer did not reach grad_tol within max_iters (residual %.3e)", out.residual);
    throw ConvergenceError(msg);
  }

 private:
  // Solves H d = -g by conjugate gradients preconditioned with the most recent factorization,
  // refactorizing when the preconditioner has drifted too far from the current Hessian.
  bool newton_direction(const Eigen::VectorXd& grad, Eigen::VectorXd& dir) {
    if (have_factor_ && preconditioned_cg(grad, dir)) return grad.dot(dir) < 0.0;
    ldlt_.factorize(hess_);
    have_factor_ = ldlt_.info() == Eigen::Success;
    if (!have_factor_) return false;
    dir = ldlt_.solve(-grad);
    return ldlt_.info() == Eigen::Success && dir.allFinite() && grad.dot(dir) < 0.0;
  }

  bool preconditioned_cg(const Eigen::VectorXd& grad, Eigen::VectorXd& x) {
    constexpr int kMaxCg = 25;
    // Inexact Newton forcing term, tightening superlinearly as the gradient decreases.
    const double rel_tol =
        std::clamp(grad.norm() / std::max(initial_residual_, 1e-300), 1e-12, 1e-1);
    const auto h = hess_.selfadjointView<Eigen::Lower>();
    x.setZero(grad.size());
    Eigen::VectorXd r = -grad;
    Eigen::VectorXd z = ldlt_.solve(r);
    Eigen::VectorXd d = z;
    double rz = r.dot(z);
    const double target = rel_tol * grad.norm();
    for (int k = 0; k < kMaxCg; ++k) {
      const Eigen::VectorXd hd = h * d;
      const double curv = d.dot(hd);
      if (!(curv > 0.0)) return false;
      const double step = rz / curv;
      x += step * d;
      r -= step * hd;
      if (r.norm() <= target) return x.allFinite();
      z = ldlt_.solve(r);
      const double rz_next = r.dot(z);
      d = z + (rz_next / rz) * d;
      rz = rz_next;
    }
    return false;
  }

  const detail::ExteriorEnergy& energy_;
  const SolverConfig& cfg_;
  Eigen::SparseMatrix<double> hess_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
  bool have_factor_ = false;
  double initial_residual_ = 1.0;
};

CapacityResult solve_single(const StarDomain& domain, double kappa, const SolverConfig& cfg) {
  detail::ExteriorEnergy energy(domain, cfg.n_radial);
  NewtonMinimizer minimizer(energy, cfg);
  CapacityResult result;
  result.kappa = kappa;
  Eigen::VectorXd u = energy.initial_guess();
  if (domain.params().p < 2.0) {
    for (double k : cfg.kappa_schedule) {
      if (k <= kappa) continue;
      if (!perturbed_energy_finite(domain.params())) break;
      result.iterations += minimizer.minimize(u, k, result.energy_history).iterations;
    }
  }
  // Energies of different kappa stages are not comparable; keep only the target stage history.
  result.energy_history.clear();
  const StageOutcome last = minimizer.minimize(u, kappa, result.energy_history);
  result.iterations += last.iterations;
  result.residual = last.residual;
  result.value = result.energy_history.back();
  result.potential = energy.full_potential(u);
  result.angular_nodes = energy.angular_nodes();
  result.discrete_volume = energy.discrete_volume();
  return result;
}

void check_resolved(const StarDomain& domain) {
  const double tail = spectral_tail_fraction(domain);
  if (tail > kMaxTailFraction)
    throw std::invalid_argument("profile oscillates faster than the angular grid resolves (tail "
                                "energy fraction " + std::to_string(tail) + ")");
}

CapacityResult solve_with_estimate(const StarDomain& domain, double kappa,
                                   const SolverConfig& cfg) {
  cfg.validate();
  if (kappa < 0.0) throw std::invalid_argument("kappa must be nonnegative");
  if (kappa > 0.0 && !perturbed_energy_finite(domain.params()))
    throw std::domain_error("the regularized exterior energy is infinite for kappa > 0 when p >= "
                            "3 - 2/N");
  check_resolved(domain);
  CapacityResult fine = solve_single(domain, kappa, cfg);
  if (cfg.richardson) {
    SolverConfig coarse_cfg = cfg;
    coarse_cfg.n_radial = cfg.n_radial / 2;
    const StarDomain coarse_domain = domain.resampled(domain.grid().size() / 2);
    const CapacityResult coarse = solve_single(coarse_domain, kappa, coarse_cfg);
    fine.error_estimate = std::abs(fine.value - coarse.value);
  }
  return fine;
}

}  // namespace

SolverConfig SolverConfig::defaults_for(const Params& params) {
  SolverConfig cfg;
  (void)params;
  return cfg;
}

void SolverConfig::validate() const {
  if (n_radial < 16) throw std::invalid_argument("SolverConfig: n_radial must be at least 16");
  if (!(grad_tol > 0.0)) throw std::invalid_argument("SolverConfig: grad_tol must be positive");
  if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be positive");
  for (std::size_t i = 0; i < kappa_schedule.size(); ++i) {
    if (kappa_schedule[i] < 0.0)
      throw std::invalid_argument("SolverConfig: kappa_schedule must be nonnegative");
    if (i > 0 && kappa_schedule[i] > kappa_schedule[i - 1])
      throw std::invalid_argument("SolverConfig: kappa_schedule must be nonincreasing");
  }
}

CapacityResult solve_capacity(const StarDomain& domain, const SolverConfig& cfg) {
  return solve_with_estimate(domain, 0.0, cfg);
}

CapacityResult solve_capacity(const StarDomain& domain) {
  return solve_capacity(domain, SolverConfig::defaults_for(domain.params()));
}

CapacityResult perturbed_capacity(const StarDomain& domain, double kappa,
                                  const SolverConfig& cfg) {
  return solve_with_estimate(domain, kappa, cfg);
}

double unit_volume_capacity(const CapacityResult& result, const Params& params) {
  const double ratio = unit_ball_volume(params.dim) / result.discrete_volume;
  return result.value * std::pow(ratio, (params.dim - params.p) / params.dim);
}

DeficitResult deficit(const StarDomain& domain, const SolverConfig& cfg) {
  const Params& params = domain.params();
  // Capacity normalization is scale covariant, so solving on the original profile and rescaling
  // the value is the same as solving on the rescaled profile.
  SolverConfig single = cfg;
  single.richardson = false;
  CapacityResult fine = solve_with_estimate(domain, 0.0, single);
  DeficitResult out;
  const double cap_ball = ball_capacity(params, 1.0);
  out.value = unit_volume_capacity(fine, params) - cap_ball;
  if (cfg.richardson) {
    SolverConfig coarse_cfg = single;
    coarse_cfg.n_radial = cfg.n_radial / 2;
    const CapacityResult coarse =
        solve_single(domain.resampled(domain.grid().size() / 2), 0.0, coarse_cfg);
    const double coarse_deficit = unit_volume_capacity(coarse, params) - cap_ball;
    out.error_estimate = std::abs(out.value - coarse_deficit);
    fine.error_estimate = std::abs(fine.value - coarse.value);
  }
  out.capacity = std::move(fine);
  return out;
}

DeficitResult deficit(const StarDomain& domain) {
  return deficit(domain, SolverConfig::defaults_for(domain.params()));
}

std::string to_json(const CapacityResult& result, bool include_potential) {
  nlohmann::json j;
  j["value"] = result.value;
  j["iterations"] = result.iterations;
  j["residual"] = result.residual;
  j["error_estimate"] = result.error_estimate;
  j["discrete_volume"] = result.discrete_volume;
  j["kappa"] = result.kappa;
  j["energy_history"] = result.energy_history;
  j["grid"] = {{"radial_nodes", result.potential.rows()}, {"angular_nodes", result.potential.cols()}};
  if (include_potential) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < result.potential.rows(); ++i) {
      std::vector<double> row(result.potential.cols());
      for (Eigen::Index k = 0; k < result.potential.cols(); ++k) row[k] = result.potential(i, k);
      rows.push_back(row);
    }
    j["potential"] = rows;
    j["angular_coordinates"] =
        std::vector<double>(result.angular_nodes.data(),
                            result.angular_nodes.data() + result.angular_nodes.size());
  }
  return j.dump(2);
}

}  // namespace isocap
