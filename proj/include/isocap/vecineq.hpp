#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <vector>

namespace isocap {

struct IneqSample {
  double p = 2.0;
  double kappa = 0.0;
  Eigen::VectorXd xi;
  Eigen::VectorXd eta_vec;
  double lhs = 0.0;
  double rhs_core = 0.0;
};

template <typename Scalar>
struct GapSides {
  Scalar lhs;
  Scalar rhs_core;
};

/// Monotonicity of the regularized p-Laplacian flux A(z) = (kappa^2 + |z|^2)^{(p-2)/2} z.
/// lhs = (A(xi) - A(eta)).(xi - eta), rhs_core = (kappa^2 + |xi|^2 + |eta|^2)^{(p-2)/2} |xi - eta|^2.
template <typename DA, typename DB>
GapSides<typename DA::Scalar> monotonicity_gap(typename DA::Scalar p, typename DA::Scalar kappa,
                                               const Eigen::MatrixBase<DA>& xi,
                                               const Eigen::MatrixBase<DB>& eta) {
  using Scalar = typename DA::Scalar;
  using std::pow;
  const Scalar k2 = kappa * kappa;
  const Scalar nx = xi.squaredNorm();
  const Scalar ny = eta.squaredNorm();
  const Scalar e = (p - Scalar(2)) / Scalar(2);
  const auto diff = (xi - eta).eval();
  const Scalar d2 = diff.squaredNorm();
  if (d2 == Scalar(0)) return {Scalar(0), Scalar(0)};
  const Scalar base = k2 + nx + ny;
  if (k2 + nx == Scalar(0)) {
    // xi = 0 with kappa = 0: the xi term drops out.
    return {pow(ny, e) * ny, pow(base, e) * d2};
  }
  if (k2 + ny == Scalar(0)) {
    // eta = 0 with kappa = 0: the eta term drops out.
    return {pow(nx, e) * nx, pow(base, e) * d2};
  }
  const Scalar wy = pow(k2 + ny, e);
  // For nearly equal weights, (wx xi - wy eta).(xi - eta) = wx |xi - eta|^2 + (wx - wy)
  // eta.(xi - eta) with wx - wy formed without cancellation.
  const Scalar rel = diff.dot(xi + eta) / (k2 + ny);
  using std::abs;
  Scalar lhs;
  if (abs(rel) < Scalar(0.5)) {
    using std::expm1;
    using std::log1p;
    const Scalar dw = wy * expm1(e * log1p(rel));
    lhs = (wy + dw) * d2 + dw * eta.dot(diff);
  } else {
    lhs = (pow(k2 + nx, e) * xi - wy * eta).dot(diff);
  }
  return {lhs, pow(base, e) * d2};
}

/// |y|^p - |x|^p - p |x|^{p-2} x.(y - x); at x = 0 the gradient term is dropped.
template <typename DA, typename DB>
typename DA::Scalar power_taylor_gap(typename DA::Scalar p, const Eigen::MatrixBase<DA>& x,
                                     const Eigen::MatrixBase<DB>& y) {
  using Scalar = typename DA::Scalar;
  using std::pow;
  const Scalar nx = x.norm();
  const Scalar ny = y.norm();
  if (nx == Scalar(0)) return pow(ny, p);
  return pow(ny, p) - pow(nx, p) - p * pow(nx, p - Scalar(2)) * x.dot(y - x);
}

/// Comparison quantity for power_taylor_gap: |y-x|^p for p >= 2 and
/// |y-x|^2 (|x|^2 + |y-x|^2)^{(p-2)/2} for 1 < p < 2.
template <typename DA, typename DB>
typename DA::Scalar power_taylor_reference(typename DA::Scalar p, const Eigen::MatrixBase<DA>& x,
                                           const Eigen::MatrixBase<DB>& y) {
  using Scalar = typename DA::Scalar;
  using std::pow;
  const Scalar d2 = (y - x).squaredNorm();
  if (d2 == Scalar(0)) return Scalar(0);
  if (p >= Scalar(2)) return pow(d2, p / Scalar(2));
  return d2 * pow(x.squaredNorm() + d2, (p - Scalar(2)) / Scalar(2));
}

IneqSample make_monotonicity_sample(double p, double kappa, const Eigen::VectorXd& xi,
                                    const Eigen::VectorXd& eta);

struct EmpiricalConstants {
  double p = 0.0;
  long long samples = 0;
  double monotonicity_min = 0.0;  // inf lhs / rhs_core
  double taylor_min = 0.0;        // inf residual / reference
  long long monotonicity_violations = 0;
  long long taylor_violations = 0;
  IneqSample worst_monotonicity;

  bool passed() const {
    return monotonicity_violations == 0 && taylor_violations == 0 && monotonicity_min > 0.0 &&
           taylor_min > 0.0;
  }
  double monotonicity_constant() const { return 0.5 * monotonicity_min; }
  double taylor_constant() const { return 0.5 * taylor_min; }
};

/// Stratified random search for the constants of both inequalities at exponent p. The stream is
/// split into fixed chunks with independent seeds, so the result does not depend on the number of
/// worker threads.
EmpiricalConstants estimate_constants(double p, long long samples, std::uint64_t seed,
                                      int threads = 0);

}  // namespace isocap
