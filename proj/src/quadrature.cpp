#include "isocap/quadrature.hpp"

#include <numbers>
#include <stdexcept>

namespace isocap::quad {

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  Eigen::VectorXd x(n), w(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) {
        p1 = z;
        p0 = 1.0;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = (n == 1) ? 1.0 : n * (z * p1 - p0) / (z * z - 1.0);
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    x(i) = -z;
    x(n - 1 - i) = z;
    w(i) = wi;
    w(n - 1 - i) = wi;
  }
  if (n % 2 == 1) x(n / 2) = 0.0;
  return {x, w};
}

Eigen::VectorXd gauss_legendre_barycentric_weights(const Eigen::VectorXd& nodes,
                                                   const Eigen::VectorXd& weights) {
  // For Gauss-Legendre points the weights are (-1)^j sqrt((1 - x_j^2) w_j) up to a common factor.
  Eigen::VectorXd bw(nodes.size());
  for (Eigen::Index j = 0; j < nodes.size(); ++j) {
    const double s = std::sqrt((1.0 - nodes(j) * nodes(j)) * weights(j));
    bw(j) = (j % 2 == 0) ? s : -s;
  }
  return bw;
}

double barycentric_interpolate(const Eigen::VectorXd& nodes, const Eigen::VectorXd& bary_weights,
                               const Eigen::VectorXd& values, double x) {
  double num = 0.0, den = 0.0;
  for (Eigen::Index j = 0; j < nodes.size(); ++j) {
    const double diff = x - nodes(j);
    if (diff == 0.0) return values(j);
    const double c = bary_weights(j) / diff;
    num += c * values(j);
    den += c;
  }
  return num / den;
}

}  // namespace isocap::quad
