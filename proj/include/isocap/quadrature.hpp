#pragma once

#include <Eigen/Core>

#include <cmath>
#include <utility>

namespace isocap::quad {

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n);

/// Barycentric weights for Lagrange interpolation through Gauss-Legendre nodes.
Eigen::VectorXd gauss_legendre_barycentric_weights(const Eigen::VectorXd& nodes,
                                                   const Eigen::VectorXd& weights);

/// Evaluates the polynomial interpolant through (nodes, values) at x.
double barycentric_interpolate(const Eigen::VectorXd& nodes, const Eigen::VectorXd& bary_weights,
                               const Eigen::VectorXd& values, double x);

namespace detail {

template <typename F>
double simpson_refine(const F& f, double a, double b, double fa, double fm, double fb,
                      double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol, int max_depth = 40) {
  if (b <= a) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_refine(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace isocap::quad
