#include "isocap/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "isocap/params.hpp"
#include "isocap/quadrature.hpp"

namespace isocap {

namespace {

constexpr double kRayTolerance = 1e-10;

struct Interval {
  double lo, hi;
};

// Radial measure int_lo^hi r^{N-1} dr.
double shell(int dim, double lo, double hi) {
  if (hi <= lo) return 0.0;
  return (std::pow(hi, dim) - std::pow(lo, dim)) / dim;
}

// Intersection of the ray {s theta : s >= 0} with the ball B_radius(center), given theta . center.
// Returns false when the ray misses the ball.
bool ray_ball(double dot, double center_sq, double radius, Interval& out) {
  const double disc = dot * dot - center_sq + radius * radius;
  if (disc < 0.0) return false;
  const double root = std::sqrt(disc);
  const double hi = dot + root;
  if (hi <= 0.0) return false;
  out = {std::max(0.0, dot - root), hi};
  return true;
}

// Pieces of [0, rho] Delta [lo, hi] (at most three).
int symmetric_difference(double rho, bool hit, Interval ball, std::array<Interval, 3>& out) {
  int n = 0;
  if (!hit) {
    out[n++] = {0.0, rho};
    return n;
  }
  if (ball.lo > 0.0) out[n++] = {0.0, std::min(ball.lo, rho)};
  if (rho > ball.hi) out[n++] = {std::max(ball.hi, 0.0), rho};
  if (ball.hi > rho) out[n++] = {std::max(ball.lo, rho), ball.hi};
  return n;
}

void check_axis(const StarDomain& domain, const Eigen::VectorXd& center) {
  if (center.size() != domain.dim()) throw std::invalid_argument("center has wrong dimension");
  if (domain.dim() == 3 && (std::abs(center(0)) > 1e-14 || std::abs(center(1)) > 1e-14))
    throw std::invalid_argument(
        "axisymmetric geometry: the ball center must lie on the symmetry axis");
}

double golden_section(const auto& f, double a, double b, double tol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

// Nelder-Mead in the plane; stops when the spread of objective values is below ftol and the
// simplex is smaller than xtol.
Eigen::Vector2d nelder_mead(const auto& f, Eigen::Vector2d start, double size, double ftol,
                            double xtol) {
  std::array<Eigen::Vector2d, 3> x{start, start + Eigen::Vector2d(size, 0.0),
                                   start + Eigen::Vector2d(0.0, size)};
  std::array<double, 3> fx{f(x[0]), f(x[1]), f(x[2])};
  for (int it = 0; it < 2000; ++it) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    const int best = order[0], mid = order[1], worst = order[2];
    const double diam = std::max((x[mid] - x[best]).norm(), (x[worst] - x[best]).norm());
    if (fx[worst] - fx[best] <= ftol && diam <= xtol) break;
    const Eigen::Vector2d centroid = 0.5 * (x[best] + x[mid]);
    const Eigen::Vector2d xr = centroid + (centroid - x[worst]);
    const double fr = f(xr);
    if (fr < fx[best]) {
      const Eigen::Vector2d xe = centroid + 2.0 * (centroid - x[worst]);
      const double fe = f(xe);
      if (fe < fr) {
        x[worst] = xe;
        fx[worst] = fe;
      } else {
        x[worst] = xr;
        fx[worst] = fr;
      }
    } else if (fr < fx[mid]) {
      x[worst] = xr;
      fx[worst] = fr;
    } else {
      const bool outside = fr < fx[worst];
      const Eigen::Vector2d xc =
          outside ? Eigen::Vector2d(centroid + 0.5 * (xr - centroid))
                  : Eigen::Vector2d(centroid + 0.5 * (x[worst] - centroid));
      const double fcv = f(xc);
      if (fcv < std::min(fr, fx[worst])) {
        x[worst] = xc;
        fx[worst] = fcv;
      } else {
        for (int k : {mid, worst}) {
          x[k] = x[best] + 0.5 * (x[k] - x[best]);
          fx[k] = f(x[k]);
        }
      }
    }
  }
  int best = 0;
  for (int k = 1; k < 3; ++k)
    if (fx[k] < fx[best]) best = k;
  return x[best];
}

// Node-weighted sum of per-ray symmetric-difference measures. Only second order: the per-ray
// measure has kinks where the two boundaries cross.
double symm_diff_nodes(const StarDomain& domain, const Eigen::VectorXd& center, double radius) {
  const int n = domain.dim();
  const auto& grid = domain.grid();
  const double center_sq = center.squaredNorm();
  double total = 0.0;
  for (int j = 0; j < grid.size(); ++j) {
    const double rho = domain.rho()(j);
    Interval ball{};
    const bool hit = ray_ball(grid.dot_direction(j, center), center_sq, radius, ball);
    double ray = shell(n, 0.0, rho);
    if (hit) {
      ray += shell(n, ball.lo, ball.hi) - 2.0 * shell(n, ball.lo, std::min(rho, ball.hi));
    }
    total += grid.weights()(j) * std::max(0.0, ray);
  }
  return total;
}

// With the origin inside the ball every ray leaves the ball once, at b(theta), and the per-ray
// measure is |g| with g = (rho^N - b^N) / N smooth. Then int |g| = 2 int_{g > 0} g - int g: the
// last term keeps the spectral accuracy of the node rule and the first is integrated between
// the located crossings on the interpolated profile.
class ResolvedSymmDiff {
 public:
  explicit ResolvedSymmDiff(const StarDomain& domain)
      : domain_(domain), profile_(domain.grid(), domain.rho()) {}

  double operator()(const Eigen::VectorXd& center, double radius) const {
    const double center_sq = center.squaredNorm();
    if (!(center_sq < radius * radius)) return symm_diff_nodes(domain_, center, radius);
    const int n = domain_.dim();
    const auto& grid = domain_.grid();
    const int m = grid.size();
    auto dot_at = [&](double x) {
      return n == 2 ? center(0) * std::cos(x) + center(1) * std::sin(x) : center(2) * x;
    };
    auto g_from = [&](double rho, double dot) {
      const double b = dot + std::sqrt(dot * dot - center_sq + radius * radius);
      return (std::pow(rho, n) - std::pow(b, n)) / n;
    };
    auto g_at = [&](double x) { return g_from(profile_(x), dot_at(x)); };

    // Samples in increasing order of the angular coordinate, closed at both ends.
    std::vector<double> xs, gs;
    xs.reserve(m + 2);
    gs.reserve(m + 2);
    double base = 0.0;
    if (n == 3) {
      xs.push_back(-1.0);
      gs.push_back(g_at(-1.0));
    }
    for (int j = 0; j < m; ++j) {
      const double g = g_from(domain_.rho()(j), grid.dot_direction(j, center));
      base += grid.weights()(j) * g;
      xs.push_back(grid.nodes()(j));
      gs.push_back(g);
    }
    if (n == 3) {
      xs.push_back(1.0);
      gs.push_back(g_at(1.0));
    } else {
      xs.push_back(2.0 * std::numbers::pi);
      gs.push_back(gs.front());
    }

    std::vector<double> cuts{xs.front()};
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      if ((gs[i] > 0.0) != (gs[i + 1] > 0.0)) cuts.push_back(root(g_at, xs[i], xs[i + 1], gs[i], gs[i + 1]));
    }
    cuts.push_back(xs.back());
    if (cuts.size() == 2) return std::abs(base);

    // Regions alternate in sign starting with the sign at the first sample.
    const bool first_positive = gs.front() > 0.0;
    double len_pos = 0.0, len_neg = 0.0;
    for (std::size_t r = 0; r + 1 < cuts.size(); ++r)
      ((r % 2 == 0) == first_positive ? len_pos : len_neg) += cuts[r + 1] - cuts[r];
    const bool use_pos = len_pos <= len_neg;
    const double density = n == 2 ? 1.0 : 2.0 * std::numbers::pi;
    const double spacing = (xs.back() - xs.front()) / m;
    double part = 0.0;
    for (std::size_t r = 0; r + 1 < cuts.size(); ++r) {
      const bool positive = (r % 2 == 0) == first_positive;
      if (positive == use_pos) part += integrate(g_at, cuts[r], cuts[r + 1], spacing);
    }
    part *= density;
    return use_pos ? 2.0 * part - base : base - 2.0 * part;
  }

 private:
  // Illinois variant of regula falsi on a bracketing interval.
  template <typename F>
  static double root(const F& f, double a, double b, double fa, double fb) {
    int side = 0;
    for (int it = 0; it < 60; ++it) {
      const double c = (a * fb - b * fa) / (fb - fa);
      const double fc = f(c);
      if (fc == 0.0 || std::abs(b - a) < 1e-14 * (1.0 + std::abs(c))) return c;
      if ((fc > 0.0) == (fb > 0.0)) {
        b = c;
        fb = fc;
        if (side == -1) fa *= 0.5;
        side = -1;
      } else {
        a = c;
        fa = fc;
        if (side == 1) fb *= 0.5;
        side = 1;
      }
    }
    return (a * fb - b * fa) / (fb - fa);
  }

  // Composite 8-point Gauss-Legendre on panels of about three grid spacings.
  template <typename F>
  static double integrate(const F& f, double lo, double hi, double spacing) {
    static const auto rule = quad::gauss_legendre(8);
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / (3.0 * spacing))));
    const double h = (hi - lo) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + (p + 0.5) * h;
      for (int q = 0; q < 8; ++q) sum += rule.second(q) * f(mid + 0.5 * h * rule.first(q));
    }
    return 0.5 * h * sum;
  }

  const StarDomain& domain_;
  GridInterpolant profile_;
};

}  // namespace

double volume(const StarDomain& domain) {
  const int n = domain.dim();
  return (domain.grid().weights().array() * domain.rho().array().pow(n)).sum() / n;
}

Eigen::VectorXd barycenter(const StarDomain& domain) {
  const int n = domain.dim();
  const auto& grid = domain.grid();
  Eigen::VectorXd moment = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < grid.size(); ++j) {
    const double radial = std::pow(domain.rho()(j), n + 1) / (n + 1);
    if (n == 2) {
      moment += grid.weights()(j) * radial * grid.direction(j);
    } else {
      // Off-axis components vanish after the azimuthal integration.
      moment(2) += grid.weights()(j) * radial * grid.nodes()(j);
    }
  }
  return moment / volume(domain);
}

double symm_diff_with_ball(const StarDomain& domain, const Eigen::VectorXd& center,
                           double radius) {
  check_axis(domain, center);
  if (!(radius >= 0.0)) throw std::invalid_argument("radius must be nonnegative");
  return ResolvedSymmDiff(domain)(center, radius);
}

Eigen::VectorXd fraenkel_center(const StarDomain& domain) {
  const int n = domain.dim();
  const double vol = volume(domain);
  const double radius = std::pow(vol / unit_ball_volume(n), 1.0 / n);
  const double reach = 0.5 * domain.rho().maxCoeff();
  const ResolvedSymmDiff resolved(domain);
  auto coarse = [&](const Eigen::VectorXd& c) { return symm_diff_nodes(domain, c, radius) / vol; };
  auto objective = [&](const Eigen::VectorXd& c) { return resolved(c, radius) / vol; };
  constexpr int kCoarse = 10;  // coarse grid of 2 * kCoarse + 1 points per axis
  const double spacing = reach / kCoarse;
  if (n == 3) {
    auto at = [](double z) { return Eigen::Vector3d(0.0, 0.0, z); };
    double best_z = 0.0, best_c = coarse(at(0.0));
    for (int i = -kCoarse; i <= kCoarse; ++i) {
      const double v = coarse(at(i * spacing));
      if (v < best_c) {
        best_c = v;
        best_z = i * spacing;
      }
    }
    auto f = [&](double z) { return objective(at(z)); };
    const double z = golden_section(f, best_z - spacing, best_z + spacing, 1e-10 * reach);
    return at(f(z) < f(best_z) ? z : best_z);
  }
  Eigen::Vector2d best = Eigen::Vector2d::Zero();
  double best_c = coarse(best);
  for (int i = -kCoarse; i <= kCoarse; ++i) {
    for (int k = -kCoarse; k <= kCoarse; ++k) {
      const Eigen::Vector2d c(i * spacing, k * spacing);
      const double v = coarse(c);
      if (v < best_c) {
        best_c = v;
        best = c;
      }
    }
  }
  auto f = [&](const Eigen::Vector2d& c) { return objective(c); };
  const double best_f = f(best);
  if (best_f == 0.0) return best;
  const Eigen::Vector2d refined = nelder_mead(f, best, 0.5 * spacing, 1e-10, 1e-9 * reach);
  return f(refined) < best_f ? Eigen::VectorXd(refined) : Eigen::VectorXd(best);
}

double fraenkel_asymmetry(const StarDomain& domain) {
  const int n = domain.dim();
  const double vol = volume(domain);
  const double radius = std::pow(vol / unit_ball_volume(n), 1.0 / n);
  return ResolvedSymmDiff(domain)(fraenkel_center(domain), radius) / vol;
}

double alpha_asymmetry(const StarDomain& domain) {
  const int n = domain.dim();
  const auto& grid = domain.grid();
  const Eigen::VectorXd xc = barycenter(domain);
  const double center_sq = xc.squaredNorm();
  double total = 0.0;
  std::array<Interval, 3> pieces{};
  for (int j = 0; j < grid.size(); ++j) {
    const double dot = grid.dot_direction(j, xc);
    Interval ball{};
    const bool hit = ray_ball(dot, center_sq, 1.0, ball);
    const int count = symmetric_difference(domain.rho()(j), hit, ball, pieces);
    // |s theta - x_Omega|^2 = s^2 - 2 s (theta . x_Omega) + |x_Omega|^2
    auto integrand = [&](double s) {
      const double dist = std::sqrt(std::max(0.0, s * s - 2.0 * s * dot + center_sq));
      return std::abs(1.0 - dist) * std::pow(s, n - 1);
    };
    double ray = 0.0;
    for (int k = 0; k < count; ++k) {
      if (pieces[k].hi > pieces[k].lo)
        ray += quad::adaptive_simpson(integrand, pieces[k].lo, pieces[k].hi, kRayTolerance);
    }
    total += grid.weights()(j) * ray;
  }
  return total;
}

}  // namespace isocap
