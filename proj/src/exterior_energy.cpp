#include "exterior_energy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace isocap::detail {

namespace {

// Local corners of a cell: 0 = (i, j0), 1 = (i+1, j0), 2 = (i, j1), 3 = (i+1, j1).
constexpr std::array<int, 4> kCornerDi{0, 1, 0, 1};
constexpr std::array<int, 4> kCornerDj{0, 0, 1, 1};

struct TriangleType {
  std::array<int, 3> vertices;
  int t_plus, t_minus;  // w_t = (w[t_plus] - w[t_minus]) / dt
  int e_plus, e_minus;  // w_eta = (w[e_plus] - w[e_minus]) / h
  int t_third;          // centroid at t0 + t_third * dt / 3
  int eta_slot;         // centroid at eta0 + (eta_slot + 1) * h / 3
};

constexpr std::array<TriangleType, 4> kTriangles{{
    {{0, 1, 3}, 1, 0, 3, 1, 2, 0},
    {{0, 3, 2}, 3, 2, 2, 0, 1, 1},
    {{0, 1, 2}, 1, 0, 2, 0, 1, 0},
    {{1, 3, 2}, 3, 2, 3, 1, 2, 1},
}};

constexpr int slot_of(int di, int dj) { return (di + 1) * 3 + (dj + 1); }

struct Local {
  double f, fa, fb, faa, fab, fbb;
};

}  // namespace

ExteriorEnergy::ExteriorEnergy(const StarDomain& domain, int n_radial)
    : dim_(domain.dim()),
      p_(domain.params().p),
      beta_(domain.params().decay_exponent()),
      n_(n_radial) {
  if (n_ < 2) throw std::invalid_argument("ExteriorEnergy: need at least two radial cells");
  const auto& grid = domain.grid();
  const int m = grid.size();
  Eigen::VectorXd log_rho;
  if (dim_ == 2) {
    periodic_ = true;
    weight_ = 1.0;
    nodes_ = m;
    eta_ = grid.nodes();
    log_rho = domain.rho().array().log();
  } else {
    periodic_ = false;
    weight_ = 2.0 * std::numbers::pi;
    nodes_ = m + 2;
    eta_.resize(nodes_);
    log_rho.resize(nodes_);
    eta_(0) = -1.0;
    eta_(nodes_ - 1) = 1.0;
    eta_.segment(1, m) = grid.nodes();
    log_rho.segment(1, m) = domain.rho().array().log();
    log_rho(0) = std::log(domain.profile_at(-1.0));
    log_rho(nodes_ - 1) = std::log(domain.profile_at(1.0));
  }
  if (nodes_ < 4) throw std::invalid_argument("ExteriorEnergy: need at least four angular nodes");

  const int ncells = periodic_ ? nodes_ : nodes_ - 1;
  cells_.reserve(ncells);
  volume_ = 0.0;
  for (int c = 0; c < ncells; ++c) {
    AngularCell cell{};
    cell.j0 = c;
    cell.j1 = periodic_ ? (c + 1) % nodes_ : c + 1;
    const double e0 = eta_(cell.j0);
    cell.h = periodic_ ? 2.0 * std::numbers::pi / nodes_ : eta_(cell.j1) - e0;
    cell.g = (log_rho(cell.j1) - log_rho(cell.j0)) / cell.h;
    for (int k = 0; k < 2; ++k) {
      const double frac = (k + 1) / 3.0;
      cell.rho[k] = std::exp((1.0 - frac) * log_rho(cell.j0) + frac * log_rho(cell.j1));
      if (dim_ == 2) {
        cell.s[k] = 1.0;
      } else {
        const double mu = e0 + frac * cell.h;
        cell.s[k] = std::sqrt(std::max(0.0, 1.0 - mu * mu));
      }
      volume_ += weight_ * cell.h * 0.5 * std::pow(cell.rho[k], dim_) / dim_;
    }
    cells_.push_back(cell);
  }

  // Lower-triangular CSC pattern from the 9-point stencil.
  const int nu = unknowns();
  slot_pos_.assign(static_cast<std::size_t>(nu) * 9, -1);
  std::vector<int> outer(nu + 1, 0);
  std::vector<int> inner;
  inner.reserve(static_cast<std::size_t>(nu) * 5);
  std::vector<std::pair<int, int>> rows;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < nodes_; ++j) {
      const int col = node_index(i, j);
      rows.clear();
      for (int di = -1; di <= 1; ++di) {
        const int ii = i + di;
        if (ii < 0 || ii > n_ - 1) continue;
        for (int dj = -1; dj <= 1; ++dj) {
          int jj = j + dj;
          if (periodic_) {
            jj = (jj + nodes_) % nodes_;
          } else if (jj < 0 || jj >= nodes_) {
            continue;
          }
          const int row = node_index(ii, jj);
          if (row >= col) rows.emplace_back(row, slot_of(di, dj));
        }
      }
      std::sort(rows.begin(), rows.end());
      for (const auto& [row, slot] : rows) {
        slot_pos_[static_cast<std::size_t>(col) * 9 + slot] = static_cast<int>(inner.size());
        inner.push_back(row);
      }
      outer[col + 1] = static_cast<int>(inner.size());
    }
  }
  pattern_.resize(nu, nu);
  pattern_.resizeNonZeros(static_cast<Eigen::Index>(inner.size()));
  std::copy(outer.begin(), outer.end(), pattern_.outerIndexPtr());
  std::copy(inner.begin(), inner.end(), pattern_.innerIndexPtr());
  std::fill(pattern_.valuePtr(), pattern_.valuePtr() + inner.size(), 0.0);
}

Eigen::VectorXd ExteriorEnergy::initial_guess() const { return Eigen::VectorXd::Ones(unknowns()); }

Eigen::SparseMatrix<double> ExteriorEnergy::hessian_pattern() const { return pattern_; }

Eigen::MatrixXd ExteriorEnergy::full_potential(const Eigen::VectorXd& w) const {
  Eigen::MatrixXd full(n_ + 1, nodes_);
  full.row(n_).setOnes();
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < nodes_; ++j) full(i, j) = (static_cast<double>(i) / n_) * w(node_index(i, j));
  return full;
}

double ExteriorEnergy::energy(const Eigen::VectorXd& u, double kappa) const {
  return evaluate<false>(u, kappa, nullptr, nullptr);
}

double ExteriorEnergy::assemble(const Eigen::VectorXd& u, double kappa, Eigen::VectorXd& grad,
                                Eigen::SparseMatrix<double>& hess) const {
  grad.setZero(unknowns());
  std::fill(hess.valuePtr(), hess.valuePtr() + hess.nonZeros(), 0.0);
  return evaluate<true>(u, kappa, &grad, &hess);
}

template <bool WithDerivatives>
double ExteriorEnergy::evaluate(const Eigen::VectorXd& u, double kappa, Eigen::VectorXd* grad,
                                Eigen::SparseMatrix<double>* hess) const {
  const double dt = 1.0 / n_;
  const double half_p = 0.5 * p_;
  const double inv_beta = 1.0 / beta_;
  const bool regularized = kappa > 0.0;
  const double kappa2 = kappa * kappa;
  const double kappa_p = std::pow(kappa, p_);
  // t-dependent factors of the regularized integrand: t^{2 + 2/beta} and t^{-N/beta - 1}.
  auto t_grad_factor = [&](double t) { return std::pow(t, 2.0 + 2.0 * inv_beta); };
  auto t_jac_factor = [&](double t) { return std::pow(t, -dim_ * inv_beta - 1.0); };

  // Weight of the ball integrand rho^{N-p} / beta at the two angular centroid positions.
  std::vector<std::array<double, 2>> w_plain(cells_.size());
  std::vector<std::array<double, 2>> rho_grad(cells_.size());
  std::vector<std::array<double, 2>> rho_jac(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    for (int k = 0; k < 2; ++k) {
      const double r = cells_[c].rho[k];
      w_plain[c][k] = std::pow(r, dim_ - p_) * inv_beta;
      rho_grad[c][k] = 1.0 / (r * r);
      rho_jac[c][k] = std::pow(r, dim_) * inv_beta;
    }
  }

  auto local = [&](double a, double b, double s, double g, double w, double cg,
                   double cj) -> Local {
    const double v1 = beta_ * a;
    const double v2 = s * (b + beta_ * g * a);
    const double q = std::max(v1 * v1 + v2 * v2, 1e-300);
    double phi, dphi, ddphi;
    if (!regularized) {
      phi = w * std::pow(q, half_p);
      dphi = half_p * phi / q;
      ddphi = (half_p - 1.0) * dphi / q;
    } else {
      const double x = kappa2 + cg * q;
      const double px = std::pow(x, half_p - 1.0);
      phi = cj * kappa_p * std::expm1(half_p * std::log1p(cg * q / kappa2));
      dphi = cj * cg * half_p * px;
      ddphi = cj * cg * cg * half_p * (half_p - 1.0) * px / x;
    }
    Local out{phi, 0, 0, 0, 0, 0};
    if constexpr (WithDerivatives) {
      const double qa = 2.0 * (v1 * beta_ + v2 * s * beta_ * g);
      const double qb = 2.0 * v2 * s;
      const double qaa = 2.0 * (beta_ * beta_ + s * s * beta_ * beta_ * g * g);
      const double qab = 2.0 * s * s * beta_ * g;
      const double qbb = 2.0 * s * s;
      out.fa = dphi * qa;
      out.fb = dphi * qb;
      out.faa = ddphi * qa * qa + dphi * qaa;
      out.fab = ddphi * qa * qb + dphi * qab;
      out.fbb = ddphi * qb * qb + dphi * qbb;
    }
    return out;
  };

  double total = 0.0;
  double* hv = WithDerivatives ? hess->valuePtr() : nullptr;
  for (int i = 0; i < n_; ++i) {
    const double t0 = i * dt;
    const double tc[2] = {t0 + dt / 3.0, t0 + 2.0 * dt / 3.0};
    double tg[2] = {0.0, 0.0}, tj[2] = {0.0, 0.0};
    if (regularized) {
      for (int k = 0; k < 2; ++k) {
        tg[k] = t_grad_factor(tc[k]);
        tj[k] = t_jac_factor(tc[k]);
      }
    }
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      const AngularCell& cell = cells_[c];
      std::array<double, 4> uc;
      std::array<int, 4> gidx;
      for (int k = 0; k < 4; ++k) {
        const int ii = i + kCornerDi[k];
        const int jj = kCornerDj[k] == 0 ? cell.j0 : cell.j1;
        if (ii == n_) {
          uc[k] = 1.0;
          gidx[k] = -1;
        } else {
          gidx[k] = node_index(ii, jj);
          uc[k] = u(gidx[k]);
        }
      }
      const double area = weight_ * 0.25 * dt * cell.h;
      std::array<double, 4> lg{};
      std::array<std::array<double, 4>, 4> lh{};
      for (const TriangleType& tri : kTriangles) {
        const int ti = tri.t_third - 1;
        const int ek = tri.eta_slot;
        // u = t w: u_t = w + t w_t and u_eta / t = w_eta, with w linear on the triangle.
        std::array<double, 4> da{}, db{};
        for (int v : tri.vertices) da[v] += 1.0 / 3.0;
        da[tri.t_plus] += tc[ti] / dt;
        da[tri.t_minus] -= tc[ti] / dt;
        db[tri.e_plus] += 1.0 / cell.h;
        db[tri.e_minus] -= 1.0 / cell.h;
        double a = 0.0, b = 0.0;
        for (int k = 0; k < 4; ++k) {
          a += da[k] * uc[k];
          b += db[k] * uc[k];
        }
        const double cg = regularized ? rho_grad[c][ek] * tg[ti] : 0.0;
        const double cj = regularized ? rho_jac[c][ek] * tj[ti] : 0.0;
        const Local l = local(a, b, cell.s[ek], cell.g, w_plain[c][ek], cg, cj);
        total += area * l.f;
        if constexpr (WithDerivatives) {
          for (int r = 0; r < 4; ++r) {
            lg[r] += area * (l.fa * da[r] + l.fb * db[r]);
            for (int s = 0; s < 4; ++s)
              lh[r][s] += area * (l.faa * da[r] * da[s] + l.fab * (da[r] * db[s] + db[r] * da[s]) +
                                  l.fbb * db[r] * db[s]);
          }
        }
      }
      if constexpr (WithDerivatives) {
        for (int r = 0; r < 4; ++r) {
          if (gidx[r] < 0) continue;
          (*grad)(gidx[r]) += lg[r];
          for (int s = 0; s < 4; ++s) {
            if (gidx[s] < 0 || gidx[r] < gidx[s]) continue;
            const int slot = slot_of(kCornerDi[r] - kCornerDi[s], kCornerDj[r] - kCornerDj[s]);
            hv[slot_pos_[static_cast<std::size_t>(gidx[s]) * 9 + slot]] += lh[r][s];
          }
        }
      }
    }
  }
  return total;
}

template double ExteriorEnergy::evaluate<true>(const Eigen::VectorXd&, double, Eigen::VectorXd*,
                                               Eigen::SparseMatrix<double>*) const;
template double ExteriorEnergy::evaluate<false>(const Eigen::VectorXd&, double, Eigen::VectorXd*,
                                                Eigen::SparseMatrix<double>*) const;

}  // namespace isocap::detail
