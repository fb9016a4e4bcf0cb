#include "isocap/vecineq.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace isocap {

IneqSample make_monotonicity_sample(double p, double kappa, const Eigen::VectorXd& xi,
                                    const Eigen::VectorXd& eta) {
  IneqSample s;
  s.p = p;
  s.kappa = kappa;
  s.xi = xi;
  s.eta_vec = eta;
  const auto g = monotonicity_gap(p, kappa, xi, eta);
  s.lhs = g.lhs;
  s.rhs_core = g.rhs_core;
  return s;
}

namespace {

constexpr long long kChunk = 1 << 15;

struct Partial {
  double mono_min = std::numeric_limits<double>::infinity();
  double taylor_min = std::numeric_limits<double>::infinity();
  long long mono_bad = 0;
  long long taylor_bad = 0;
  double worst_kappa = 0.0;
  Eigen::VectorXd worst_xi, worst_eta;
};

Eigen::VectorXd gaussian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

Eigen::VectorXd unit(std::mt19937_64& rng, int n) {
  Eigen::VectorXd v;
  do {
    v = gaussian(rng, n);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

void run_chunk(double p, long long begin, long long end, std::uint64_t seed, long long chunk,
               Partial& out) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> dim_dist(1, 8);
  auto log_uniform = [&](double lo, double hi) { return std::pow(10.0, lo + (hi - lo) * u01(rng)); };

  for (long long s = begin; s < end; ++s) {
    const int n = dim_dist(rng);
    const double scale = log_uniform(-3.0, 3.0);
    Eigen::VectorXd xi = scale * unit(rng, n) * u01(rng);
    if (xi.norm() == 0.0) xi = scale * unit(rng, n);
    Eigen::VectorXd eta;
    switch (s % 4) {
      case 0:
        eta = log_uniform(-3.0, 3.0) * unit(rng, n);
        break;
      case 1:  // nearly equal
        eta = xi + log_uniform(-4.0, -1.0) * xi.norm() * unit(rng, n);
        break;
      case 2:  // one vector much smaller than the other
        eta = log_uniform(-6.0, -2.0) * xi.norm() * unit(rng, n);
        if (u01(rng) < 0.5) std::swap(xi, eta);
        break;
      default:  // roughly opposite
        eta = -2.0 * u01(rng) * xi + 1e-3 * xi.norm() * unit(rng, n);
        break;
    }
    const double kappa = u01(rng) < 0.5 ? 0.0 : log_uniform(-3.0, 2.0) * xi.norm();

    const auto g = monotonicity_gap(p, kappa, xi, eta);
    const double r1 = g.lhs / g.rhs_core;
    if (!(r1 > 0.0)) ++out.mono_bad;
    if (r1 < out.mono_min || std::isnan(r1)) {
      out.mono_min = std::isnan(r1) ? -std::numeric_limits<double>::infinity() : r1;
      out.worst_kappa = kappa;
      out.worst_xi = xi;
      out.worst_eta = eta;
    }
    const double r2 = power_taylor_gap(p, xi, eta) / power_taylor_reference(p, xi, eta);
    if (!(r2 > 0.0)) ++out.taylor_bad;
    out.taylor_min = std::isnan(r2) ? -std::numeric_limits<double>::infinity()
                                    : std::min(out.taylor_min, r2);
  }
}

}  // namespace

EmpiricalConstants estimate_constants(double p, long long samples, std::uint64_t seed,
                                      int threads) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("exponent must exceed 1");
  if (samples <= 0) throw std::invalid_argument("sample count must be positive");
  const long long chunks = (samples + kChunk - 1) / kChunk;
  std::vector<Partial> parts(static_cast<std::size_t>(chunks));
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<long long>(threads, std::max(1LL, chunks)));

  auto worker = [&](int tid) {
    for (long long c = tid; c < chunks; c += threads) {
      run_chunk(p, c * kChunk, std::min(samples, (c + 1) * kChunk), seed, c,
                parts[static_cast<std::size_t>(c)]);
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& t : pool) t.join();
  }

  EmpiricalConstants res;
  res.p = p;
  res.samples = samples;
  res.monotonicity_min = std::numeric_limits<double>::infinity();
  res.taylor_min = std::numeric_limits<double>::infinity();
  for (const auto& part : parts) {
    res.monotonicity_violations += part.mono_bad;
    res.taylor_violations += part.taylor_bad;
    res.taylor_min = std::min(res.taylor_min, part.taylor_min);
    if (part.mono_min < res.monotonicity_min) {
      res.monotonicity_min = part.mono_min;
      res.worst_monotonicity =
          make_monotonicity_sample(p, part.worst_kappa, part.worst_xi, part.worst_eta);
    }
  }
  return res;
}

}  // namespace isocap
