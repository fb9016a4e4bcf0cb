// Command-line driver: capacities, spectra, sweeps and verification runs.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "isocap/capacity.hpp"
#include "isocap/functionals.hpp"
#include "isocap/harness.hpp"
#include "isocap/shape_io.hpp"
#include "isocap/shapes.hpp"
#include "isocap/spectral.hpp"
#include "isocap/vecineq.hpp"

using namespace isocap;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;

struct SolverOptions {
  int radial = 256;
  std::vector<double> kappa_schedule;
  bool richardson = true;
  double grad_tol = 1e-9;
  int max_iters = 60;

  void attach(CLI::App* app) {
    app->add_option("--radial", radial, "Radial cells")->capture_default_str();
    app->add_option("--kappa-schedule", kappa_schedule, "Continuation values of kappa")
        ->delimiter(',');
    app->add_flag("--richardson,!--no-richardson", richardson,
                  "Estimate the error with a half-resolution solve")
        ->capture_default_str();
    app->add_option("--grad-tol", grad_tol, "Gradient tolerance")->capture_default_str();
    app->add_option("--max-iters", max_iters, "Optimizer iteration cap")->capture_default_str();
  }

  SolverConfig config() const {
    SolverConfig c;
    c.n_radial = radial;
    c.kappa_schedule = kappa_schedule;
    c.richardson = richardson;
    c.grad_tol = grad_tol;
    c.max_iters = max_iters;
    c.validate();
    return c;
  }
};

struct SweepOptions {
  int dim = 2;
  double p = 1.5;
  std::string family = "ellipse";
  std::vector<double> schedule;
  int degree = 2;
  int random_degree = 6;
  int count = 0;
  double amplitude = 0.3;
  std::uint64_t seed = 1;
  int grid = 0;
  int threads = 1;
  SolverOptions solver;

  void attach(CLI::App* app) {
    app->add_option("--dim", dim, "Dimension N (2 or 3)")->capture_default_str();
    app->add_option("--p", p, "Exponent 1 < p < N")->capture_default_str();
    app->add_option("--family", family, "ellipse | harmonic | random")
        ->check(CLI::IsMember({"ellipse", "spheroid", "harmonic", "random"}))
        ->capture_default_str();
    app->add_option("--schedule", schedule,
                    "Aspect ratios, harmonic amplitudes or random sup-norms")
        ->delimiter(',');
    app->add_option("--degree", degree, "Harmonic degree k")->capture_default_str();
    app->add_option("--random-degree", random_degree, "Band limit of random profiles")
        ->capture_default_str();
    app->add_option("--count", count, "Random family: number of shapes when no schedule is given");
    app->add_option("--amplitude", amplitude, "Random family: largest sup |phi|")
        ->capture_default_str();
    app->add_option("--seed", seed, "Seed")->capture_default_str();
    app->add_option("--grid", grid, "Angular nodes (0 = default)")->capture_default_str();
    app->add_option("--threads", threads, "Worker threads")->capture_default_str();
    solver.attach(app);
  }

  ExperimentConfig config() const {
    ExperimentConfig c;
    c.params = Params(dim, p);
    c.family = family_from_string(family);
    c.schedule = schedule;
    if (c.schedule.empty() && c.family == Family::Random && count > 0) {
      // Amplitudes spread evenly over [amplitude / count, amplitude].
      for (int i = 1; i <= count; ++i) c.schedule.push_back(amplitude * i / count);
    }
    c.harmonic_degree = degree;
    c.random_degree = random_degree;
    c.seed = seed;
    c.grid_size = grid;
    c.threads = threads;
    c.solver = solver.config();
    return c;
  }
};

void print_csv(const std::vector<SweepRecord>& records) { write_csv(std::cout, records); }

int run_truncation(int dim, double p, const std::string& shape, int count, std::uint64_t seed,
                   double S, double S2, int grid, const SolverConfig& cfg) {
  std::vector<StarDomain> domains;
  const Params params(dim, p);
  if (!shape.empty()) {
    domains.push_back(normalize_volume(load_shape(shape, p)));
  } else {
    for (int i = 0; i < count; ++i)
      domains.push_back(
          normalize_volume(shapes::random_band_limited(params, 6, 0.3, seed + i, grid)));
  }
  bool ok = true;
  std::cout << "[\n";
  for (std::size_t i = 0; i < domains.size(); ++i) {
    const TruncationReport rep = truncation_bounds_report(domains[i], S, S2, cfg);
    ok = ok && rep.lower_bound_holds && rep.upper_bound_holds;
    std::cout << to_json(rep) << (i + 1 < domains.size() ? ",\n" : "\n");
  }
  std::cout << "]\n";
  return ok ? kPass : kFail;
}

int run_ineq(const std::vector<double>& ps, long long samples, std::uint64_t seed, int threads) {
  bool ok = true;
  std::printf("p,samples,monotonicity_min,taylor_min,monotonicity_violations,taylor_violations\n");
  for (double p : ps) {
    const EmpiricalConstants c = estimate_constants(p, samples, seed, threads);
    ok = ok && c.passed();
    std::printf("%.17g,%lld,%.17g,%.17g,%lld,%lld\n", p, c.samples, c.monotonicity_min,
                c.taylor_min, c.monotonicity_violations, c.taylor_violations);
  }
  return ok ? kPass : kFail;
}

int run_spectral_check(int kmax, int cases, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim_dist(2, 10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_q1 = 0.0, worst_res = 0.0, worst_ratio = INFINITY;
  for (int c = 0; c < cases; ++c) {
    const int n = dim_dist(rng);
    const double p = 1.0 + (n - 1.0) * (0.02 + 0.96 * u(rng));
    const Params params(n, p);
    worst_q1 = std::max(worst_q1, std::abs(q_eigenvalue(params, 1)));
    for (int k = 0; k <= kmax; ++k) {
      using LD = long double;
      const LD a = alpha_root<LD>(params, k);
      const LD res = (LD(p) - 1) * a * a + (LD(n) - LD(p)) * a - LD(k) * (k + n - 2);
      worst_res = std::max(worst_res, static_cast<double>(std::abs(res)));
      if (k >= 2) worst_ratio = std::min(worst_ratio, q_eigenvalue(params, k) / k);
    }
  }
  std::printf("max_abs_q1,max_alpha_residual,min_q_over_k\n%.3e,%.3e,%.17g\n", worst_q1,
              worst_res, worst_ratio);
  return worst_q1 < 1e-12 && worst_res < 1e-12 && worst_ratio > 0.0 ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"isocap: p-capacity of star-shaped domains and the quantitative isocapacitary "
               "inequality"};
  app.set_config("--config", "", "Read options from a TOML/INI file (keys mirror the flags)");
  app.require_subcommand(1);
  int rc = kPass;

  // ball-cap
  auto* ball = app.add_subcommand("ball-cap", "Closed-form capacity of a ball");
  int ball_dim = 3;
  double ball_p = 2.0, ball_r = 1.0;
  ball->add_option("--dim", ball_dim)->capture_default_str();
  ball->add_option("--p", ball_p)->capture_default_str();
  ball->add_option("--radius", ball_r)->capture_default_str();
  ball->callback([&] {
    std::printf("%.17g\n", ball_capacity(Params(ball_dim, ball_p), ball_r));
  });

  // solve
  auto* solve = app.add_subcommand("solve", "Numerical capacity of a shape file");
  int solve_dim = 3;
  double solve_p = 2.0, solve_kappa = 0.0;
  std::string solve_shape, solve_out;
  bool solve_potential = false;
  SolverOptions solve_opts;
  solve->add_option("--dim", solve_dim, "Dimension; must match the shape file")
      ->capture_default_str();
  solve->add_option("--p", solve_p)->capture_default_str();
  solve->add_option("--shape", solve_shape, "JSON shape file")->required()->check(
      CLI::ExistingFile);
  solve->add_option("--kappa", solve_kappa, "Regularization kappa (0 = capacity)")
      ->capture_default_str();
  solve->add_flag("--potential", solve_potential, "Include the discrete potential");
  solve->add_option("--out", solve_out, "Write the JSON result here instead of stdout");
  solve_opts.attach(solve);
  solve->callback([&] {
    const StarDomain d = load_shape(solve_shape, solve_p);
    if (d.dim() != solve_dim)
      throw std::invalid_argument("--dim does not match the dimension of the shape file");
    const SolverConfig cfg = solve_opts.config();
    const CapacityResult r = solve_kappa > 0.0 ? perturbed_capacity(d, solve_kappa, cfg)
                                               : solve_capacity(d, cfg);
    const std::string text = to_json(r, solve_potential);
    if (solve_out.empty()) {
      std::cout << text << '\n';
    } else {
      std::ofstream(solve_out) << text << '\n';
    }
  });

  // spectral
  auto* spectral = app.add_subcommand("spectral", "Decay exponents and second-variation spectrum");
  int spec_dim = 3, spec_kmax = 20;
  double spec_p = 2.0;
  spectral->add_option("--dim", spec_dim)->capture_default_str();
  spectral->add_option("--p", spec_p)->capture_default_str();
  spectral->add_option("--kmax", spec_kmax)->capture_default_str();
  spectral->callback([&] {
    const Params params(spec_dim, spec_p);
    std::printf("k,alpha_k,Q_k\n");
    for (int k = 0; k <= spec_kmax; ++k)
      std::printf("%d,%.17g,%.17g\n", k, alpha_root(params, k), q_eigenvalue(params, k));
  });

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Deficit and asymmetry over a shape family");
  SweepOptions sweep_opts;
  std::string sweep_out, sweep_format = "csv";
  sweep_opts.attach(sweep);
  sweep->add_option("--out", sweep_out, "Output file (stdout when omitted)");
  sweep->add_option("--format", sweep_format)->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sweep->callback([&] {
    const auto records = run_sweep(sweep_opts.config());
    const Format f = sweep_format == "json" ? Format::Json : Format::Csv;
    if (sweep_out.empty()) {
      if (f == Format::Csv) {
        print_csv(records);
      } else {
        std::cout << to_json(records) << '\n';
      }
    } else {
      emit(records, sweep_out, f);
    }
    for (const auto& r : records) {
      if (!r.ok()) std::fprintf(stderr, "row %s %.6g failed: %s\n", r.family.c_str(), r.param,
                                r.error.c_str());
      if (!r.ok() || !r.valid()) rc = kFail;
    }
  });

  // fit
  auto* fit = app.add_subcommand("fit", "Log-log slope of deficit against Fraenkel asymmetry");
  std::string fit_in;
  double fit_threshold = 5.0;
  fit->add_option("--in", fit_in, "Sweep output (CSV or JSON)")->required()->check(
      CLI::ExistingFile);
  fit->add_option("--threshold", fit_threshold, "Rows need D, A > threshold * err")
      ->capture_default_str();
  fit->callback([&] {
    const FitResult f = fit_exponent(load_records(fit_in), fit_threshold);
    std::printf("slope,intercept,r2,rows\n%.17g,%.17g,%.17g,%d\n", f.slope, f.intercept, f.r2,
                f.rows);
  });

  // verify
  auto* verify = app.add_subcommand("verify", "Check an inequality; exit 0 iff it holds");
  verify->require_subcommand(1);

  auto* vmain = verify->add_subcommand("main", "min D/A^2 and min D/alpha over a family");
  SweepOptions main_opts;
  double main_threshold = 5.0;
  main_opts.attach(vmain);
  vmain->add_option("--threshold", main_threshold)->capture_default_str();
  vmain->callback([&] {
    const auto records = run_sweep(main_opts.config());
    const MainReport rep = verify_main(records, main_threshold);
    std::printf("rows,usable,degenerate,min_d_over_a2,min_d_over_alpha,worst_family,worst_param,"
                "negative_rows,failed_rows,passed\n");
    std::printf("%d,%d,%d,%.17g,%.17g,%s,%.17g,%d,%d,%d\n", rep.rows, rep.usable_rows,
                rep.degenerate, rep.min_d_over_a2, rep.min_d_over_alpha, rep.worst_family.c_str(),
                rep.worst_param, rep.negative_rows, rep.failed_rows, rep.passed());
    if (rep.degenerate) std::fprintf(stderr, "family is degenerate: no row has D above noise\n");
    rc = rep.passed() ? kPass : kFail;
  });

  auto* vtrunc = verify->add_subcommand("truncation", "Capacity bounds for Omega cap B_S");
  int tr_dim = 2, tr_count = 20, tr_grid = 0;
  double tr_p = 1.5, tr_S = 1.2, tr_S2 = 1.35;
  std::uint64_t tr_seed = 1;
  std::string tr_shape;
  SolverOptions tr_opts;
  vtrunc->add_option("--dim", tr_dim)->capture_default_str();
  vtrunc->add_option("--p", tr_p)->capture_default_str();
  vtrunc->add_option("--shape", tr_shape, "Shape file (rescaled to unit volume)")->check(
      CLI::ExistingFile);
  vtrunc->add_option("--count", tr_count, "Random shapes when no --shape is given")
      ->capture_default_str();
  vtrunc->add_option("--seed", tr_seed)->capture_default_str();
  vtrunc->add_option("--grid", tr_grid)->capture_default_str();
  vtrunc->add_option("--S", tr_S)->capture_default_str();
  vtrunc->add_option("--S2", tr_S2)->capture_default_str();
  tr_opts.attach(vtrunc);
  vtrunc->callback([&] {
    rc = run_truncation(tr_dim, tr_p, tr_shape, tr_count, tr_seed, tr_S, tr_S2, tr_grid,
                        tr_opts.config());
  });

  auto* vineq = verify->add_subcommand("ineq", "Empirical constants of the vector inequalities");
  std::vector<double> in_ps{1.2, 1.5, 2.0, 2.5, 3.0, 4.0};
  long long in_samples = 1000000;
  std::uint64_t in_seed = 1;
  int in_threads = 0;
  vineq->add_option("--p", in_ps)->delimiter(',');
  vineq->add_option("--samples", in_samples)->capture_default_str();
  vineq->add_option("--seed", in_seed)->capture_default_str();
  vineq->add_option("--threads", in_threads, "0 = hardware concurrency")->capture_default_str();
  vineq->callback([&] { rc = run_ineq(in_ps, in_samples, in_seed, in_threads); });

  auto* vspec = verify->add_subcommand("spectral", "Closed-form spectrum identities");
  int vs_kmax = 100, vs_cases = 50;
  std::uint64_t vs_seed = 1;
  vspec->add_option("--kmax", vs_kmax)->capture_default_str();
  vspec->add_option("--cases", vs_cases)->capture_default_str();
  vspec->add_option("--seed", vs_seed)->capture_default_str();
  vspec->callback([&] { rc = run_spectral_check(vs_kmax, vs_cases, vs_seed); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return rc;
}
