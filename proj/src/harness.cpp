#include "isocap/harness.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <json.hpp>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "isocap/functionals.hpp"
#include "isocap/geometry.hpp"
#include "isocap/shapes.hpp"
#include "isocap/spectral.hpp"

namespace isocap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Deficits and asymmetries below this are indistinguishable from roundoff.
constexpr double kAbsoluteFloor = 1e-10;

bool same_double(double a, double b) {
  if (std::isnan(a) && std::isnan(b)) return true;
  return std::memcmp(&a, &b, sizeof a) == 0;
}

std::string format17(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "nan" || s == "NaN" || s.empty()) return kNaN;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("malformed number in CSV: '" + s + "'");
  return v;
}

nlohmann::json number_or_null(double x) {
  return std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x);
}

double number_from(const nlohmann::json& j) { return j.is_null() ? kNaN : j.get<double>(); }

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::Ellipse:
      return "ellipse";
    case Family::Harmonic:
      return "harmonic";
    case Family::Random:
      return "random";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  if (name == "ellipse" || name == "spheroid") return Family::Ellipse;
  if (name == "harmonic") return Family::Harmonic;
  if (name == "random") return Family::Random;
  throw std::invalid_argument("unknown shape family '" + name + "'");
}

bool SweepRecord::valid() const {
  if (!ok()) return true;
  return deficit >= -2.0 * err && fraenkel >= 0.0 && alpha >= 0.0;
}

bool SweepRecord::operator==(const SweepRecord& o) const {
  return family == o.family && same_double(param, o.param) && same_double(deficit, o.deficit) &&
         same_double(fraenkel, o.fraenkel) && same_double(alpha, o.alpha) &&
         same_double(prediction, o.prediction) && same_double(err, o.err);
}

void ExperimentConfig::validate() const {
  params.validate();
  solver.validate();
  if (schedule.empty()) throw std::invalid_argument("ExperimentConfig: schedule is empty");
  for (double v : schedule) {
    if (!std::isfinite(v)) throw std::invalid_argument("ExperimentConfig: schedule value is not finite");
    if (family == Family::Ellipse && !(v > 0.0))
      throw std::invalid_argument("ExperimentConfig: aspect ratios must be positive");
    if (family == Family::Random && v < 0.0)
      throw std::invalid_argument("ExperimentConfig: random amplitudes must be nonnegative");
  }
  if (family == Family::Harmonic && harmonic_degree < 0)
    throw std::invalid_argument("ExperimentConfig: harmonic degree must be nonnegative");
  if (family == Family::Random && random_degree < 1)
    throw std::invalid_argument("ExperimentConfig: random degree must be positive");
  if (params.dim != 2 && params.dim != 3)
    throw std::invalid_argument("ExperimentConfig: only N = 2 and N = 3 are supported");
}

StarDomain sweep_shape(const ExperimentConfig& cfg, std::size_t index) {
  const double v = cfg.schedule.at(index);
  switch (cfg.family) {
    case Family::Ellipse:
      return shapes::unit_volume_ellipsoid(cfg.params, v, cfg.grid_size);
    case Family::Harmonic:
      return normalize_volume(shapes::harmonic(cfg.params, cfg.harmonic_degree, v, cfg.grid_size));
    case Family::Random:
      return normalize_volume(shapes::random_band_limited(cfg.params, cfg.random_degree, v,
                                                          cfg.seed + index, cfg.grid_size));
  }
  throw std::logic_error("unhandled family");
}

double shape_prediction(const StarDomain& domain, int max_degree) {
  if (!domain.nearly_spherical()) return kNaN;
  const int k = std::min(max_degree, max_resolvable_degree(domain.grid()));
  ModeSpectrum spec = decompose(domain, k);
  spec.a.row(0).setZero();
  try {
    return fuglede_prediction(spec);
  } catch (const std::domain_error&) {
    return kNaN;
  }
}

SweepRecord evaluate_shape(const StarDomain& domain, const std::string& family, double param,
                           const SolverConfig& solver) {
  SweepRecord r;
  r.family = family;
  r.param = param;
  try {
    const DeficitResult d = deficit(domain, solver);
    r.deficit = d.value;
    r.err = d.error_estimate;
    r.fraenkel = fraenkel_asymmetry(domain);
    r.alpha = alpha_asymmetry(domain);
    r.prediction = shape_prediction(domain);
  } catch (const std::exception& e) {
    r.error = e.what();
    r.deficit = r.fraenkel = r.alpha = r.prediction = r.err = kNaN;
  }
  return r;
}

std::vector<SweepRecord> run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.schedule.size();
  std::vector<SweepRecord> out(n);
  const std::string name = cfg.family == Family::Ellipse && cfg.params.dim == 3
                               ? std::string("spheroid")
                               : to_string(cfg.family);
  auto one = [&](std::size_t i) {
    try {
      out[i] = evaluate_shape(sweep_shape(cfg, i), name, cfg.schedule[i], cfg.solver);
    } catch (const std::exception& e) {
      out[i].family = name;
      out[i].param = cfg.schedule[i];
      out[i].error = e.what();
      out[i].deficit = out[i].fraenkel = out[i].alpha = out[i].prediction = out[i].err = kNaN;
    }
  };
  const int threads = std::max(1, std::min<int>(cfg.threads, static_cast<int>(n)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) one(i);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < n; i += threads) one(i);
      });
    for (auto& th : pool) th.join();
  }
  return out;
}

bool usable(const SweepRecord& r, double threshold) {
  if (!r.ok()) return false;
  const double floor = std::max(threshold * r.err, kAbsoluteFloor);
  return r.deficit > floor && r.fraenkel > floor;
}

FitResult fit_exponent(const std::vector<SweepRecord>& records, double threshold) {
  std::vector<double> xs, ys;
  for (const auto& r : records) {
    if (!usable(r, threshold)) continue;
    xs.push_back(std::log(r.fraenkel));
    ys.push_back(std::log(r.deficit));
  }
  const int n = static_cast<int>(xs.size());
  if (n < 3) throw std::invalid_argument("fit_exponent: fewer than 3 usable rows");
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_exponent: all asymmetries are equal");
  FitResult f;
  f.rows = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

bool MainReport::passed() const {
  if (negative_rows > 0 || failed_rows > 0) return false;
  if (degenerate) return true;
  return min_d_over_a2 > 0.0 && min_d_over_alpha > 0.0;
}

MainReport verify_main(const std::vector<SweepRecord>& records, double threshold) {
  MainReport rep;
  rep.rows = static_cast<int>(records.size());
  rep.min_d_over_a2 = std::numeric_limits<double>::infinity();
  rep.min_d_over_alpha = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    if (!r.ok()) {
      ++rep.failed_rows;
      continue;
    }
    if (!r.valid()) ++rep.negative_rows;
    if (!usable(r, threshold) || !(r.alpha > 0.0)) continue;
    ++rep.usable_rows;
    const double q = r.deficit / (r.fraenkel * r.fraenkel);
    if (q < rep.min_d_over_a2) {
      rep.min_d_over_a2 = q;
      rep.worst_family = r.family;
      rep.worst_param = r.param;
    }
    rep.min_d_over_alpha = std::min(rep.min_d_over_alpha, r.deficit / r.alpha);
  }
  rep.degenerate = rep.usable_rows == 0;
  if (rep.degenerate) rep.min_d_over_a2 = rep.min_d_over_alpha = kNaN;
  return rep;
}

MainReport verify_main(const ExperimentConfig& cfg, double threshold) {
  return verify_main(run_sweep(cfg), threshold);
}

void write_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.family << ',' << format17(r.param) << ',' << format17(r.deficit) << ','
       << format17(r.fraenkel) << ',' << format17(r.alpha) << ',' << format17(r.prediction) << ','
       << format17(r.err) << '\n';
  }
}

std::vector<SweepRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader)
    throw std::runtime_error("CSV header mismatch; expected '" + std::string(kCsvHeader) + "'");
  std::vector<SweepRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 7) throw std::runtime_error("CSV row has " + std::to_string(f.size()) +
                                                " fields: " + line);
    SweepRecord r;
    r.family = f[0];
    r.param = parse_double(f[1]);
    r.deficit = parse_double(f[2]);
    r.fraenkel = parse_double(f[3]);
    r.alpha = parse_double(f[4]);
    r.prediction = parse_double(f[5]);
    r.err = parse_double(f[6]);
    if (std::isnan(r.deficit)) r.error = "failed";
    out.push_back(r);
  }
  return out;
}

std::string to_json(const std::vector<SweepRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j;
    j["family"] = r.family;
    j["param"] = r.param;
    j["deficit"] = number_or_null(r.deficit);
    j["fraenkel"] = number_or_null(r.fraenkel);
    j["alpha"] = number_or_null(r.alpha);
    j["prediction"] = number_or_null(r.prediction);
    j["err"] = number_or_null(r.err);
    if (!r.ok()) j["error"] = r.error;
    arr.push_back(j);
  }
  return arr.dump(2);
}

std::vector<SweepRecord> records_from_json(const std::string& text) {
  const auto arr = nlohmann::json::parse(text);
  std::vector<SweepRecord> out;
  for (const auto& j : arr) {
    SweepRecord r;
    r.family = j.at("family").get<std::string>();
    r.param = j.at("param").get<double>();
    r.deficit = number_from(j.at("deficit"));
    r.fraenkel = number_from(j.at("fraenkel"));
    r.alpha = number_from(j.at("alpha"));
    r.prediction = number_from(j.at("prediction"));
    r.err = number_from(j.at("err"));
    if (j.contains("error")) r.error = j["error"].get<std::string>();
    out.push_back(r);
  }
  return out;
}

void emit(const std::vector<SweepRecord>& records, const std::string& path, Format format) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  if (format == Format::Csv) {
    write_csv(os, records);
  } else {
    os << to_json(records) << '\n';
  }
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<SweepRecord> load_records(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  const int c = is.peek();
  if (c == '[') {
    std::stringstream ss;
    ss << is.rdbuf();
    return records_from_json(ss.str());
  }
  return read_csv(is);
}

}  // namespace isocap
