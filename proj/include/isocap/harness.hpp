#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "isocap/capacity.hpp"
#include "isocap/params.hpp"
#include "isocap/star_domain.hpp"

namespace isocap {

enum class Family { Ellipse, Harmonic, Random };

std::string to_string(Family f);
Family family_from_string(const std::string& name);

struct SweepRecord {
  std::string family;
  double param = 0.0;
  double deficit = 0.0;
  double fraenkel = 0.0;
  double alpha = 0.0;
  /// NaN when the shape is not nearly spherical.
  double prediction = 0.0;
  double err = 0.0;
  /// Empty on success; the solver's message when the row failed (numbers are then NaN).
  std::string error;

  bool ok() const { return error.empty(); }
  /// D >= -2 err, A >= 0, alpha >= 0.
  bool valid() const;
  bool operator==(const SweepRecord& o) const;
};

struct ExperimentConfig {
  Params params{2, 1.5};
  Family family = Family::Ellipse;
  /// Aspect ratios (ellipse), amplitudes t (harmonic) or sup |phi| (random).
  std::vector<double> schedule;
  int harmonic_degree = 2;
  int random_degree = 6;
  std::uint64_t seed = 1;
  int grid_size = 0;
  SolverConfig solver;
  std::string out;
  int threads = 1;

  void validate() const;
};

/// Unit-volume shape for schedule entry `index`.
StarDomain sweep_shape(const ExperimentConfig& cfg, std::size_t index);

/// Leading-order deficit of a unit-volume shape, NaN when it is not nearly spherical. The
/// degree-0 coefficient is dropped: it only enters at higher order.
double shape_prediction(const StarDomain& domain, int max_degree = 32);

SweepRecord evaluate_shape(const StarDomain& domain, const std::string& family, double param,
                           const SolverConfig& solver);

/// One record per schedule entry, in schedule order.
std::vector<SweepRecord> run_sweep(const ExperimentConfig& cfg);

/// Rows eligible for fitting and verification: successful, D > threshold err, A > threshold err
/// and both above a small absolute floor.
bool usable(const SweepRecord& r, double threshold = 5.0);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int rows = 0;
};

/// Least squares on log D against log A over usable rows. Throws std::invalid_argument with
/// fewer than 3 usable rows.
FitResult fit_exponent(const std::vector<SweepRecord>& records, double threshold = 5.0);

struct MainReport {
  int rows = 0;
  int usable_rows = 0;
  bool degenerate = true;
  double min_d_over_a2 = 0.0;
  double min_d_over_alpha = 0.0;
  std::string worst_family;
  double worst_param = 0.0;
  /// Rows violating D >= -2 err.
  int negative_rows = 0;
  int failed_rows = 0;

  /// Degenerate families pass vacuously.
  bool passed() const;
};

MainReport verify_main(const std::vector<SweepRecord>& records, double threshold = 5.0);
MainReport verify_main(const ExperimentConfig& cfg, double threshold = 5.0);

enum class Format { Csv, Json };

inline constexpr const char* kCsvHeader = "family,param,deficit,fraenkel,alpha,prediction,err";

void write_csv(std::ostream& os, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_csv(std::istream& is);
std::string to_json(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> records_from_json(const std::string& text);

/// Throws std::runtime_error on I/O failure.
void emit(const std::vector<SweepRecord>& records, const std::string& path, Format format);
std::vector<SweepRecord> load_records(const std::string& path);

}  // namespace isocap
