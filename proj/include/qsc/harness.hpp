#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsc/ensemble.hpp"
#include "qsc/pipeline.hpp"
#include "qsc/spectra.hpp"

namespace qsc {

struct CheckSet {
  bool lemma1 = false;
  bool resolvent_structure = false;
  bool trace_minor = false;
  bool levy_bounds = false;
  bool rank_bounds = false;

  static CheckSet all() { return {true, true, true, true, true}; }
  bool any() const { return lemma1 || resolvent_structure || trace_minor || levy_bounds || rank_bounds; }
};

struct ExperimentConfig {
  EnsembleSpec ensemble;  // ensemble.n is ignored; sizes drive the sweep
  std::vector<std::size_t> sizes{50, 200};
  std::size_t trials_per_size = 1;
  std::vector<cplx> z_grid{{0.0, 1.0}, {0.0, 2.0}, {1.0, 1.0}, {-1.0, 1.0}};
  bool pipeline = false;
  CheckSet checks;
  std::string output_path;
  std::string format = "csv";

  double tol = 1e-8;                   // structural checks, relative
  double pair_tol = kDefaultPairTolerance;
  std::size_t lemma1_max_n = 8;
  std::size_t lemma1_trials = 125;
  std::size_t histogram_bins = 0;      // 0 disables histogram export
  std::size_t mc_samples = kDefaultMcSamples;

  /// Throws ConfigError for an empty or non-increasing size list, a z outside
  /// the upper half-plane, an unknown format, or zero trials.
  void validate() const;
};

struct PipelineSummary {
  std::size_t truncated_count = 0;
  std::size_t replacements = 0;
  double eta_n = 0.0;
  bool inequalities_hold = true;
};

struct ConvergenceRow {
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double kolmogorov = 0.0;
  double levy = 0.0;
  std::vector<double> stieltjes_errors;  // |s_n(z) - s(z)| per z in the grid
  double pairing_residual = 0.0;
  std::optional<PipelineSummary> pipeline;
  bool checks_ok = true;
  std::vector<std::string> failures;
  std::optional<Histogram> histogram;
  double wall_time = 0.0;  // seconds; never part of the emitted files unless asked
};

/// Trial seed: a stable hash of (config seed, n, trial).
std::uint64_t trial_seed(std::uint64_t base, std::size_t n, std::size_t trial);

/// sample -> [pipeline] -> embed -> eigensolve -> dedup -> distances and
/// Stieltjes errors -> enabled per-draw checks. Trials run in parallel;
/// rows come back sorted by (n, trial).
std::vector<ConvergenceRow> run(const ExperimentConfig& config, Exec exec = Exec::parallel);

struct CheckResult {
  CheckResult() = default;
  explicit CheckResult(std::string n) : name(std::move(n)) {}

  std::string name;
  bool passed = true;
  double max_residual = 0.0;
  std::size_t cases = 0;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

/// Runs the enabled structural and inequality checks over the configured
/// ensemble, sizes and trials. Failures are reported, never thrown.
CheckReport verify(const ExperimentConfig& config, Exec exec = Exec::parallel);

/// Small sizes with every check enabled; what `qsc verify` runs without --config.
ExperimentConfig default_verify_config();

/// Column header label of a grid point, e.g. "serr_re-1_im1".
std::string stieltjes_column(cplx z);

/// Shortest round-trip decimal text of a double.
std::string format_double(double v);

std::string to_csv(const std::vector<ConvergenceRow>& rows, const std::vector<cplx>& z_grid);
std::string histogram_csv(const Histogram& h);

struct EmitOptions {
  bool include_timing = false;
  bool histograms = true;
};

/// Writes rows as CSV or JSON to `path` (plus one histogram CSV per row that
/// carries one). Returns the list of files written. Throws IoError.
std::vector<std::string> emit(const std::vector<ConvergenceRow>& rows, const ExperimentConfig& config,
                              const std::string& format, const std::string& path, const EmitOptions& opts = {});

}  // namespace qsc
