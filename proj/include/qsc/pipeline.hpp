#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsc/ensemble.hpp"

namespace qsc {

/// What one reduction stage did to the matrix.
///
/// `levy_cube_bound` is always the exact (1/(2n)) tr[(A-B)(A-B)^*] between
/// the stage input A and output B. The measured fields are filled only when
/// the pipeline is asked to run eigensolves.
struct StageRecord {
  std::string stage;
  std::size_t truncated_count = 0;            // truncate: pairs j <= k zeroed
  double rank_bound = 0.0;                    // truncate: truncated_count / n
  double levy_cube_bound = 0.0;
  double centering_shift_norm = 0.0;          // centralize: ||E x~||
  std::size_t variance_floor_replacements = 0;  // rescale: |E_n| (pairs j < k)
  double truncated_variance = 0.0;            // rescale: sigma^2 of the truncated entries

  std::optional<double> levy_measured;
  std::optional<double> sup_measured;         // truncate only
  bool inequality_holds = true;
};

struct PipelineTrace {
  std::size_t n = 0;
  double eta_n = 0.0;
  bool moments_exact = true;
  std::vector<StageRecord> stages;
  SelfDualMatrix final_matrix;

  /// True when every measured inequality held (vacuously true if none measured).
  bool inequalities_hold() const;
};

/// Zeroes every entry (pair) with ||x_jk|| > eta_n sqrt(n), raw units.
std::pair<SelfDualMatrix, StageRecord> truncate(const SelfDualMatrix& w, double eta_n);

/// Sets the diagonal to zero.
std::pair<SelfDualMatrix, StageRecord> zero_diagonal(const SelfDualMatrix& w);

/// Subtracts the truncated-entry mean from every off-diagonal entry j < k
/// (the lower triangle follows by self-duality).
std::pair<SelfDualMatrix, StageRecord> centralize(const SelfDualMatrix& w, const TruncatedMoments& moments);
std::pair<SelfDualMatrix, StageRecord> centralize(const SelfDualMatrix& w, const EnsembleSpec& spec, double eta_n);

/// Divides the centered off-diagonal entries by the truncated standard
/// deviation. When that variance is below 1/2 every pair j < k is replaced by
/// an independent real +-1 variable drawn from the replacement stream of
/// `seed`, which has unit variance and needs no division.
std::pair<SelfDualMatrix, StageRecord> rescale(const SelfDualMatrix& w, const TruncatedMoments& moments,
                                               std::uint64_t seed);
std::pair<SelfDualMatrix, StageRecord> rescale(const SelfDualMatrix& w, const EnsembleSpec& spec, double eta_n);

struct PipelineOptions {
  /// Eigensolve every stage and measure the Levy / sup distances.
  bool measure = false;
  std::size_t mc_samples = kDefaultMcSamples;
  /// Overrides spec.eta when set.
  std::optional<double> eta_n;
};

/// truncate -> zero_diagonal -> centralize -> rescale, asserting that every
/// stage output is a valid self-dual matrix.
PipelineTrace run_pipeline(const SelfDualMatrix& w, const EnsembleSpec& spec, const PipelineOptions& opts = {});

/// Moments of the truncated entries at threshold eta_n sqrt(n).
TruncatedMoments pipeline_moments(const EnsembleSpec& spec, double eta_n, std::size_t mc_samples = kDefaultMcSamples);

}  // namespace qsc
