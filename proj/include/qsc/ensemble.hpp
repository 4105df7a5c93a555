#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsc/dense.hpp"
#include "qsc/quaternion.hpp"
#include "qsc/rng.hpp"

namespace qsc {

/// n x n quaternion self-dual Hermitian matrix: x_kj = conj(x_jk), real diagonal.
///
/// Only the upper triangle (with the diagonal) is stored, so the symmetry
/// holds by construction. Entries are kept unnormalized; `scale` is the
/// normalization (1/sqrt(n) for sampled matrices) applied by at().
class SelfDualMatrix {
 public:
  SelfDualMatrix() = default;
  SelfDualMatrix(std::size_t n, double scale);

  std::size_t n() const { return n_; }
  double scale() const { return scale_; }

  /// Unscaled entry for any (j, k); the lower triangle is the conjugate.
  Quaternion raw(std::size_t j, std::size_t k) const;
  /// scale() * raw(j, k).
  Quaternion at(std::size_t j, std::size_t k) const { return raw(j, k) * scale_; }

  /// Sets x_jk (and implicitly x_kj). Throws ShapeError for a non-real diagonal.
  void set_raw(std::size_t j, std::size_t k, const Quaternion& q);

  /// Finite entries and real diagonal.
  bool valid() const;

  /// (1/(2n)) tr[(A-B)(A-B)^*] of the complex embeddings of the scaled matrices.
  friend double normalized_trace_gap(const SelfDualMatrix& a, const SelfDualMatrix& b);

  friend bool operator==(const SelfDualMatrix&, const SelfDualMatrix&) = default;

 private:
  std::size_t index(std::size_t j, std::size_t k) const { return j * n_ - j * (j - 1) / 2 + (k - j); }

  std::size_t n_ = 0;
  double scale_ = 1.0;
  std::vector<Quaternion> upper_;
};

double normalized_trace_gap(const SelfDualMatrix& a, const SelfDualMatrix& b);

// -- distribution descriptors --------------------------------------------------

enum class LawKind { gse, rademacher, uniform, discrete };

std::string to_string(LawKind k);
LawKind law_kind_from_string(const std::string& s);

/// Coefficient law of one quaternion entry. Off-diagonal entries draw their
/// four coefficients i.i.d. from the law normalized to mean 0 and variance
/// 1/4 (so E||x||^2 = 1); diagonal entries are real, twice a coefficient draw
/// (variance 1).
struct Distribution {
  LawKind kind = LawKind::gse;
  /// uniform: support [lo, hi] before normalization.
  double lo = -1.0;
  double hi = 1.0;
  /// discrete: support points and probabilities before normalization.
  std::vector<double> values;
  std::vector<double> probs;
};

/// eta_n = n^exponent ("power") or a fixed value ("constant").
struct EtaSchedule {
  enum class Kind { power, constant };
  Kind kind = Kind::power;
  double exponent = -0.125;
  double value = 1.0;

  double at(std::size_t n) const;
};

struct EnsembleSpec {
  std::size_t n = 1;
  Distribution distribution;
  double diagonal_bound = 4.0;
  std::uint64_t seed = 0;
  EtaSchedule eta;
};

/// Mean and second moment of the truncated entry x * I(||x|| <= tau).
struct TruncatedMoments {
  Quaternion mean;
  double second_moment = 0.0;
  bool exact = true;

  double variance() const { return second_moment - norm_squared(mean); }
};

/// A validated, normalized coefficient law. Throws SpecError from the
/// constructor when the descriptor has nonzero mean or cannot be normalized.
class CoefficientLaw {
 public:
  CoefficientLaw() : CoefficientLaw(Distribution{}) {}
  explicit CoefficientLaw(const Distribution& d);

  LawKind kind() const { return kind_; }

  /// One normalized coefficient (variance 1/4).
  double draw(Engine& rng) const;
  Quaternion draw_offdiagonal(Engine& rng) const;
  Quaternion draw_diagonal(Engine& rng) const;

  /// Upper bound on ||x|| for off-diagonal entries (infinity if unbounded).
  double offdiagonal_bound() const;
  double diagonal_bound() const { return 2.0 * coef_bound_; }

  /// E x I(||x|| <= tau) and E||x||^2 I(||x|| <= tau) for an off-diagonal
  /// entry. Closed form or exact enumeration when available, otherwise
  /// Monte Carlo with `mc_samples` draws from `mc_seed`.
  TruncatedMoments truncated_moments(double tau, std::size_t mc_samples, std::uint64_t mc_seed) const;

  /// E||x||^2 I(||x|| >= tau), off-diagonal and diagonal entries.
  double offdiagonal_tail(double tau, std::size_t mc_samples, std::uint64_t mc_seed) const;
  double diagonal_tail(double tau, std::size_t mc_samples, std::uint64_t mc_seed) const;

 private:
  LawKind kind_;
  double uniform_half_width_ = 0.0;
  std::vector<double> values_;
  std::vector<double> probs_;
  double coef_bound_ = 0.0;
};

inline constexpr std::size_t kDefaultMcSamples = 1'000'000;

/// Validates the spec (law, diagonal bound) and throws SpecError on failure.
CoefficientLaw validate(const EnsembleSpec& spec);

/// GSE draw: off-diagonal coefficients N(0, 1/4), diagonal N(0, 1), scaled by 1/sqrt(n).
SelfDualMatrix sample_gse(std::size_t n, std::uint64_t seed, Exec exec = Exec::parallel);

/// Independent entries on and above the diagonal; row j draws from its own
/// stream derived from (seed, j), so the result does not depend on threads.
SelfDualMatrix sample_general(const EnsembleSpec& spec, Exec exec = Exec::parallel);

/// Monte Carlo / closed-form estimate of (1/n^2) sum_jk E||x_jk||^2 I(||x_jk|| >= eta sqrt(n)).
double lindeberg_statistic(const EnsembleSpec& spec, double eta, std::size_t mc_samples = kDefaultMcSamples);

}  // namespace qsc
