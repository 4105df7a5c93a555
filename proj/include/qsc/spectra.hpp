#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qsc/ensemble.hpp"
#include "qsc/structure.hpp"

namespace qsc {

/// Complex 2n x 2n embedding: block(j, k) = to_complex(w.at(j, k)).
BlockMatrix embed(const SelfDualMatrix& w);

/// All 2n eigenvalues, ascending. Throws NotHermitian when the Hermitian
/// residual exceeds 1e-10 * max|m_ij|.
std::vector<double> hermitian_eigenvalues(const BlockMatrix& m);

struct Dedup {
  std::vector<double> values;
  double pairing_residual = 0.0;
};

/// Pairs consecutive sorted values; residual is the largest in-pair gap over
/// max(1, spectral radius). Throws PairingError when it exceeds tol.
Dedup dedup_pairs(std::span<const double> sorted, double tol);

inline constexpr double kDefaultPairTolerance = 1e-8;

struct SpectralSample {
  std::size_t n = 0;
  std::vector<double> eigenvalues_full;
  std::vector<double> eigenvalues_dedup;
  double pairing_residual = 0.0;
};

/// embed -> eigensolve -> dedup.
SpectralSample spectral_sample(const SelfDualMatrix& w, double pair_tol = kDefaultPairTolerance);
SpectralSample spectral_sample_from_eigenvalues(std::vector<double> full, double pair_tol = kDefaultPairTolerance);

/// Empirical distribution F(x) = #{s_i <= x} / count.
class ESD {
 public:
  ESD() = default;
  explicit ESD(std::vector<double> points);  // sorts

  std::span<const double> points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  double operator()(double x) const;  // right-continuous value
  double left(double x) const;        // F(x-)

 private:
  std::vector<double> points_;
};

/// A nondecreasing distribution function with its left limits.
struct Cdf {
  std::function<double(double)> right;
  std::function<double(double)> left;

  static Cdf of(const ESD& e);
  static Cdf semicircle(double sigma = 1.0);
};

double semicircle_pdf(double x, double sigma = 1.0);
double semicircle_cdf(double x, double sigma = 1.0);

/// s(z) = -(z - sqrt(z^2 - 4)) / 2 on the branch with Im s(z) > 0.
/// Throws DomainError unless Im z > 0.
cplx semicircle_stieltjes(cplx z);

struct StieltjesPoint {
  cplx z;
  cplx value;
};

/// (1/(2n)) sum_i 1/(lambda_i - z) over the full spectrum.
StieltjesPoint empirical_stieltjes(const SpectralSample& sample, cplx z);

/// sup_x |F(x) - F_sc(x)| over both one-sided limits at every jump.
double kolmogorov_distance(const ESD& e, double sigma = 1.0);

/// sup_x |F(x) - G(x)| for two step functions.
double sup_distance(const ESD& f, const ESD& g);

inline constexpr double kLevyTolerance = 1e-9;

/// inf{eps > 0 : G(x - eps) - eps <= F(x) <= G(x + eps) + eps for all x},
/// bracketed by bisection to `tol`; returns the upper end of the bracket, so
/// the result is never below the true distance.
double levy_distance(const ESD& f, const Cdf& g, double tol = kLevyTolerance);
double levy_distance(const ESD& f, const ESD& g, double tol = kLevyTolerance);

/// (m - zI)^{-1} by dense elimination.
BlockMatrix resolvent(const BlockMatrix& m, cplx z, Exec exec = Exec::parallel);

struct ResolventStructureReport {
  bool passed = false;
  bool diagonal_type_t = false;
  double max_residual = 0.0;  // Type-I residual, relative
  StructureReport structure;
};

ResolventStructureReport resolvent_structure_check(const SelfDualMatrix& w, cplx z, double tol);

struct TraceMinorReport {
  std::vector<double> differences;  // |tr R - tr R_k| for each quaternion row k
  double bound = 0.0;               // 2 / Im z
  double max_difference = 0.0;
  bool passed = false;
};

/// Removes each quaternion row/column k in turn and compares resolvent traces.
TraceMinorReport trace_minor_check(const SelfDualMatrix& w, cplx z, Exec exec = Exec::parallel);

/// Removes quaternion row and column k.
SelfDualMatrix remove_index(const SelfDualMatrix& w, std::size_t k);

struct Histogram {
  std::vector<double> edges;   // bins + 1
  std::vector<std::size_t> counts;
  std::vector<double> overlay;  // semicircle density at bin centers
};

/// Histogram of `values` over [lo, hi] with the semicircle overlay; values
/// outside the range are clamped into the end bins so counts sum to the size.
Histogram histogram(std::span<const double> values, std::size_t bins, double lo = -2.5, double hi = 2.5,
                    double sigma = 1.0);

}  // namespace qsc
