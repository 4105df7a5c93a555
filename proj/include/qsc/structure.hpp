#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qsc/dense.hpp"
#include "qsc/quaternion.hpp"

namespace qsc {

/// A 2n x 2n complex matrix viewed as n x n blocks of size 2x2.
/// Block indices are 0-based: block(j, k) covers rows 2j..2j+1, cols 2k..2k+1.
class BlockMatrix {
 public:
  BlockMatrix() = default;
  explicit BlockMatrix(std::size_t n) : n_(n), m_(2 * n, 2 * n) {}
  explicit BlockMatrix(CMatrix m);

  static BlockMatrix identity(std::size_t n) { return BlockMatrix(CMatrix::identity(2 * n)); }

  std::size_t blocks() const { return n_; }
  std::size_t dim() const { return 2 * n_; }

  Complex2x2 block(std::size_t j, std::size_t k) const;
  void set_block(std::size_t j, std::size_t k, const Complex2x2& b);

  const CMatrix& dense() const { return m_; }
  CMatrix& dense() { return m_; }

  /// Largest Frobenius norm over all blocks.
  double max_block_norm() const;

 private:
  std::size_t n_ = 0;
  CMatrix m_;
};

// -- 2x2 block predicates (absolute tolerances) ------------------------------

/// max(|b12|, |b21|, |b11 - b22|).
double type_t_residual(const Complex2x2& b);
bool is_type_t(const Complex2x2& b, double tol);

/// The block d-dual of p: [[p22, -p12], [-p21, p11]].
Complex2x2 d_dual(const Complex2x2& p);
double d_residual(const Complex2x2& p, const Complex2x2& q);
bool d_related(const Complex2x2& p, const Complex2x2& q, double tol);

/// Off-diagonal block of the Type-II pattern written as B + C*i with
/// B = [[a, b], [-conj(b), conj(a)]] and C = [[c, d], [-conj(d), conj(c)]].
struct TypeIIParts {
  cplx a, b, c, d;

  Complex2x2 b_part() const;
  Complex2x2 c_part() const;
  /// B + C*i.
  Complex2x2 compose() const;
  /// B^* + C^* i, the mirrored block.
  Complex2x2 mirror() const;
};

/// Canonical split of an off-diagonal block into the Type-II (B, C) parts.
/// Throws DecompositionError when the recomposed block misses p by more than tol.
TypeIIParts decompose_type2(const Complex2x2& p, double tol);

double u_residual(const Complex2x2& p, const Complex2x2& q, double tol);
bool u_related(const Complex2x2& p, const Complex2x2& q, double tol);

// -- whole-matrix classification ---------------------------------------------

enum class Classification { None, TypeTDiagonalOnly, TypeI, TypeII };

std::string to_string(Classification c);

struct Witness {
  std::size_t j = 0;
  std::size_t k = 0;
  double residual = 0.0;
};

struct StructureReport {
  Classification classification = Classification::None;
  bool type_i = false;
  bool type_ii = false;
  bool diagonal_type_t = false;
  /// Residual of the reported class relative to max_block_norm; when neither
  /// Type-I nor Type-II passes, the smaller of their residuals.
  double max_residual = 0.0;
  double diagonal_residual = 0.0;
  double type_i_residual = 0.0;
  double type_ii_residual = 0.0;
  std::optional<Witness> witness;

  bool satisfies(Classification c) const;
};

/// Classifies against Type-I (d-related off-diagonal pairs) and Type-II
/// (u-related pairs). tol is relative to m.max_block_norm(). Both-pass
/// reports TypeII, with both flags set.
StructureReport classify(const BlockMatrix& m, double tol);

/// Inverse assembled from Schur blocks with the leading `split` block rows
/// as Sigma_11. Throws SingularError when Sigma_11 or the Schur complement
/// has smallest singular value below 1e-12 * ||m||_2.
BlockMatrix schur_block_inverse(const BlockMatrix& m, std::size_t split);

// -- random Type-II matrices and the inversion check --------------------------

/// Random Type-II matrix: t_j standard complex normal shifted by +i;
/// a, b, c, d standard complex normal for every j < k.
BlockMatrix random_type2(std::size_t n, std::uint64_t seed);

struct Lemma1Report {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t passes = 0;
  std::size_t resamples = 0;
  double max_residual = 0.0;
  std::optional<Witness> worst_witness;
  std::size_t t1_zero_checks = 0;
  std::size_t t1_zero_passes = 0;

  bool all_passed() const { return passes == trials && t1_zero_passes == t1_zero_checks; }
};

/// Samples `trials` invertible Type-II matrices, inverts each densely and
/// requires the inverse to classify as Type-I within `tol` (relative). Each
/// trial also re-checks with t_1 forced to zero when that matrix is
/// invertible. Trials use sub-seeds (seed, trial) and may run in parallel.
Lemma1Report verify_lemma1(std::size_t n, std::size_t trials, std::uint64_t seed, double tol,
                           Exec exec = Exec::parallel);

}  // namespace qsc
