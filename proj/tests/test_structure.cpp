#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qsc/ensemble.hpp"
#include "qsc/spectra.hpp"
#include "qsc/structure.hpp"

using namespace qsc;

namespace {

constexpr cplx I{0.0, 1.0};

cplx cnormal(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return {g(rng), g(rng)};
}

TypeIIParts random_parts(std::mt19937_64& rng) { return {cnormal(rng), cnormal(rng), cnormal(rng), cnormal(rng)}; }

BlockMatrix shifted_embedding(const SelfDualMatrix& w, cplx z) {
  return BlockMatrix(kernels::shift_diagonal(embed(w).dense(), z));
}

}  // namespace

TEST(TypeT, Examples) {
  EXPECT_TRUE(is_type_t(Complex2x2::scalar(cplx(3, 4)), 0.0));
  EXPECT_FALSE(is_type_t(Complex2x2{1.0, 0.0, 0.0, 2.0}, 1e-12));
}

TEST(TypeT, ResolventDiagonalBlocks) {
  const SelfDualMatrix w = sample_gse(6, 17);
  const BlockMatrix r = resolvent(embed(w), I);
  for (std::size_t j = 0; j < 6; ++j) EXPECT_TRUE(is_type_t(r.block(j, j), 1e-8)) << j;
}

TEST(DRelation, Examples) {
  const Complex2x2 p{1.0, 2.0, 3.0, 4.0};
  const Complex2x2 q{4.0, -2.0, -3.0, 1.0};
  EXPECT_TRUE(d_related(p, q, 0.0));
  const Complex2x2 t = Complex2x2::scalar(cplx(2, -1));
  EXPECT_TRUE(d_related(t, t, 0.0));
  EXPECT_FALSE(d_related(Complex2x2::identity(), Complex2x2::scalar(2.0), 1e-12));
}

TEST(DRelation, Symmetric) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const Complex2x2 p{cnormal(rng), cnormal(rng), cnormal(rng), cnormal(rng)};
    const Complex2x2 q = d_dual(p);
    EXPECT_TRUE(d_related(p, q, 0.0));
    EXPECT_TRUE(d_related(q, p, 0.0));
    EXPECT_EQ(d_dual(q), p);
  }
}

TEST(URelation, ConstructionAndSymmetry) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const TypeIIParts parts = random_parts(rng);
    const Complex2x2 p = parts.compose(), q = parts.mirror();
    EXPECT_TRUE(u_related(p, q, 1e-14));
    EXPECT_TRUE(u_related(q, p, 1e-14));
  }
  EXPECT_TRUE(u_related(Complex2x2{}, Complex2x2{}, 0.0));
}

TEST(URelation, DecomposeRoundTrip) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const TypeIIParts parts = random_parts(rng);
    const TypeIIParts back = decompose_type2(parts.compose(), 1e-13);
    EXPECT_NEAR(std::abs(back.a - parts.a), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(back.b - parts.b), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(back.c - parts.c), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(back.d - parts.d), 0.0, 1e-14);
  }
}

TEST(URelation, QuaternionProductPairs) {
  // Sigma_21 Sigma_12 for quaternion-block data with Sigma_12 = Sigma_21^*:
  // every (j,k)/(k,j) pair is u-related and the diagonal blocks are scalar.
  std::mt19937_64 rng(4);
  const std::size_t rows = 3, cols = 4;
  CMatrix a(2 * rows, 2 * cols);
  for (std::size_t j = 0; j < rows; ++j)
    for (std::size_t k = 0; k < cols; ++k) {
      const Complex2x2 b = to_complex(oracle::random_quaternion(rng));
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) a(2 * j + r, 2 * k + c) = b(r, c);
    }
  const BlockMatrix prod(oracle::multiply(a, a.adjoint()));
  for (std::size_t j = 0; j < rows; ++j) {
    EXPECT_TRUE(is_type_t(prod.block(j, j), 1e-12));
    for (std::size_t k = j + 1; k < rows; ++k) EXPECT_TRUE(u_related(prod.block(j, k), prod.block(k, j), 1e-10));
  }
  EXPECT_EQ(classify(prod, 1e-12).classification, Classification::TypeII);
}

TEST(Classify, IdentityPassesBoth) {
  for (std::size_t n : {1u, 3u, 6u}) {
    const auto r = classify(BlockMatrix::identity(n), 0.0);
    EXPECT_TRUE(r.type_i);
    EXPECT_TRUE(r.type_ii);
    EXPECT_EQ(r.classification, Classification::TypeII);
  }
}

TEST(Classify, ShiftedSelfDualIsTypeII) {
  const SelfDualMatrix w = sample_gse(12, 5);
  const auto r = classify(shifted_embedding(w, I), 1e-12);
  EXPECT_EQ(r.classification, Classification::TypeII);
  const auto inv = classify(resolvent(embed(w), I), 1e-8);
  EXPECT_TRUE(inv.type_i);
  EXPECT_TRUE(inv.diagonal_type_t);
}

TEST(Classify, RandomTypeIIAndItsInverse) {
  const BlockMatrix m = random_type2(5, 99);
  const auto r = classify(m, 1e-12);
  EXPECT_EQ(r.classification, Classification::TypeII);
  // Off-diagonal Type-II pairs are d-related as well, so both flags are set.
  EXPECT_TRUE(r.type_i);
  const auto inv = classify(BlockMatrix(oracle::lu_inverse(m.dense())), 1e-9);
  EXPECT_TRUE(inv.satisfies(Classification::TypeI));
  EXPECT_TRUE(inv.diagonal_type_t);
}

TEST(Classify, PerturbationIsLocated) {
  const double tol = 1e-9;
  BlockMatrix m = random_type2(5, 123);
  Complex2x2 b = m.block(1, 3);
  b(0, 1) += 10.0 * tol * m.max_block_norm();
  m.set_block(1, 3, b);
  const auto r = classify(m, tol);
  EXPECT_EQ(r.classification, Classification::TypeTDiagonalOnly);
  EXPECT_FALSE(r.type_ii);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->j, 1u);
  EXPECT_EQ(r.witness->k, 3u);
  EXPECT_GT(r.max_residual, tol);
}

TEST(Classify, ZeroToleranceFailsInexactInverse) {
  const BlockMatrix m = random_type2(4, 7);
  const auto inv = classify(BlockMatrix(kernels::invert(m.dense())), 0.0);
  EXPECT_FALSE(inv.type_i);
  EXPECT_GT(inv.type_i_residual, 0.0);
  ASSERT_TRUE(inv.witness.has_value());
}

TEST(Schur, DiagonalExample) {
  CMatrix d(4, 4);
  d(0, 0) = d(1, 1) = 2.0;
  d(2, 2) = d(3, 3) = 3.0;
  const BlockMatrix inv = schur_block_inverse(BlockMatrix(d), 1);
  CMatrix want(4, 4);
  want(0, 0) = want(1, 1) = 0.5;
  want(2, 2) = want(3, 3) = 1.0 / 3.0;
  EXPECT_LE(max_abs_diff(inv.dense(), want), 1e-16);
}

TEST(Schur, MatchesLuOracle) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const CMatrix m = oracle::random_matrix(8, rng);
    for (std::size_t split = 1; split < 4; ++split) {
      const BlockMatrix inv = schur_block_inverse(BlockMatrix(m), split);
      const CMatrix ref = oracle::lu_inverse(m);
      EXPECT_LE(max_abs_diff(inv.dense(), ref), 1e-9 * ref.max_abs());
    }
  }
}

TEST(Schur, Errors) {
  std::mt19937_64 rng(9);
  CMatrix m = oracle::random_matrix(6, rng);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) m(i, j) = 0.0;
  EXPECT_THROW(schur_block_inverse(BlockMatrix(m), 1), SingularError);
  EXPECT_THROW(schur_block_inverse(BlockMatrix(m), 0), ShapeError);
  EXPECT_THROW(schur_block_inverse(BlockMatrix(m), 3), ShapeError);
}

TEST(Lemma1, SingleBlock) {
  const auto r = verify_lemma1(1, 50, 1, 1e-9);
  EXPECT_TRUE(r.all_passed());
  EXPECT_EQ(r.passes, 50u);
}

TEST(Lemma1, FourBlocksThousandTrials) {
  const auto r = verify_lemma1(4, 1000, 2, 1e-9);
  EXPECT_EQ(r.passes, 1000u);
  EXPECT_TRUE(r.all_passed());
  EXPECT_GT(r.t1_zero_checks, 0u);
}

TEST(Lemma1, EightBlocksWithZeroT1) {
  const auto r = verify_lemma1(8, 100, 3, 1e-8);
  EXPECT_TRUE(r.all_passed());
  EXPECT_EQ(r.t1_zero_passes, r.t1_zero_checks);
  EXPECT_GT(r.t1_zero_checks, 90u);
}

TEST(Lemma1, SerialEqualsParallel) {
  const auto a = verify_lemma1(5, 40, 4, 1e-9, Exec::serial);
  const auto b = verify_lemma1(5, 40, 4, 1e-9, Exec::parallel);
  EXPECT_EQ(a.passes, b.passes);
  EXPECT_EQ(a.max_residual, b.max_residual);
}

TEST(Lemma1, ZeroToleranceReportsWitness) {
  const auto r = verify_lemma1(3, 20, 5, 0.0);
  EXPECT_FALSE(r.all_passed());
  EXPECT_GT(r.max_residual, 0.0);
  EXPECT_TRUE(r.worst_witness.has_value());
}
