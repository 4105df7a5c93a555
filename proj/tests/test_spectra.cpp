#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "qsc/spectra.hpp"

using namespace qsc;

namespace {

constexpr cplx I{0.0, 1.0};

EnsembleSpec spec_of(LawKind kind, std::size_t n, std::uint64_t seed) {
  EnsembleSpec s;
  s.n = n;
  s.seed = seed;
  s.distribution.kind = kind;
  return s;
}

// Stieltjes transform of the semicircle by quadrature, x = 2 sin(theta)
// removes the square-root endpoint singularities.
cplx stieltjes_oracle(cplx z) {
  auto part = [z](bool imag) {
    return oracle::integrate(
        [z, imag](double t) {
          const double x = 2.0 * std::sin(t);
          const cplx v = oracle::wigner_density(x) * 2.0 * std::cos(t) / (x - z);
          return imag ? v.imag() : v.real();
        },
        -M_PI / 2, M_PI / 2, 1e-13);
  };
  return {part(false), part(true)};
}

}  // namespace

TEST(Embed, ExamplesAndHermitian) {
  SelfDualMatrix one(1, 1.0);
  one.set_raw(0, 0, Quaternion(5.0));
  EXPECT_EQ(embed(one).block(0, 0), Complex2x2::scalar(5.0));
  const SelfDualMatrix w = sample_gse(7, 3);
  EXPECT_EQ(hermitian_residual(embed(w).dense()), 0.0);
}

TEST(Embed, ShiftedSampleIsTypeII) {
  const SelfDualMatrix w = sample_gse(50, 4);
  const auto r = classify(BlockMatrix(kernels::shift_diagonal(embed(w).dense(), I)), 1e-12);
  EXPECT_EQ(r.classification, Classification::TypeII);
}

TEST(Eigenvalues, SmallExamples) {
  SelfDualMatrix one(1, 1.0);
  one.set_raw(0, 0, Quaternion(2.0));
  EXPECT_EQ(hermitian_eigenvalues(embed(one)), (std::vector<double>{2.0, 2.0}));
  CMatrix nonherm(2, 2);
  nonherm(0, 1) = 1.0;
  EXPECT_THROW(hermitian_eigenvalues(BlockMatrix(nonherm)), NotHermitian);
}

TEST(Eigenvalues, MatchBisectionOracle) {
  const SelfDualMatrix w = sample_gse(6, 8);
  const auto ev = hermitian_eigenvalues(embed(w));
  const auto ref = oracle::bisection_eigenvalues(embed(w).dense());
  for (std::size_t i = 0; i < ev.size(); ++i) EXPECT_NEAR(ev[i], ref[i], 1e-9);
}

TEST(Dedup, Examples) {
  const auto d = dedup_pairs(std::vector<double>{1, 1, 2, 2}, 1e-8);
  EXPECT_EQ(d.values, (std::vector<double>{1, 2}));
  EXPECT_EQ(d.pairing_residual, 0.0);
  const auto near = dedup_pairs(std::vector<double>{1, 1 + 1e-12, 3, 3 + 1e-12}, 1e-8);
  EXPECT_EQ(near.values, (std::vector<double>{1, 3}));
  EXPECT_NEAR(near.pairing_residual, 1e-12 / 3.0, 1e-15);
  EXPECT_THROW(dedup_pairs(std::vector<double>{1, 2, 3, 4}, 1e-8), PairingError);
  EXPECT_THROW(dedup_pairs(std::vector<double>{1, 1, 2}, 1e-8), PairingError);
}

TEST(Dedup, PairDegeneracyAcrossEnsembles) {
  for (LawKind kind : {LawKind::gse, LawKind::rademacher, LawKind::uniform})
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto s = spectral_sample(sample_general(spec_of(kind, 5 + seed % 40, seed)));
      EXPECT_LE(s.pairing_residual, 1e-8);
    }
}

TEST(Dedup, TraceIdentity) {
  const SelfDualMatrix w = sample_general(spec_of(LawKind::uniform, 30, 2));
  const auto s = spectral_sample(w);
  const double sum = std::accumulate(s.eigenvalues_full.begin(), s.eigenvalues_full.end(), 0.0);
  const CMatrix d = embed(w).dense();
  EXPECT_NEAR(sum, d.trace().real(), 1e-9 * d.frobenius());
}

TEST(Semicircle, Density) {
  EXPECT_NEAR(semicircle_pdf(0.0), 1.0 / M_PI, 1e-15);
  EXPECT_EQ(semicircle_pdf(2.0), 0.0);
  EXPECT_EQ(semicircle_pdf(-2.0), 0.0);
  const double total =
      oracle::integrate([](double t) { return semicircle_pdf(2 * std::sin(t)) * 2 * std::cos(t); }, -M_PI / 2,
                        M_PI / 2, 1e-14);
  EXPECT_NEAR(total, 1.0, 1e-10);
  EXPECT_NEAR(semicircle_pdf(1.0, 2.0), std::sqrt(15.0) / (8.0 * M_PI), 1e-15);
}

TEST(Semicircle, CdfMatchesQuadrature) {
  EXPECT_EQ(semicircle_cdf(0.0), 0.5);
  EXPECT_EQ(semicircle_cdf(2.0), 1.0);
  EXPECT_EQ(semicircle_cdf(-2.0), 0.0);
  EXPECT_NEAR(semicircle_cdf(1.0), 0.80450, 5e-6);
  for (double x : {-1.9, -0.7, 0.3, 1.0, 1.5}) {
    const double ref = oracle::integrate(
        [](double t) { return oracle::wigner_density(2 * std::sin(t)) * 2 * std::cos(t); }, -M_PI / 2,
        std::asin(x / 2), 1e-14);
    EXPECT_NEAR(semicircle_cdf(x), ref, 1e-10) << x;
  }
}

TEST(Semicircle, StieltjesValues) {
  const cplx s1 = semicircle_stieltjes(I);
  EXPECT_NEAR(s1.real(), 0.0, 1e-15);
  EXPECT_NEAR(s1.imag(), (std::sqrt(5.0) - 1.0) / 2.0, 1e-15);
  const cplx s2 = semicircle_stieltjes(2.0 * I);
  EXPECT_NEAR(s2.imag(), std::sqrt(2.0) - 1.0, 1e-15);
  for (cplx z : {I, 2.0 * I, cplx(1, 1), cplx(-1, 1), cplx(0.5, 0.1)})
    EXPECT_LE(std::abs(semicircle_stieltjes(z) - stieltjes_oracle(z)), 1e-8) << z;
  EXPECT_THROW(semicircle_stieltjes(cplx(1, 0)), DomainError);
  EXPECT_THROW(semicircle_stieltjes(cplx(1, -1)), DomainError);
}

TEST(Semicircle, StieltjesFixedPointAndBranch) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> re(-4.0, 4.0), im(0.01, 4.0);
  for (int t = 0; t < 100; ++t) {
    const cplx z{re(rng), im(rng)};
    const cplx s = semicircle_stieltjes(z);
    EXPECT_LE(std::abs(s + 1.0 / (z + s)), 1e-12) << z;
    EXPECT_GT(s.imag(), 0.0);
    EXPECT_GE(std::abs(z + s), z.imag());
  }
}

TEST(EmpiricalStieltjes, OneAtomAndPositivity) {
  SpectralSample one;
  one.n = 1;
  one.eigenvalues_full = {0.7, 0.7};
  EXPECT_LE(std::abs(empirical_stieltjes(one, I).value - 1.0 / (0.7 - I)), 1e-16);
  const auto s = spectral_sample(sample_gse(40, 6));
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> re(-3.0, 3.0), im(1e-3, 3.0);
  for (int t = 0; t < 50; ++t) {
    const cplx z{re(rng), im(rng)};
    const cplx v = empirical_stieltjes(s, z).value;
    EXPECT_GT(v.imag(), 0.0);
    EXPECT_GE(std::abs(z + v), z.imag() - 1e-12);
  }
}

TEST(EmpiricalStieltjes, MatchesResolventTrace) {
  for (std::size_t n : {3u, 20u, 50u}) {
    const SelfDualMatrix w = sample_gse(n, 100 + n);
    const auto s = spectral_sample(w);
    for (cplx z : {I, cplx(0.3, 0.2), cplx(-1, 2)}) {
      const cplx tr = resolvent(embed(w), z).dense().trace() / double(2 * n);
      EXPECT_LE(std::abs(empirical_stieltjes(s, z).value - tr), 1e-9);
    }
  }
}

TEST(EmpiricalStieltjes, GseNearLimitAtDeskScale) {
  const auto s = spectral_sample(sample_gse(500, 21));
  EXPECT_LE(std::abs(empirical_stieltjes(s, 2.0 * I).value - semicircle_stieltjes(2.0 * I)), 0.05);
}

TEST(Kolmogorov, QuantileConstruction) {
  const std::size_t n = 1000;
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = (double(i) + 0.5) / double(n);
    double lo = -2, hi = 2;
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      (semicircle_cdf(mid) < p ? lo : hi) = mid;
    }
    q[i] = 0.5 * (lo + hi);
  }
  EXPECT_LE(kolmogorov_distance(ESD(q)), 0.5 / n + 1e-12);
}

TEST(Kolmogorov, SingleAtom) {
  const double a = 0.4;
  const double want = std::max(semicircle_cdf(a), 1.0 - semicircle_cdf(a));
  EXPECT_DOUBLE_EQ(kolmogorov_distance(ESD({a})), want);
}

TEST(Kolmogorov, GseDraw) {
  const auto s = spectral_sample(sample_gse(1000, 31));
  EXPECT_LE(kolmogorov_distance(ESD(s.eigenvalues_dedup)), 0.06);
}

TEST(SupDistance, Basics) {
  const ESD f({0.0, 1.0, 2.0});
  EXPECT_EQ(sup_distance(f, f), 0.0);
  EXPECT_DOUBLE_EQ(sup_distance(f, ESD({0.0, 1.0, 3.0})), 1.0 / 3.0);
}

TEST(Levy, IdenticalAndShifted) {
  const ESD f({-1.0, 0.0, 0.5, 2.0});
  EXPECT_EQ(levy_distance(f, f), 0.0);
  for (double delta : {0.01, 0.1, 0.3}) {
    const ESD g({-1.0 + delta, delta, 0.5 + delta, 2.0 + delta});
    const double l = levy_distance(f, g);
    EXPECT_LE(l, delta + kLevyTolerance);
    EXPECT_GT(l, 0.0);
  }
}

TEST(Levy, MatchesGridOracle) {
  std::mt19937_64 rng(14);
  std::normal_distribution<double> g;
  for (int t = 0; t < 10; ++t) {
    std::vector<double> a(7), b(9);
    for (auto& v : a) v = g(rng);
    for (auto& v : b) v = 0.5 * g(rng) + 0.3;
    const ESD fa(a), fb(b);
    const double got = levy_distance(fa, fb);
    const double ref = oracle::levy_grid([&](double x) { return fa(x); }, [&](double x) { return fb(x); }, -8, 8,
                                         16000, 1e-3);
    // The grid oracle is off by at most one eps step plus one x step.
    EXPECT_NEAR(got, ref, 2.5e-3);
  }
}

TEST(Levy, AgainstSemicircleBelowKolmogorov) {
  const ESD e(spectral_sample(sample_gse(80, 41)).eigenvalues_dedup);
  EXPECT_LE(levy_distance(e, Cdf::semicircle()), kolmogorov_distance(e) + kLevyTolerance);
}

TEST(Resolvent, ScalarExamples) {
  const BlockMatrix zero(1);
  const BlockMatrix r = resolvent(zero, I);
  EXPECT_LE(max_abs_diff(r.dense(), I * CMatrix::identity(2)), 1e-16);
  const BlockMatrix id = BlockMatrix::identity(1);
  EXPECT_LE(max_abs_diff(resolvent(id, I).dense(), cplx(0.5, 0.5) * CMatrix::identity(2)), 1e-16);
}

TEST(Resolvent, TraceMatchesEigenvalues) {
  const SelfDualMatrix w = sample_gse(6, 51);
  const auto ev = hermitian_eigenvalues(embed(w));
  const cplx z{0.4, 0.7};
  cplx sum = 0.0;
  for (double l : ev) sum += 1.0 / (l - z);
  EXPECT_LE(std::abs(resolvent(embed(w), z).dense().trace() - sum), 1e-9);
}

TEST(Resolvent, SerialEqualsParallel) {
  const SelfDualMatrix w = sample_gse(30, 52);
  EXPECT_EQ(resolvent(embed(w), I, Exec::serial).dense(), resolvent(embed(w), I, Exec::parallel).dense());
}

TEST(ResolventStructure, Cases) {
  SelfDualMatrix one(1, 1.0);
  one.set_raw(0, 0, Quaternion(0.3));
  const auto r1 = resolvent_structure_check(one, I, 0.0);
  EXPECT_TRUE(r1.diagonal_type_t);
  EXPECT_TRUE(r1.passed);
  EXPECT_TRUE(resolvent_structure_check(sample_gse(10, 61), I, 1e-8).passed);
  EXPECT_TRUE(resolvent_structure_check(sample_general(spec_of(LawKind::rademacher, 10, 62)), {0.5, 0.1}, 1e-8).passed);
  const auto strict = resolvent_structure_check(sample_gse(10, 63), I, 0.0);
  EXPECT_FALSE(strict.passed);
  EXPECT_GT(strict.max_residual, 0.0);
  EXPECT_THROW(resolvent_structure_check(one, cplx(0, 0), 1e-8), DomainError);
}

TEST(TraceMinor, Bounds) {
  SelfDualMatrix two(2, 1.0);
  two.set_raw(0, 0, Quaternion(0.5));
  two.set_raw(0, 1, Quaternion{0.1, -2.0, 0.3, 1.0});
  two.set_raw(1, 1, Quaternion(-1.2));
  const auto r2 = trace_minor_check(two, I);
  EXPECT_TRUE(r2.passed);
  EXPECT_EQ(r2.bound, 2.0);

  const auto r20 = trace_minor_check(sample_gse(20, 71), {0.3, 0.2});
  EXPECT_EQ(r20.differences.size(), 20u);
  for (double d : r20.differences) EXPECT_LE(d, 10.0);

  // w = 0: tr R = -2n/z and tr R_k = -2(n-1)/z, so every difference is 2/|z|.
  const cplx z{0.6, 0.8};
  const auto r0 = trace_minor_check(SelfDualMatrix(5, 1.0), z);
  for (double d : r0.differences) EXPECT_NEAR(d, 2.0 / std::abs(z), 1e-14);
  EXPECT_TRUE(r0.passed);
}

TEST(TraceMinor, SerialEqualsParallel) {
  const SelfDualMatrix w = sample_gse(12, 72);
  EXPECT_EQ(trace_minor_check(w, I, Exec::serial).differences, trace_minor_check(w, I, Exec::parallel).differences);
}

TEST(RemoveIndex, DropsRowAndColumn) {
  const SelfDualMatrix w = sample_gse(5, 81);
  const SelfDualMatrix m = remove_index(w, 2);
  EXPECT_EQ(m.n(), 4u);
  EXPECT_EQ(m.raw(1, 2), w.raw(1, 3));
  EXPECT_EQ(m.raw(3, 0), w.raw(4, 0));
  EXPECT_EQ(m.scale(), w.scale());
}

TEST(Histogram, CountsSumToSize) {
  const auto s = spectral_sample(sample_gse(60, 91));
  const Histogram h = histogram(s.eigenvalues_dedup, 25);
  EXPECT_EQ(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}), 60u);
  EXPECT_EQ(h.edges.size(), 26u);
  EXPECT_NEAR(h.overlay[12], 1.0 / M_PI, 1e-15);
  const Histogram clamp = histogram(std::vector<double>{-10.0, 10.0}, 4);
  EXPECT_EQ(clamp.counts.front(), 1u);
  EXPECT_EQ(clamp.counts.back(), 1u);
  EXPECT_THROW(histogram(std::vector<double>{}, 0), DomainError);
}
