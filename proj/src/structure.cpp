#include "qsc/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qsc/rng.hpp"

namespace qsc {

BlockMatrix::BlockMatrix(CMatrix m) : n_(m.rows() / 2), m_(std::move(m)) {
  if (!m_.square() || m_.rows() % 2 != 0) throw ShapeError("BlockMatrix: need a square matrix of even order");
}

Complex2x2 BlockMatrix::block(std::size_t j, std::size_t k) const {
  const std::size_t r = 2 * j, c = 2 * k;
  return {m_(r, c), m_(r, c + 1), m_(r + 1, c), m_(r + 1, c + 1)};
}

void BlockMatrix::set_block(std::size_t j, std::size_t k, const Complex2x2& b) {
  const std::size_t r = 2 * j, c = 2 * k;
  m_(r, c) = b.m[0];
  m_(r, c + 1) = b.m[1];
  m_(r + 1, c) = b.m[2];
  m_(r + 1, c + 1) = b.m[3];
}

double BlockMatrix::max_block_norm() const {
  double r = 0.0;
  for (std::size_t j = 0; j < n_; ++j)
    for (std::size_t k = 0; k < n_; ++k) r = std::max(r, block(j, k).frobenius());
  return r;
}

double type_t_residual(const Complex2x2& b) {
  return std::max({std::abs(b.m[1]), std::abs(b.m[2]), std::abs(b.m[0] - b.m[3])});
}

bool is_type_t(const Complex2x2& b, double tol) { return type_t_residual(b) <= tol; }

Complex2x2 d_dual(const Complex2x2& p) { return {p.m[3], -p.m[1], -p.m[2], p.m[0]}; }

double d_residual(const Complex2x2& p, const Complex2x2& q) { return (q - d_dual(p)).max_abs(); }

bool d_related(const Complex2x2& p, const Complex2x2& q, double tol) { return d_residual(p, q) <= tol; }

namespace {
constexpr cplx I{0.0, 1.0};
}

Complex2x2 TypeIIParts::b_part() const { return {a, b, -std::conj(b), std::conj(a)}; }
Complex2x2 TypeIIParts::c_part() const { return {c, d, -std::conj(d), std::conj(c)}; }
Complex2x2 TypeIIParts::compose() const { return b_part() + I * c_part(); }
Complex2x2 TypeIIParts::mirror() const { return b_part().adjoint() + I * c_part().adjoint(); }

TypeIIParts decompose_type2(const Complex2x2& p, double tol) {
  // p11 = a + c i, conj(p22) = a - c i; p12 = b + d i, -conj(p21) = b - d i.
  TypeIIParts parts;
  parts.a = 0.5 * (p.m[0] + std::conj(p.m[3]));
  parts.c = (p.m[0] - std::conj(p.m[3])) / (2.0 * I);
  parts.b = 0.5 * (p.m[1] - std::conj(p.m[2]));
  parts.d = (p.m[1] + std::conj(p.m[2])) / (2.0 * I);
  const double res = (parts.compose() - p).max_abs();
  if (!(res <= tol)) {
    std::ostringstream msg;
    msg << "block " << p << " does not fit the Type-II off-diagonal pattern (residual " << res << ")";
    throw DecompositionError(msg.str());
  }
  return parts;
}

double u_residual(const Complex2x2& p, const Complex2x2& q, double tol) {
  return (q - decompose_type2(p, tol).mirror()).max_abs();
}

bool u_related(const Complex2x2& p, const Complex2x2& q, double tol) { return u_residual(p, q, tol) <= tol; }

std::string to_string(Classification c) {
  switch (c) {
    case Classification::None: return "None";
    case Classification::TypeTDiagonalOnly: return "TypeT-diagonal-only";
    case Classification::TypeI: return "TypeI";
    case Classification::TypeII: return "TypeII";
  }
  return "?";
}

bool StructureReport::satisfies(Classification c) const {
  switch (c) {
    case Classification::TypeI: return type_i;
    case Classification::TypeII: return type_ii;
    case Classification::TypeTDiagonalOnly: return diagonal_type_t;
    case Classification::None: return true;
  }
  return false;
}

namespace {

struct Worst {
  double residual = 0.0;
  Witness at;

  void offer(std::size_t j, std::size_t k, double r) {
    if (!(r <= residual)) {  // NaN wins
      residual = std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
      at = {j, k, residual};
    }
  }
};

}  // namespace

StructureReport classify(const BlockMatrix& m, double tol) {
  const std::size_t n = m.blocks();
  double scale = m.max_block_norm();
  if (!(scale > 0.0)) scale = 1.0;

  Worst diag, dpair, upair;
  for (std::size_t j = 0; j < n; ++j) {
    diag.offer(j, j, type_t_residual(m.block(j, j)) / scale);
    for (std::size_t k = j + 1; k < n; ++k) {
      const Complex2x2 p = m.block(j, k);
      const Complex2x2 q = m.block(k, j);
      dpair.offer(j, k, d_residual(p, q) / scale);
      double ur;
      try {
        ur = u_residual(p, q, std::numeric_limits<double>::max());
      } catch (const DecompositionError&) {
        ur = std::numeric_limits<double>::infinity();
      }
      upair.offer(j, k, ur / scale);
    }
  }

  const Worst res_i = dpair.residual > diag.residual ? dpair : diag;
  const Worst res_ii = upair.residual > diag.residual ? upair : diag;

  StructureReport r;
  r.diagonal_residual = diag.residual;
  r.type_i_residual = res_i.residual;
  r.type_ii_residual = res_ii.residual;
  r.diagonal_type_t = diag.residual <= tol;
  r.type_i = res_i.residual <= tol;
  r.type_ii = res_ii.residual <= tol;

  const Worst* chosen = nullptr;
  if (r.type_ii) {
    r.classification = Classification::TypeII;
    chosen = &res_ii;
  } else if (r.type_i) {
    r.classification = Classification::TypeI;
    chosen = &res_i;
  } else {
    r.classification = r.diagonal_type_t ? Classification::TypeTDiagonalOnly : Classification::None;
    chosen = res_i.residual <= res_ii.residual ? &res_i : &res_ii;
  }
  r.max_residual = chosen->residual;
  if (n > 0) r.witness = chosen->at;
  return r;
}

BlockMatrix schur_block_inverse(const BlockMatrix& m, std::size_t split) {
  const std::size_t n = m.blocks();
  if (split == 0 || split >= n) throw ShapeError("schur_block_inverse: split must lie in [1, blocks)");
  const std::size_t s = 2 * split, r = m.dim() - s;
  const CMatrix& a = m.dense();

  const double threshold = 1e-12 * spectral_norm(a);
  const CMatrix s11 = a.slice(0, s, 0, s);
  const CMatrix s12 = a.slice(0, s, s, r);
  const CMatrix s21 = a.slice(s, r, 0, s);
  const CMatrix s22 = a.slice(s, r, s, r);

  if (!(smallest_singular_value(s11) > threshold)) throw SingularError("schur_block_inverse: Sigma_11 is singular");
  const CMatrix s11_inv = kernels::invert(s11);
  const CMatrix schur = s22 - kernels::matmul(s21, kernels::matmul(s11_inv, s12));
  if (!(smallest_singular_value(schur) > threshold))
    throw SingularError("schur_block_inverse: Schur complement is singular");
  const CMatrix schur_inv = kernels::invert(schur);

  const CMatrix upper_right = -1.0 * kernels::matmul(s11_inv, kernels::matmul(s12, schur_inv));
  const CMatrix lower_left = -1.0 * kernels::matmul(schur_inv, kernels::matmul(s21, s11_inv));
  const CMatrix upper_left = s11_inv + kernels::matmul(upper_right, kernels::matmul(-1.0 * s21, s11_inv));

  CMatrix out(m.dim(), m.dim());
  out.paste(0, 0, upper_left);
  out.paste(0, s, upper_right);
  out.paste(s, 0, lower_left);
  out.paste(s, s, schur_inv);
  return BlockMatrix(std::move(out));
}

BlockMatrix random_type2(std::size_t n, std::uint64_t seed) {
  Engine rng(seed);
  std::normal_distribution<double> normal;
  auto cnormal = [&] {
    const double re = normal(rng);
    return cplx(re, normal(rng));
  };
  BlockMatrix m(n);
  for (std::size_t j = 0; j < n; ++j) {
    m.set_block(j, j, Complex2x2::scalar(cnormal() + I));
    for (std::size_t k = j + 1; k < n; ++k) {
      TypeIIParts parts;
      parts.a = cnormal();
      parts.b = cnormal();
      parts.c = cnormal();
      parts.d = cnormal();
      m.set_block(j, k, parts.compose());
      m.set_block(k, j, parts.mirror());
    }
  }
  return m;
}

namespace {

// Dense inverse when the solve is numerically sound, nothing otherwise.
std::optional<BlockMatrix> try_invert(const BlockMatrix& m) {
  try {
    CMatrix inv = kernels::invert(m.dense(), Exec::serial);
    const CMatrix check = kernels::matmul(m.dense(), inv, Exec::serial);
    const double res = max_abs_diff(check, CMatrix::identity(m.dim()));
    if (!(res <= 1e-8)) return std::nullopt;
    return BlockMatrix(std::move(inv));
  } catch (const SingularError&) {
    return std::nullopt;
  }
}

struct TrialResult {
  bool passed = false;
  std::size_t resamples = 0;
  double residual = 0.0;
  std::optional<Witness> witness;
  bool t1_checked = false;
  bool t1_passed = false;
};

TrialResult run_trial(std::size_t n, std::uint64_t seed, std::size_t trial, double tol) {
  TrialResult out;
  for (std::uint64_t attempt = 0;; ++attempt) {
    const BlockMatrix omega = random_type2(n, derive_seed(seed, {stream::structure, trial, attempt}));
    auto inv = try_invert(omega);
    if (!inv) {
      ++out.resamples;
      if (attempt > 1000) return out;
      continue;
    }
    const StructureReport rep = classify(*inv, tol);
    out.passed = rep.type_i;
    out.residual = rep.type_i_residual;
    out.witness = rep.witness;

    BlockMatrix zeroed = omega;
    zeroed.set_block(0, 0, Complex2x2{});
    if (auto inv0 = try_invert(zeroed)) {
      out.t1_checked = true;
      const StructureReport rep0 = classify(*inv0, tol);
      out.t1_passed = rep0.type_i;
      if (rep0.type_i_residual > out.residual) {
        out.residual = rep0.type_i_residual;
        out.witness = rep0.witness;
      }
    }
    return out;
  }
}

}  // namespace

Lemma1Report verify_lemma1(std::size_t n, std::size_t trials, std::uint64_t seed, double tol, Exec exec) {
  if (n == 0) throw ShapeError("verify_lemma1: need n >= 1");
  std::vector<TrialResult> results(trials);
  const auto count = static_cast<std::ptrdiff_t>(trials);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t t = 0; t < count; ++t)
      results[t] = run_trial(n, seed, static_cast<std::size_t>(t), tol);
  } else {
    for (std::ptrdiff_t t = 0; t < count; ++t) results[t] = run_trial(n, seed, static_cast<std::size_t>(t), tol);
  }

  Lemma1Report rep;
  rep.n = n;
  rep.trials = trials;
  for (const auto& r : results) {
    rep.passes += r.passed ? 1 : 0;
    rep.resamples += r.resamples;
    rep.t1_zero_checks += r.t1_checked ? 1 : 0;
    rep.t1_zero_passes += r.t1_passed ? 1 : 0;
    if (r.residual >= rep.max_residual) {
      rep.max_residual = r.residual;
      rep.worst_witness = r.witness;
    }
  }
  return rep;
}

}  // namespace qsc
