#include "qsc/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qsc/eigen.hpp"

namespace qsc {

BlockMatrix embed(const SelfDualMatrix& w) {
  BlockMatrix m(w.n());
  for (std::size_t j = 0; j < w.n(); ++j)
    for (std::size_t k = 0; k < w.n(); ++k) m.set_block(j, k, to_complex(w.at(j, k)));
  return m;
}

std::vector<double> hermitian_eigenvalues(const BlockMatrix& m) {
  const double scale = m.dense().max_abs();
  const double res = hermitian_residual(m.dense());
  if (!(res <= 1e-10 * scale)) {
    std::ostringstream msg;
    msg << "hermitian_eigenvalues: Hermitian residual " << res << " exceeds 1e-10 * " << scale;
    throw NotHermitian(msg.str());
  }
  return hermitian_eigenvalues_dense(m.dense());
}

Dedup dedup_pairs(std::span<const double> sorted, double tol) {
  if (sorted.size() % 2 != 0) throw PairingError("dedup_pairs: odd number of eigenvalues");
  Dedup out;
  double radius = 1.0;
  for (double v : sorted) radius = std::max(radius, std::abs(v));
  double gap = 0.0;
  out.values.reserve(sorted.size() / 2);
  for (std::size_t i = 0; i < sorted.size(); i += 2) {
    out.values.push_back(sorted[i]);
    gap = std::max(gap, std::abs(sorted[i + 1] - sorted[i]));
  }
  out.pairing_residual = gap / radius;
  if (!(out.pairing_residual <= tol)) {
    std::ostringstream msg;
    msg << "dedup_pairs: pairing residual " << out.pairing_residual << " exceeds " << tol;
    throw PairingError(msg.str());
  }
  return out;
}

SpectralSample spectral_sample_from_eigenvalues(std::vector<double> full, double pair_tol) {
  std::sort(full.begin(), full.end());
  SpectralSample s;
  s.n = full.size() / 2;
  Dedup d = dedup_pairs(full, pair_tol);
  s.eigenvalues_full = std::move(full);
  s.eigenvalues_dedup = std::move(d.values);
  s.pairing_residual = d.pairing_residual;
  return s;
}

SpectralSample spectral_sample(const SelfDualMatrix& w, double pair_tol) {
  return spectral_sample_from_eigenvalues(hermitian_eigenvalues(embed(w)), pair_tol);
}

// -- distribution functions --------------------------------------------------------

ESD::ESD(std::vector<double> points) : points_(std::move(points)) { std::sort(points_.begin(), points_.end()); }

double ESD::operator()(double x) const {
  if (points_.empty()) return 0.0;
  const auto it = std::upper_bound(points_.begin(), points_.end(), x);
  return static_cast<double>(it - points_.begin()) / static_cast<double>(points_.size());
}

double ESD::left(double x) const {
  if (points_.empty()) return 0.0;
  const auto it = std::lower_bound(points_.begin(), points_.end(), x);
  return static_cast<double>(it - points_.begin()) / static_cast<double>(points_.size());
}

Cdf Cdf::of(const ESD& e) {
  return {[&e](double x) { return e(x); }, [&e](double x) { return e.left(x); }};
}

Cdf Cdf::semicircle(double sigma) {
  auto f = [sigma](double x) { return semicircle_cdf(x, sigma); };
  return {f, f};
}

double semicircle_pdf(double x, double sigma) {
  const double r2 = 4.0 * sigma * sigma - x * x;
  if (r2 <= 0.0) return 0.0;
  return std::sqrt(r2) / (2.0 * std::numbers::pi * sigma * sigma);
}

double semicircle_cdf(double x, double sigma) {
  const double edge = 2.0 * sigma;
  if (x <= -edge) return 0.0;
  if (x >= edge) return 1.0;
  const double s2 = sigma * sigma;
  return 0.5 + x * std::sqrt(4.0 * s2 - x * x) / (4.0 * std::numbers::pi * s2) +
         std::asin(x / edge) / std::numbers::pi;
}

cplx semicircle_stieltjes(cplx z) {
  if (!(z.imag() > 0.0)) throw DomainError("semicircle_stieltjes: need Im z > 0");
  const cplx r = std::sqrt(z * z - 4.0);
  const cplx s1 = -0.5 * (z - r);
  const cplx s2 = -0.5 * (z + r);
  return s1.imag() > 0.0 ? s1 : s2;
}

StieltjesPoint empirical_stieltjes(const SpectralSample& sample, cplx z) {
  if (!(z.imag() > 0.0)) throw DomainError("empirical_stieltjes: need Im z > 0");
  cplx sum{};
  for (double lambda : sample.eigenvalues_full) sum += 1.0 / (lambda - z);
  const double count = static_cast<double>(sample.eigenvalues_full.size());
  return {z, count > 0 ? sum / count : cplx{}};
}

double kolmogorov_distance(const ESD& e, double sigma) {
  double d = 0.0;
  for (double s : e.points()) {
    const double g = semicircle_cdf(s, sigma);
    d = std::max({d, std::abs(e(s) - g), std::abs(e.left(s) - g)});
  }
  return d;
}

double sup_distance(const ESD& f, const ESD& g) {
  double d = 0.0;
  for (double s : f.points()) d = std::max(d, std::abs(f(s) - g(s)));
  for (double s : g.points()) d = std::max(d, std::abs(f(s) - g(s)));
  return d;
}

namespace {

// Exact check of the Levy band at width eps. F is a step function, so both
// sides of the band only need testing at F's jumps.
bool within_levy_band(const ESD& f, const Cdf& g, double eps) {
  for (double s : f.points()) {
    if (g.left(s - eps) - eps > f.left(s)) return false;
    if (f(s) > g.right(s + eps) + eps) return false;
  }
  return true;
}

}  // namespace

double levy_distance(const ESD& f, const Cdf& g, double tol) {
  if (within_levy_band(f, g, 0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (within_levy_band(f, g, mid) ? hi : lo) = mid;
  }
  return hi;
}

double levy_distance(const ESD& f, const ESD& g, double tol) { return levy_distance(f, Cdf::of(g), tol); }

// -- resolvents ----------------------------------------------------------------------

BlockMatrix resolvent(const BlockMatrix& m, cplx z, Exec exec) {
  return BlockMatrix(kernels::invert(kernels::shift_diagonal(m.dense(), z), exec));
}

ResolventStructureReport resolvent_structure_check(const SelfDualMatrix& w, cplx z, double tol) {
  if (!(z.imag() > 0.0)) throw DomainError("resolvent_structure_check: need Im z > 0");
  ResolventStructureReport r;
  try {
    r.structure = classify(resolvent(embed(w), z), tol);
    r.diagonal_type_t = r.structure.diagonal_type_t;
    r.max_residual = r.structure.type_i_residual;
    r.passed = r.structure.type_i && r.structure.diagonal_type_t;
  } catch (const Error&) {
    r.passed = false;
    r.max_residual = std::numeric_limits<double>::infinity();
  }
  return r;
}

SelfDualMatrix remove_index(const SelfDualMatrix& w, std::size_t k) {
  const std::size_t n = w.n();
  SelfDualMatrix out(n - 1, w.scale());
  for (std::size_t j = 0, jj = 0; j < n; ++j) {
    if (j == k) continue;
    for (std::size_t l = j, ll = jj; l < n; ++l) {
      if (l == k) continue;
      out.set_raw(jj, ll, w.raw(j, l));
      ++ll;
    }
    ++jj;
  }
  return out;
}

namespace {

cplx resolvent_trace(const SelfDualMatrix& w, cplx z) {
  if (w.n() == 0) return 0.0;
  return resolvent(embed(w), z, Exec::serial).dense().trace();
}

}  // namespace

TraceMinorReport trace_minor_check(const SelfDualMatrix& w, cplx z, Exec exec) {
  if (!(z.imag() > 0.0)) throw DomainError("trace_minor_check: need Im z > 0");
  TraceMinorReport r;
  const std::size_t n = w.n();
  r.bound = 2.0 / z.imag();
  r.differences.resize(n);
  const cplx full = resolvent_trace(w, z);

  const auto count = static_cast<std::ptrdiff_t>(n);
  auto one = [&](std::ptrdiff_t k) {
    r.differences[k] = std::abs(full - resolvent_trace(remove_index(w, static_cast<std::size_t>(k)), z));
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t k = 0; k < count; ++k) one(k);
  } else {
    for (std::ptrdiff_t k = 0; k < count; ++k) one(k);
  }

  for (double d : r.differences) r.max_difference = std::max(r.max_difference, d);
  // Rounding slack: the traces carry O(n eps / Im z) error.
  r.passed = r.max_difference <= r.bound * (1.0 + 1e-10);
  return r;
}

Histogram histogram(std::span<const double> values, std::size_t bins, double lo, double hi, double sigma) {
  if (bins == 0 || !(hi > lo)) throw DomainError("histogram: need bins >= 1 and hi > lo");
  Histogram h;
  h.counts.assign(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(lo + width * static_cast<double>(b));
  for (std::size_t b = 0; b < bins; ++b) h.overlay.push_back(semicircle_pdf(lo + width * (b + 0.5), sigma));
  for (double v : values) {
    const double pos = std::floor((v - lo) / width);
    const auto idx = static_cast<std::ptrdiff_t>(std::clamp(pos, 0.0, static_cast<double>(bins - 1)));
    ++h.counts[static_cast<std::size_t>(idx)];
  }
  return h;
}

}  // namespace qsc
