#include "qsc/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace qsc {

// -- SelfDualMatrix ------------------------------------------------------------

SelfDualMatrix::SelfDualMatrix(std::size_t n, double scale) : n_(n), scale_(scale), upper_(n * (n + 1) / 2) {}

Quaternion SelfDualMatrix::raw(std::size_t j, std::size_t k) const {
  return j <= k ? upper_[index(j, k)] : conjugate(upper_[index(k, j)]);
}

void SelfDualMatrix::set_raw(std::size_t j, std::size_t k, const Quaternion& q) {
  if (j == k) {
    if (!q.is_real()) throw ShapeError("SelfDualMatrix: diagonal entries must be real quaternions");
    upper_[index(j, j)] = q;
  } else if (j < k) {
    upper_[index(j, k)] = q;
  } else {
    upper_[index(k, j)] = conjugate(q);
  }
}

bool SelfDualMatrix::valid() const {
  for (std::size_t j = 0; j < n_; ++j) {
    if (!upper_[index(j, j)].is_real()) return false;
    for (std::size_t k = j; k < n_; ++k) {
      const Quaternion& q = upper_[index(j, k)];
      if (!std::isfinite(q.a) || !std::isfinite(q.b) || !std::isfinite(q.c) || !std::isfinite(q.d)) return false;
    }
  }
  return std::isfinite(scale_);
}

double normalized_trace_gap(const SelfDualMatrix& a, const SelfDualMatrix& b) {
  if (a.n() != b.n()) throw ShapeError("normalized_trace_gap: dimension mismatch");
  const std::size_t n = a.n();
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    sum += norm_squared(a.at(j, j) - b.at(j, j));
    for (std::size_t k = j + 1; k < n; ++k) sum += 2.0 * norm_squared(a.at(j, k) - b.at(j, k));
  }
  // Each quaternion block contributes 2||q||^2 to the Frobenius norm of the embedding.
  return sum / static_cast<double>(n);
}

// -- descriptors ------------------------------------------------------------------

std::string to_string(LawKind k) {
  switch (k) {
    case LawKind::gse: return "gse";
    case LawKind::rademacher: return "rademacher";
    case LawKind::uniform: return "uniform";
    case LawKind::discrete: return "discrete";
  }
  return "?";
}

LawKind law_kind_from_string(const std::string& s) {
  if (s == "gse") return LawKind::gse;
  if (s == "rademacher") return LawKind::rademacher;
  if (s == "uniform") return LawKind::uniform;
  if (s == "discrete") return LawKind::discrete;
  throw SpecError("unknown distribution kind '" + s + "'");
}

double EtaSchedule::at(std::size_t n) const {
  if (kind == Kind::constant) return value;
  return std::pow(static_cast<double>(n), exponent);
}

// -- CoefficientLaw -------------------------------------------------------------

namespace {

constexpr double kCoefVariance = 0.25;

// E[Y I(Y >= c)] for Y ~ chi-square with 4 degrees of freedom.
double chi2_4_tail_mean(double c) {
  if (c <= 0.0) return 4.0;
  return std::exp(-0.5 * c) * (0.5 * c * c + 2.0 * c + 4.0);
}

// E[X^2 I(|X| >= t)] for X ~ N(0, 1).
double normal_tail_second_moment(double t) {
  if (t <= 0.0) return 1.0;
  const double phi = std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
  const double upper = 0.5 * std::erfc(t / std::numbers::sqrt2);
  return 2.0 * (t * phi + upper);
}

}  // namespace

CoefficientLaw::CoefficientLaw(const Distribution& d) : kind_(d.kind) {
  switch (d.kind) {
    case LawKind::gse:
      coef_bound_ = std::numeric_limits<double>::infinity();
      break;
    case LawKind::rademacher:
      values_ = {-0.5, 0.5};
      probs_ = {0.5, 0.5};
      coef_bound_ = 0.5;
      break;
    case LawKind::uniform: {
      if (!(d.lo < d.hi) || !std::isfinite(d.lo) || !std::isfinite(d.hi))
        throw SpecError("uniform law needs finite lo < hi");
      if (std::abs(d.lo + d.hi) > 1e-12 * (d.hi - d.lo)) throw SpecError("uniform law has nonzero mean");
      // Var U[-h, h] = h^2 / 3 = 1/4.
      uniform_half_width_ = std::sqrt(3.0 * kCoefVariance);
      coef_bound_ = uniform_half_width_;
      break;
    }
    case LawKind::discrete: {
      if (d.values.empty() || d.values.size() != d.probs.size())
        throw SpecError("discrete law needs matching non-empty values and probs");
      double total = 0.0, mean = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < d.values.size(); ++i) {
        if (!(d.probs[i] >= 0.0) || !std::isfinite(d.values[i])) throw SpecError("discrete law: bad value or prob");
        total += d.probs[i];
        mean += d.probs[i] * d.values[i];
        scale = std::max(scale, std::abs(d.values[i]));
      }
      if (std::abs(total - 1.0) > 1e-9) throw SpecError("discrete law: probabilities do not sum to 1");
      if (std::abs(mean) > 1e-12 * std::max(scale, 1.0)) {
        std::ostringstream msg;
        msg << "discrete law has nonzero mean " << mean;
        throw SpecError(msg.str());
      }
      double var = 0.0;
      for (std::size_t i = 0; i < d.values.size(); ++i) var += d.probs[i] * d.values[i] * d.values[i];
      if (!(var > 0.0)) throw SpecError("discrete law has zero variance and cannot be normalized");
      const double f = std::sqrt(kCoefVariance / var);
      for (std::size_t i = 0; i < d.values.size(); ++i) {
        values_.push_back(d.values[i] * f);
        probs_.push_back(d.probs[i]);
        coef_bound_ = std::max(coef_bound_, std::abs(values_.back()));
      }
      break;
    }
  }
}

double CoefficientLaw::draw(Engine& rng) const {
  switch (kind_) {
    case LawKind::gse: return std::normal_distribution<double>(0.0, std::sqrt(kCoefVariance))(rng);
    case LawKind::uniform:
      return std::uniform_real_distribution<double>(-uniform_half_width_, uniform_half_width_)(rng);
    case LawKind::rademacher:
    case LawKind::discrete: {
      double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      for (std::size_t i = 0; i + 1 < probs_.size(); ++i) {
        if (u < probs_[i]) return values_[i];
        u -= probs_[i];
      }
      return values_.back();
    }
  }
  return 0.0;
}

Quaternion CoefficientLaw::draw_offdiagonal(Engine& rng) const {
  Quaternion q;
  q.a = draw(rng);
  q.b = draw(rng);
  q.c = draw(rng);
  q.d = draw(rng);
  return q;
}

Quaternion CoefficientLaw::draw_diagonal(Engine& rng) const { return Quaternion(2.0 * draw(rng)); }

double CoefficientLaw::offdiagonal_bound() const { return 2.0 * coef_bound_; }

namespace {

// Calls f(x, p) for every off-diagonal outcome of a discrete coefficient law.
template <class F>
void enumerate_entries(const std::vector<double>& v, const std::vector<double>& p, F&& f) {
  const std::size_t k = v.size();
  for (std::size_t i0 = 0; i0 < k; ++i0)
    for (std::size_t i1 = 0; i1 < k; ++i1)
      for (std::size_t i2 = 0; i2 < k; ++i2)
        for (std::size_t i3 = 0; i3 < k; ++i3)
          f(Quaternion{v[i0], v[i1], v[i2], v[i3]}, p[i0] * p[i1] * p[i2] * p[i3]);
}

}  // namespace

TruncatedMoments CoefficientLaw::truncated_moments(double tau, std::size_t mc_samples, std::uint64_t mc_seed) const {
  TruncatedMoments m;
  const double tau2 = tau * tau;
  switch (kind_) {
    case LawKind::gse:
      // ||x||^2 = Y/4 with Y chi-square(4); symmetric law, so the mean vanishes.
      m.second_moment = 1.0 - 0.25 * chi2_4_tail_mean(4.0 * tau2);
      return m;
    case LawKind::rademacher:
    case LawKind::discrete:
      enumerate_entries(values_, probs_, [&](const Quaternion& x, double p) {
        if (norm_squared(x) <= tau2) {
          m.mean += x * p;
          m.second_moment += p * norm_squared(x);
        }
      });
      return m;
    case LawKind::uniform: {
      if (tau >= offdiagonal_bound()) {
        m.second_moment = 1.0;
        return m;
      }
      Engine rng(mc_seed);
      double acc = 0.0;
      for (std::size_t s = 0; s < mc_samples; ++s) {
        const double r2 = norm_squared(draw_offdiagonal(rng));
        if (r2 <= tau2) acc += r2;
      }
      m.second_moment = mc_samples > 0 ? acc / static_cast<double>(mc_samples) : 0.0;
      m.exact = false;
      return m;
    }
  }
  return m;
}

double CoefficientLaw::offdiagonal_tail(double tau, std::size_t mc_samples, std::uint64_t mc_seed) const {
  const double tau2 = tau * tau;
  switch (kind_) {
    case LawKind::gse: return 0.25 * chi2_4_tail_mean(4.0 * tau2);
    case LawKind::rademacher:
    case LawKind::discrete: {
      double s = 0.0;
      enumerate_entries(values_, probs_, [&](const Quaternion& x, double p) {
        if (norm_squared(x) >= tau2) s += p * norm_squared(x);
      });
      return s;
    }
    case LawKind::uniform: {
      if (tau > offdiagonal_bound()) return 0.0;
      Engine rng(mc_seed);
      double acc = 0.0;
      for (std::size_t s = 0; s < mc_samples; ++s) {
        const double r2 = norm_squared(draw_offdiagonal(rng));
        if (r2 >= tau2) acc += r2;
      }
      return mc_samples > 0 ? acc / static_cast<double>(mc_samples) : 0.0;
    }
  }
  return 0.0;
}

double CoefficientLaw::diagonal_tail(double tau, std::size_t, std::uint64_t) const {
  switch (kind_) {
    case LawKind::gse: return normal_tail_second_moment(tau);
    case LawKind::rademacher:
    case LawKind::discrete: {
      double s = 0.0;
      for (std::size_t i = 0; i < values_.size(); ++i) {
        const double x = 2.0 * values_[i];
        if (std::abs(x) >= tau) s += probs_[i] * x * x;
      }
      return s;
    }
    case LawKind::uniform: {
      // x uniform on [-b, b], b = sqrt(3): E x^2 I(|x| >= t) = (b^3 - t^3) / (3b).
      const double b = diagonal_bound();
      if (tau > b) return 0.0;
      const double t = std::max(tau, 0.0);
      return (b * b * b - t * t * t) / (3.0 * b);
    }
  }
  return 0.0;
}

CoefficientLaw validate(const EnsembleSpec& spec) {
  if (spec.n == 0) throw SpecError("ensemble dimension must be >= 1");
  CoefficientLaw law(spec.distribution);
  // Diagonal entries have E||x_jj||^2 = 1 for every built-in law.
  if (!(spec.diagonal_bound >= 1.0)) throw SpecError("diagonal second moment 1 exceeds the configured bound M");
  return law;
}

SelfDualMatrix sample_gse(std::size_t n, std::uint64_t seed, Exec exec) {
  EnsembleSpec spec;
  spec.n = n;
  spec.seed = seed;
  return sample_general(spec, exec);
}

SelfDualMatrix sample_general(const EnsembleSpec& spec, Exec exec) {
  const CoefficientLaw law = validate(spec);
  const std::size_t n = spec.n;
  SelfDualMatrix w(n, 1.0 / std::sqrt(static_cast<double>(n)));

  auto fill_row = [&](std::size_t j) {
    Engine rng(derive_seed(spec.seed, {stream::entries, j}));
    w.set_raw(j, j, law.draw_diagonal(rng));
    for (std::size_t k = j + 1; k < n; ++k) w.set_raw(j, k, law.draw_offdiagonal(rng));
  };

  const auto rows = static_cast<std::ptrdiff_t>(n);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t j = 0; j < rows; ++j) fill_row(static_cast<std::size_t>(j));
  } else {
    for (std::ptrdiff_t j = 0; j < rows; ++j) fill_row(static_cast<std::size_t>(j));
  }
  return w;
}

double lindeberg_statistic(const EnsembleSpec& spec, double eta, std::size_t mc_samples) {
  if (!(eta > 0.0)) throw DomainError("lindeberg_statistic: eta must be positive");
  const CoefficientLaw law = validate(spec);
  const double n = static_cast<double>(spec.n);
  const double tau = eta * std::sqrt(n);
  const std::uint64_t mc_seed = derive_seed(spec.seed, {stream::moments, spec.n});
  const double off = law.offdiagonal_tail(tau, mc_samples, mc_seed);
  const double diag = law.diagonal_tail(tau, mc_samples, mc_seed);
  return ((n * n - n) * off + n * diag) / (n * n);
}

}  // namespace qsc
