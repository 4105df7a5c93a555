#include "qsc/pipeline.hpp"

#include <cmath>

#include "qsc/eigen.hpp"
#include "qsc/spectra.hpp"

namespace qsc {

bool PipelineTrace::inequalities_hold() const {
  for (const auto& s : stages)
    if (!s.inequality_holds) return false;
  return true;
}

std::pair<SelfDualMatrix, StageRecord> truncate(const SelfDualMatrix& w, double eta_n) {
  if (!(eta_n > 0.0)) throw DomainError("truncate: eta_n must be positive");
  const std::size_t n = w.n();
  const double tau = eta_n * std::sqrt(static_cast<double>(n));
  const double tau2 = tau * tau;

  SelfDualMatrix out = w;
  StageRecord rec;
  rec.stage = "truncate";
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j; k < n; ++k) {
      if (norm_squared(w.raw(j, k)) > tau2) {
        out.set_raw(j, k, Quaternion{});
        ++rec.truncated_count;
      }
    }
  }
  rec.rank_bound = n > 0 ? static_cast<double>(rec.truncated_count) / static_cast<double>(n) : 0.0;
  rec.levy_cube_bound = normalized_trace_gap(w, out);
  return {std::move(out), rec};
}

std::pair<SelfDualMatrix, StageRecord> zero_diagonal(const SelfDualMatrix& w) {
  SelfDualMatrix out = w;
  for (std::size_t j = 0; j < w.n(); ++j) out.set_raw(j, j, Quaternion{});
  StageRecord rec;
  rec.stage = "zero_diagonal";
  rec.levy_cube_bound = normalized_trace_gap(w, out);
  return {std::move(out), rec};
}

std::pair<SelfDualMatrix, StageRecord> centralize(const SelfDualMatrix& w, const TruncatedMoments& moments) {
  SelfDualMatrix out = w;
  const Quaternion mu = moments.mean;
  if (!(mu == Quaternion{})) {
    for (std::size_t j = 0; j < w.n(); ++j)
      for (std::size_t k = j + 1; k < w.n(); ++k) out.set_raw(j, k, w.raw(j, k) - mu);
  }
  StageRecord rec;
  rec.stage = "centralize";
  rec.centering_shift_norm = norm(mu);
  rec.levy_cube_bound = normalized_trace_gap(w, out);
  return {std::move(out), rec};
}

TruncatedMoments pipeline_moments(const EnsembleSpec& spec, double eta_n, std::size_t mc_samples) {
  const CoefficientLaw law = validate(spec);
  const double tau = eta_n * std::sqrt(static_cast<double>(spec.n));
  return law.truncated_moments(tau, mc_samples, derive_seed(spec.seed, {stream::moments, spec.n, 1}));
}

std::pair<SelfDualMatrix, StageRecord> centralize(const SelfDualMatrix& w, const EnsembleSpec& spec, double eta_n) {
  return centralize(w, pipeline_moments(spec, eta_n));
}

std::pair<SelfDualMatrix, StageRecord> rescale(const SelfDualMatrix& w, const TruncatedMoments& moments,
                                               std::uint64_t seed) {
  const std::size_t n = w.n();
  const double sigma2 = moments.variance();
  SelfDualMatrix out = w;
  StageRecord rec;
  rec.stage = "rescale";
  rec.truncated_variance = sigma2;

  if (sigma2 < 0.5) {
    std::bernoulli_distribution coin(0.5);
    for (std::size_t j = 0; j < n; ++j) {
      Engine rng(derive_seed(seed, {stream::replacement, j}));
      for (std::size_t k = j + 1; k < n; ++k) {
        out.set_raw(j, k, Quaternion(coin(rng) ? 1.0 : -1.0));
        ++rec.variance_floor_replacements;
      }
    }
  } else {
    const double inv_sigma = 1.0 / std::sqrt(sigma2);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) out.set_raw(j, k, w.raw(j, k) * inv_sigma);
  }
  for (std::size_t j = 0; j < n; ++j) out.set_raw(j, j, Quaternion{});
  rec.levy_cube_bound = normalized_trace_gap(w, out);
  return {std::move(out), rec};
}

std::pair<SelfDualMatrix, StageRecord> rescale(const SelfDualMatrix& w, const EnsembleSpec& spec, double eta_n) {
  return rescale(w, pipeline_moments(spec, eta_n), spec.seed);
}

namespace {

void require_valid(const SelfDualMatrix& w, const std::string& stage) {
  if (!w.valid()) throw Error("pipeline stage '" + stage + "' produced an invalid self-dual matrix");
}

}  // namespace

PipelineTrace run_pipeline(const SelfDualMatrix& w, const EnsembleSpec& spec, const PipelineOptions& opts) {
  require_valid(w, "input");
  PipelineTrace trace;
  trace.n = w.n();
  trace.eta_n = opts.eta_n.value_or(spec.eta.at(w.n()));

  EnsembleSpec sized = spec;
  sized.n = w.n();
  const TruncatedMoments moments = pipeline_moments(sized, trace.eta_n, opts.mc_samples);
  trace.moments_exact = moments.exact;

  std::vector<SelfDualMatrix> mats{w};
  auto push = [&](std::pair<SelfDualMatrix, StageRecord> r) {
    require_valid(r.first, r.second.stage);
    mats.push_back(std::move(r.first));
    trace.stages.push_back(std::move(r.second));
  };
  push(truncate(mats.back(), trace.eta_n));
  push(zero_diagonal(mats.back()));
  push(centralize(mats.back(), moments));
  push(rescale(mats.back(), moments, spec.seed));

  if (opts.measure) {
    std::vector<CMatrix> dense;
    for (const auto& m : mats) dense.push_back(embed(m).dense());
    const auto eig = eigenvalues_batch(dense);
    for (std::size_t s = 0; s < trace.stages.size(); ++s) {
      StageRecord& rec = trace.stages[s];
      const ESD before(eig[s]);
      const ESD after(eig[s + 1]);
      rec.levy_measured = levy_distance(before, after);
      rec.inequality_holds = *rec.levy_measured <= std::cbrt(rec.levy_cube_bound) + kLevyTolerance;
      if (rec.stage == "truncate") {
        rec.sup_measured = sup_distance(before, after);
        rec.inequality_holds = rec.inequality_holds && *rec.sup_measured <= rec.rank_bound + 1e-12;
      }
    }
  }

  trace.final_matrix = std::move(mats.back());
  return trace;
}

}  // namespace qsc
