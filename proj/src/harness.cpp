#include "qsc/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "qsc/errors.hpp"
#include "qsc/json_io.hpp"
#include "qsc/parallel.hpp"

namespace qsc {

void ExperimentConfig::validate() const {
  if (sizes.empty()) throw ConfigError("config: sizes must be nonempty");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) throw ConfigError("config: sizes must be positive");
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw ConfigError("config: sizes must be strictly increasing");
  }
  if (trials_per_size == 0) throw ConfigError("config: trials_per_size must be positive");
  if (z_grid.empty()) throw ConfigError("config: z_grid must be nonempty");
  for (const cplx& z : z_grid)
    if (!(z.imag() > 0.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw ConfigError("config: every z in z_grid needs finite parts and Im z > 0");
  if (format != "csv" && format != "json") throw ConfigError("config: format must be csv or json");
  if (!(tol >= 0.0) || !(pair_tol >= 0.0)) throw ConfigError("config: tolerances must be nonnegative");
  if (checks.lemma1 && (lemma1_max_n == 0 || lemma1_trials == 0))
    throw ConfigError("config: lemma1 needs max_n >= 1 and trials >= 1");
  try {
    EnsembleSpec spec = ensemble;
    spec.n = sizes.front();
    qsc::validate(spec);
  } catch (const SpecError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

std::uint64_t trial_seed(std::uint64_t base, std::size_t n, std::size_t trial) {
  return derive_seed(base, {stream::trial, n, trial});
}

namespace {

struct Task {
  std::size_t n;
  std::size_t trial;
};

std::vector<Task> tasks_of(const ExperimentConfig& config) {
  std::vector<Task> tasks;
  for (std::size_t n : config.sizes)
    for (std::size_t t = 0; t < config.trials_per_size; ++t) tasks.push_back({n, t});
  return tasks;
}

EnsembleSpec spec_for(const ExperimentConfig& config, std::size_t n, std::uint64_t seed) {
  EnsembleSpec spec = config.ensemble;
  spec.n = n;
  spec.seed = seed;
  return spec;
}

// Trials run on the outer loop when there are enough of them to occupy the
// pool; otherwise each trial gets the parallel kernels. Both paths produce
// identical numbers.
template <class F>
void for_each_task(std::size_t count, Exec exec, F&& body) {
  const auto c = static_cast<std::ptrdiff_t>(count);
  const bool outer = exec == Exec::parallel && par::max_threads() > 1 &&
                     count >= static_cast<std::size_t>(par::max_threads());
  if (outer) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < c; ++i) body(static_cast<std::size_t>(i), Exec::serial);
  } else {
    for (std::ptrdiff_t i = 0; i < c; ++i) body(static_cast<std::size_t>(i), exec);
  }
}

std::string z_label(cplx z) {
  std::ostringstream s;
  s << "z=" << format_double(z.real()) << (z.imag() < 0 ? "" : "+") << format_double(z.imag()) << "i";
  return s.str();
}

ConvergenceRow run_trial(const ExperimentConfig& config, const Task& task, Exec exec) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  const auto start = std::chrono::steady_clock::now();
  ConvergenceRow row;
  row.n = task.n;
  row.trial = task.trial;
  row.seed = trial_seed(config.ensemble.seed, task.n, task.trial);
  row.kolmogorov = row.levy = row.pairing_residual = nan;
  row.stieltjes_errors.assign(config.z_grid.size(), nan);
  auto fail = [&](std::string what) {
    row.checks_ok = false;
    row.failures.push_back(std::move(what));
  };

  try {
    const EnsembleSpec spec = spec_for(config, task.n, row.seed);
    SelfDualMatrix w = sample_general(spec, exec);

    if (config.pipeline) {
      PipelineOptions po;
      po.measure = config.checks.levy_bounds || config.checks.rank_bounds;
      po.mc_samples = config.mc_samples;
      PipelineTrace trace = run_pipeline(w, spec, po);
      PipelineSummary sum;
      sum.eta_n = trace.eta_n;
      for (const auto& st : trace.stages) {
        sum.truncated_count += st.truncated_count;
        sum.replacements += st.variance_floor_replacements;
        if (config.checks.levy_bounds && st.levy_measured &&
            !(*st.levy_measured <= std::cbrt(st.levy_cube_bound) + kLevyTolerance))
          fail("levy_bounds: stage " + st.stage);
        if (config.checks.rank_bounds && st.sup_measured && !(*st.sup_measured <= st.rank_bound + 1e-12))
          fail("rank_bounds: stage " + st.stage);
      }
      sum.inequalities_hold = trace.inequalities_hold();
      row.pipeline = sum;
      w = std::move(trace.final_matrix);
    }

    std::vector<double> full = hermitian_eigenvalues(embed(w));
    std::sort(full.begin(), full.end());
    Dedup d = dedup_pairs(full, std::numeric_limits<double>::infinity());
    row.pairing_residual = d.pairing_residual;
    if (!(d.pairing_residual <= config.pair_tol)) fail("pairing: residual " + format_double(d.pairing_residual));

    SpectralSample sample;
    sample.n = task.n;
    sample.eigenvalues_full = std::move(full);
    sample.eigenvalues_dedup = d.values;
    sample.pairing_residual = d.pairing_residual;

    const ESD esd(std::move(d.values));
    row.kolmogorov = kolmogorov_distance(esd);
    row.levy = levy_distance(esd, Cdf::semicircle());
    for (std::size_t i = 0; i < config.z_grid.size(); ++i) {
      const cplx z = config.z_grid[i];
      row.stieltjes_errors[i] = std::abs(empirical_stieltjes(sample, z).value - semicircle_stieltjes(z));
    }

    if (config.checks.resolvent_structure) {
      for (const cplx& z : config.z_grid) {
        const auto r = resolvent_structure_check(w, z, config.tol);
        if (!r.passed) fail("resolvent_structure: " + z_label(z) + " residual " + format_double(r.max_residual));
      }
    }
    if (config.checks.trace_minor) {
      for (const cplx& z : config.z_grid) {
        const auto r = trace_minor_check(w, z, exec);
        if (!r.passed) fail("trace_minor: " + z_label(z) + " max difference " + format_double(r.max_difference));
      }
    }
    if (config.histogram_bins > 0) row.histogram = histogram(sample.eigenvalues_dedup, config.histogram_bins);
  } catch (const Error& e) {
    fail(std::string("error: ") + e.what());
  }

  row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

}  // namespace

std::vector<ConvergenceRow> run(const ExperimentConfig& config, Exec exec) {
  config.validate();
  const auto tasks = tasks_of(config);
  std::vector<ConvergenceRow> rows(tasks.size());
  for_each_task(tasks.size(), exec, [&](std::size_t i, Exec inner) { rows[i] = run_trial(config, tasks[i], inner); });
  // Already in (n, trial) order by construction; sort anyway so the contract
  // does not hinge on the task layout.
  std::stable_sort(rows.begin(), rows.end(), [](const ConvergenceRow& a, const ConvergenceRow& b) {
    return a.n != b.n ? a.n < b.n : a.trial < b.trial;
  });
  return rows;
}

// -- verify ------------------------------------------------------------------------

bool CheckReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

namespace {

struct DrawOutcome {
  CheckResult resolvent{"resolvent_structure"};
  CheckResult trace_minor{"trace_minor"};
  CheckResult levy{"levy_bounds"};
  CheckResult rank{"rank_bounds"};
};

void merge(CheckResult& into, const CheckResult& from) {
  into.cases += from.cases;
  into.max_residual = std::max(into.max_residual, from.max_residual);
  if (!from.passed) {
    into.passed = false;
    if (into.detail.empty()) into.detail = from.detail;
  }
}

void record(CheckResult& c, bool passed, double residual, const std::string& where) {
  ++c.cases;
  if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
  c.max_residual = std::max(c.max_residual, residual);
  if (!passed) {
    c.passed = false;
    if (c.detail.empty()) c.detail = "first failure at " + where + ", residual " + format_double(residual);
  }
}

DrawOutcome verify_draw(const ExperimentConfig& config, const Task& task, Exec exec) {
  DrawOutcome out;
  const std::uint64_t seed = trial_seed(config.ensemble.seed, task.n, task.trial);
  const std::string where = "n=" + std::to_string(task.n) + " trial=" + std::to_string(task.trial);
  const auto& ck = config.checks;
  const double inf = std::numeric_limits<double>::infinity();

  SelfDualMatrix w;
  try {
    w = sample_general(spec_for(config, task.n, seed), exec);
  } catch (const Error& e) {
    for (CheckResult* c : {&out.resolvent, &out.trace_minor, &out.levy, &out.rank})
      record(*c, false, inf, where + " (" + e.what() + ")");
    return out;
  }

  if (ck.resolvent_structure) {
    for (const cplx& z : config.z_grid) {
      const auto r = resolvent_structure_check(w, z, config.tol);
      record(out.resolvent, r.passed, r.max_residual, where + " " + z_label(z));
    }
  }
  if (ck.trace_minor) {
    for (const cplx& z : config.z_grid) {
      try {
        const auto r = trace_minor_check(w, z, exec);
        record(out.trace_minor, r.passed, r.max_difference / r.bound, where + " " + z_label(z));
      } catch (const Error& e) {
        record(out.trace_minor, false, inf, where + " " + z_label(z) + " (" + e.what() + ")");
      }
    }
  }
  if (ck.levy_bounds || ck.rank_bounds) {
    try {
      PipelineOptions po;
      po.measure = true;
      po.mc_samples = config.mc_samples;
      const auto trace = run_pipeline(w, spec_for(config, task.n, seed), po);
      for (const auto& st : trace.stages) {
        if (ck.levy_bounds && st.levy_measured) {
          const double bound = std::cbrt(st.levy_cube_bound) + kLevyTolerance;
          // Residual: how much of the allowed band the measured distance uses.
          record(out.levy, *st.levy_measured <= bound, *st.levy_measured / bound, where + " stage " + st.stage);
        }
        if (ck.rank_bounds && st.sup_measured) {
          const double bound = st.rank_bound + 1e-12;
          record(out.rank, *st.sup_measured <= bound, *st.sup_measured / bound, where + " stage " + st.stage);
        }
      }
    } catch (const Error& e) {
      if (ck.levy_bounds) record(out.levy, false, inf, where + " (" + e.what() + ")");
      if (ck.rank_bounds) record(out.rank, false, inf, where + " (" + e.what() + ")");
    }
  }
  return out;
}

}  // namespace

CheckReport verify(const ExperimentConfig& config, Exec exec) {
  config.validate();
  CheckReport report;
  const auto& ck = config.checks;

  if (ck.lemma1) {
    CheckResult c{"lemma1"};
    std::size_t passes = 0, total = 0, t1_checks = 0, t1_passes = 0;
    for (std::size_t n = 1; n <= config.lemma1_max_n; ++n) {
      const auto rep = verify_lemma1(n, config.lemma1_trials, derive_seed(config.ensemble.seed, {stream::structure, n}),
                                     config.tol, exec);
      passes += rep.passes;
      total += rep.trials;
      t1_checks += rep.t1_zero_checks;
      t1_passes += rep.t1_zero_passes;
      c.cases += rep.trials + rep.t1_zero_checks;
      c.max_residual = std::max(c.max_residual, rep.max_residual);
      if (!rep.all_passed() && c.passed) {
        c.passed = false;
        std::ostringstream s;
        s << "first failure at block dim " << n;
        if (rep.worst_witness)
          s << ", witness block (" << rep.worst_witness->j << "," << rep.worst_witness->k << ") residual "
            << format_double(rep.worst_witness->residual);
        c.detail = s.str();
      }
    }
    std::ostringstream s;
    s << passes << "/" << total << " inverses Type-I, t1=0 " << t1_passes << "/" << t1_checks;
    c.detail = c.detail.empty() ? s.str() : s.str() + "; " + c.detail;
    report.checks.push_back(std::move(c));
  }

  if (ck.resolvent_structure || ck.trace_minor || ck.levy_bounds || ck.rank_bounds) {
    const auto tasks = tasks_of(config);
    std::vector<DrawOutcome> outcomes(tasks.size());
    for_each_task(tasks.size(), exec, [&](std::size_t i, Exec inner) { outcomes[i] = verify_draw(config, tasks[i], inner); });
    DrawOutcome total;
    for (const auto& o : outcomes) {
      merge(total.resolvent, o.resolvent);
      merge(total.trace_minor, o.trace_minor);
      merge(total.levy, o.levy);
      merge(total.rank, o.rank);
    }
    if (ck.resolvent_structure) report.checks.push_back(total.resolvent);
    if (ck.trace_minor) report.checks.push_back(total.trace_minor);
    if (ck.levy_bounds) report.checks.push_back(total.levy);
    if (ck.rank_bounds) report.checks.push_back(total.rank);
  }
  return report;
}

ExperimentConfig default_verify_config() {
  ExperimentConfig c;
  c.sizes = {4, 12, 24};
  c.trials_per_size = 2;
  c.checks = CheckSet::all();
  c.lemma1_trials = 125;
  c.mc_samples = 200'000;
  return c;
}

// -- emission ----------------------------------------------------------------------

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string stieltjes_column(cplx z) { return "serr_re" + format_double(z.real()) + "_im" + format_double(z.imag()); }

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_csv(const std::vector<ConvergenceRow>& rows, const std::vector<cplx>& z_grid) {
  std::ostringstream s;
  s << "n,seed,kolmogorov,levy";
  for (const cplx& z : z_grid) s << ',' << stieltjes_column(z);
  s << ",trial,pairing_residual,eta_n,truncated_count,replacements,checks_ok,failures\n";
  for (const auto& r : rows) {
    s << r.n << ',' << r.seed << ',' << format_double(r.kolmogorov) << ',' << format_double(r.levy);
    for (std::size_t i = 0; i < z_grid.size(); ++i)
      s << ',' << (i < r.stieltjes_errors.size() ? format_double(r.stieltjes_errors[i]) : "");
    s << ',' << r.trial << ',' << format_double(r.pairing_residual) << ',';
    if (r.pipeline) s << format_double(r.pipeline->eta_n) << ',' << r.pipeline->truncated_count << ',' << r.pipeline->replacements;
    else s << ",,";
    std::string failures;
    for (const auto& f : r.failures) failures += (failures.empty() ? "" : "; ") + f;
    s << ',' << (r.checks_ok ? 1 : 0) << ',' << csv_quote(failures) << '\n';
  }
  return s.str();
}

std::string histogram_csv(const Histogram& h) {
  std::ostringstream s;
  s << "bin_lo,bin_hi,count,semicircle_density\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b)
    s << format_double(h.edges[b]) << ',' << format_double(h.edges[b + 1]) << ',' << h.counts[b] << ','
      << format_double(h.overlay[b]) << '\n';
  return s.str();
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed");
}

}  // namespace

std::vector<std::string> emit(const std::vector<ConvergenceRow>& rows, const ExperimentConfig& config,
                              const std::string& format, const std::string& path, const EmitOptions& opts) {
  if (rows.empty()) throw IoError("emit: no rows");
  if (format != "csv" && format != "json") throw ConfigError("emit: format must be csv or json");
  std::vector<std::string> written;
  write_file(path, format == "csv" ? to_csv(rows, config.z_grid)
                                   : rows_to_json(rows, config.z_grid, opts.include_timing).dump(2) + "\n");
  written.push_back(path);

  if (opts.histograms) {
    const std::filesystem::path p(path);
    for (const auto& r : rows) {
      if (!r.histogram) continue;
      auto hp = p.parent_path() / (p.stem().string() + "_hist_n" + std::to_string(r.n) + "_t" +
                                   std::to_string(r.trial) + ".csv");
      write_file(hp.string(), histogram_csv(*r.histogram));
      written.push_back(hp.string());
    }
  }
  return written;
}

}  // namespace qsc
