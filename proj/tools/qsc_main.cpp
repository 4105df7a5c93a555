// qsc: command-line driver for sampling, sweeps, structural checks and the
// reduction pipeline.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "qsc/errors.hpp"
#include "qsc/harness.hpp"
#include "qsc/json_io.hpp"
#include "qsc/parallel.hpp"

namespace {

using qsc::json;

struct EnsembleFlags {
  std::string config;
  std::size_t n = 50;
  std::string dist = "gse";
  std::optional<std::uint64_t> seed;

  void add(CLI::App* app) {
    app->add_option("--config", config, "Ensemble JSON (or an experiment config; its ensemble is used)");
    app->add_option("--n", n, "Matrix size in quaternion entries")->check(CLI::PositiveNumber);
    app->add_option("--dist", dist, "gse | rademacher | uniform (ignored with --config)");
    app->add_option("--seed", seed, "Seed override");
  }

  qsc::EnsembleSpec spec(const CLI::App* app) const {
    qsc::EnsembleSpec s;
    if (!config.empty()) {
      s = qsc::load_ensemble(config);
      if (app->count("--n") > 0) s.n = n;
    } else {
      s.n = n;
      s.distribution.kind = qsc::law_kind_from_string(dist);
    }
    if (seed) s.seed = *seed;
    qsc::validate(s);
    return s;
  }
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw qsc::IoError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw qsc::IoError("write to '" + path + "' failed");
}

int cmd_sample(const CLI::App* app, const EnsembleFlags& ef, const std::string& format, const std::string& out) {
  const auto spec = ef.spec(app);
  const auto w = qsc::sample_general(spec);
  const auto s = qsc::spectral_sample(w);
  if (format == "csv") {
    std::string text = "index,eigenvalue\n";
    for (std::size_t i = 0; i < s.eigenvalues_dedup.size(); ++i)
      text += std::to_string(i) + "," + qsc::format_double(s.eigenvalues_dedup[i]) + "\n";
    write_output(out, text);
  } else {
    json j = {{"ensemble", spec}, {"matrix", w}, {"spectrum", s}};
    write_output(out, j.dump(2) + "\n");
  }
  return 0;
}

int cmd_pipeline(const CLI::App* app, const EnsembleFlags& ef, bool measure, std::optional<double> eta,
                 const std::string& out) {
  const auto spec = ef.spec(app);
  const auto w = qsc::sample_general(spec);
  qsc::PipelineOptions po;
  po.measure = measure;
  po.eta_n = eta;
  const auto trace = qsc::run_pipeline(w, spec, po);
  write_output(out, json(trace).dump(2) + "\n");
  return trace.inequalities_hold() ? 0 : 1;
}

int cmd_sweep(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out,
              const std::string& format, bool timing) {
  auto config = qsc::load_config(config_path);
  if (seed) config.ensemble.seed = *seed;
  if (!out.empty()) config.output_path = out;
  if (!format.empty()) config.format = format;
  config.validate();

  const auto rows = qsc::run(config);
  if (config.output_path.empty() || config.output_path == "-") {
    write_output("", config.format == "csv" ? qsc::to_csv(rows, config.z_grid)
                                            : qsc::rows_to_json(rows, config.z_grid, timing).dump(2) + "\n");
  } else {
    qsc::EmitOptions eo;
    eo.include_timing = timing;
    for (const auto& f : qsc::emit(rows, config, config.format, config.output_path, eo))
      std::cerr << "wrote " << f << "\n";
  }
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.checks_ok ? 0 : 1;
  if (failed > 0) std::cerr << failed << " of " << rows.size() << " rows recorded check failures\n";
  return failed == 0 ? 0 : 1;
}

int cmd_verify(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out) {
  auto config = config_path.empty() ? qsc::default_verify_config() : qsc::load_config(config_path);
  if (seed) config.ensemble.seed = *seed;
  const auto report = qsc::verify(config);
  for (const auto& c : report.checks)
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  cases=" << c.cases
              << "  max_residual=" << qsc::format_double(c.max_residual) << "  " << c.detail << "\n";
  if (!out.empty()) write_output(out, json(report).dump(2) + "\n");
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quaternion self-dual random matrix toolkit"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "Worker threads (default: all)")->check(CLI::NonNegativeNumber);

  EnsembleFlags sample_flags, pipeline_flags;
  std::string out, format, config_path;
  std::optional<std::uint64_t> seed;
  bool measure = false, timing = false;
  std::optional<double> eta;

  auto* sample = app.add_subcommand("sample", "Draw one matrix and print it with its spectrum");
  sample_flags.add(sample);
  sample->add_option("--format", format, "json | csv (eigenvalues only)")->check(CLI::IsMember({"json", "csv"}));
  sample->add_option("--out", out, "Output file (default stdout)");

  auto* pipeline = app.add_subcommand("pipeline", "Run truncate/zero-diagonal/centralize/rescale with a trace");
  pipeline_flags.add(pipeline);
  pipeline->add_flag("--measure", measure, "Eigensolve every stage and check the distance bounds");
  pipeline->add_option("--eta", eta, "Truncation level eta_n (default from the ensemble schedule)");
  pipeline->add_option("--out", out, "Output file (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "Run an experiment config over its sizes and trials");
  sweep->add_option("--config", config_path, "Experiment config JSON")->required();
  sweep->add_option("--seed", seed, "Seed override");
  sweep->add_option("--out", out, "Output path override ('-' for stdout)");
  sweep->add_option("--format", format, "csv | json override")->check(CLI::IsMember({"json", "csv"}));
  sweep->add_flag("--timing", timing, "Include wall_time in JSON rows");

  auto* verify = app.add_subcommand("verify", "Run the structural and inequality checks");
  verify->add_option("--config", config_path, "Experiment config JSON (default: built-in small suite)");
  verify->add_option("--seed", seed, "Seed override");
  verify->add_option("--out", out, "Write the JSON report here");

  for (auto* sub : {sample, pipeline, sweep, verify})
    sub->add_option("--jobs", jobs, "Worker threads (default: all)")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);
  if (jobs > 0) qsc::par::set_threads(jobs);

  try {
    if (*sample) return cmd_sample(sample, sample_flags, format, out);
    if (*pipeline) return cmd_pipeline(pipeline, pipeline_flags, measure, eta, out);
    if (*sweep) return cmd_sweep(config_path, seed, out, format, timing);
    if (*verify) return cmd_verify(config_path, seed, out);
  } catch (const qsc::Error& e) {
    std::cerr << "qsc: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
