#include "qsc/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "qsc/errors.hpp"

namespace qsc {

namespace {

// nlohmann writes NaN / inf as null; read it back as NaN.
double get_double(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> ok(known.begin(), known.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object()) return {j.value("re", 0.0), j.value("im", 0.0)};
  throw ConfigError("complex number must be [re, im] or {\"re\": .., \"im\": ..}");
}

}  // namespace

void to_json(json& j, const Quaternion& q) { j = json::array({q.a, q.b, q.c, q.d}); }

void from_json(const json& j, Quaternion& q) {
  if (!j.is_array() || j.size() != 4) throw ConfigError("quaternion must be [a, b, c, d]");
  q = Quaternion{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

void to_json(json& j, const Distribution& d) {
  j = json{{"kind", to_string(d.kind)}};
  if (d.kind == LawKind::uniform) j["params"] = {{"lo", d.lo}, {"hi", d.hi}};
  if (d.kind == LawKind::discrete) j["params"] = {{"values", d.values}, {"probs", d.probs}};
}

void from_json(const json& j, Distribution& d) {
  reject_unknown(j, {"kind", "params"}, "distribution");
  d = Distribution{};
  d.kind = law_kind_from_string(j.at("kind").get<std::string>());
  const json params = j.value("params", json::object());
  if (d.kind == LawKind::uniform) {
    reject_unknown(params, {"lo", "hi"}, "distribution.params");
    d.lo = params.value("lo", -1.0);
    d.hi = params.value("hi", 1.0);
  } else if (d.kind == LawKind::discrete) {
    reject_unknown(params, {"values", "probs"}, "distribution.params");
    d.values = params.at("values").get<std::vector<double>>();
    d.probs = params.at("probs").get<std::vector<double>>();
  } else if (!params.empty()) {
    throw ConfigError("distribution: '" + to_string(d.kind) + "' takes no params");
  }
}

void to_json(json& j, const EtaSchedule& e) {
  if (e.kind == EtaSchedule::Kind::power) j = {{"kind", "power"}, {"exponent", e.exponent}};
  else j = {{"kind", "constant"}, {"value", e.value}};
}

void from_json(const json& j, EtaSchedule& e) {
  reject_unknown(j, {"kind", "exponent", "value"}, "eta");
  e = EtaSchedule{};
  const std::string kind = j.value("kind", "power");
  if (kind == "power") {
    e.kind = EtaSchedule::Kind::power;
    e.exponent = j.value("exponent", -0.125);
  } else if (kind == "constant") {
    e.kind = EtaSchedule::Kind::constant;
    e.value = j.at("value").get<double>();
  } else {
    throw ConfigError("eta: kind must be power or constant");
  }
}

void to_json(json& j, const EnsembleSpec& s) {
  j = {{"n", s.n}, {"distribution", s.distribution}, {"diagonal_bound", s.diagonal_bound}, {"seed", s.seed},
       {"eta", s.eta}};
}

void from_json(const json& j, EnsembleSpec& s) {
  reject_unknown(j, {"n", "distribution", "diagonal_bound", "seed", "eta"}, "ensemble");
  s = EnsembleSpec{};
  s.n = j.value("n", std::size_t{1});
  if (j.contains("distribution")) s.distribution = j.at("distribution").get<Distribution>();
  s.diagonal_bound = j.value("diagonal_bound", 4.0);
  s.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("eta")) s.eta = j.at("eta").get<EtaSchedule>();
}

void to_json(json& j, const SelfDualMatrix& w) {
  json upper = json::array();
  for (std::size_t r = 0; r < w.n(); ++r)
    for (std::size_t c = r; c < w.n(); ++c) upper.push_back(w.raw(r, c));
  j = {{"n", w.n()}, {"scale", w.scale()}, {"upper_raw", std::move(upper)}};
}

void to_json(json& j, const Witness& w) { j = {{"j", w.j}, {"k", w.k}, {"residual", w.residual}}; }

void to_json(json& j, const StructureReport& r) {
  j = {{"classification", to_string(r.classification)},
       {"type_i", r.type_i},
       {"type_ii", r.type_ii},
       {"diagonal_type_t", r.diagonal_type_t},
       {"max_residual", r.max_residual},
       {"diagonal_residual", r.diagonal_residual},
       {"type_i_residual", r.type_i_residual},
       {"type_ii_residual", r.type_ii_residual}};
  j["witness"] = r.witness ? json(*r.witness) : json(nullptr);
}

void to_json(json& j, const Lemma1Report& r) {
  j = {{"n", r.n},
       {"trials", r.trials},
       {"passes", r.passes},
       {"resamples", r.resamples},
       {"max_residual", r.max_residual},
       {"t1_zero_checks", r.t1_zero_checks},
       {"t1_zero_passes", r.t1_zero_passes},
       {"all_passed", r.all_passed()}};
  j["worst_witness"] = r.worst_witness ? json(*r.worst_witness) : json(nullptr);
}

void to_json(json& j, const StageRecord& r) {
  j = {{"stage", r.stage}, {"levy_cube_bound", r.levy_cube_bound}, {"inequality_holds", r.inequality_holds}};
  if (r.stage == "truncate") {
    j["truncated_count"] = r.truncated_count;
    j["rank_bound"] = r.rank_bound;
  }
  if (r.stage == "centralize") j["centering_shift_norm"] = r.centering_shift_norm;
  if (r.stage == "rescale") {
    j["truncated_variance"] = r.truncated_variance;
    j["variance_floor_replacements"] = r.variance_floor_replacements;
  }
  if (r.levy_measured) j["levy_measured"] = *r.levy_measured;
  if (r.sup_measured) j["sup_measured"] = *r.sup_measured;
}

void to_json(json& j, const PipelineTrace& t) {
  j = {{"n", t.n},
       {"eta_n", t.eta_n},
       {"moments_exact", t.moments_exact},
       {"stages", t.stages},
       {"inequalities_hold", t.inequalities_hold()}};
}

void to_json(json& j, const SpectralSample& s) {
  j = {{"n", s.n}, {"pairing_residual", s.pairing_residual}, {"eigenvalues", s.eigenvalues_dedup}};
}

void to_json(json& j, const ResolventStructureReport& r) {
  j = {{"passed", r.passed}, {"diagonal_type_t", r.diagonal_type_t}, {"max_residual", r.max_residual},
       {"structure", r.structure}};
}

void to_json(json& j, const TraceMinorReport& r) {
  j = {{"passed", r.passed}, {"bound", r.bound}, {"max_difference", r.max_difference}, {"differences", r.differences}};
}

void to_json(json& j, const Histogram& h) { j = {{"edges", h.edges}, {"counts", h.counts}, {"overlay", h.overlay}}; }

void from_json(const json& j, Histogram& h) {
  h.edges = j.at("edges").get<std::vector<double>>();
  h.counts = j.at("counts").get<std::vector<std::size_t>>();
  h.overlay = j.at("overlay").get<std::vector<double>>();
}

void to_json(json& j, const PipelineSummary& p) {
  j = {{"eta_n", p.eta_n},
       {"truncated_count", p.truncated_count},
       {"replacements", p.replacements},
       {"inequalities_hold", p.inequalities_hold}};
}

void from_json(const json& j, PipelineSummary& p) {
  p.eta_n = get_double(j.at("eta_n"));
  p.truncated_count = j.at("truncated_count").get<std::size_t>();
  p.replacements = j.at("replacements").get<std::size_t>();
  p.inequalities_hold = j.at("inequalities_hold").get<bool>();
}

void to_json(json& j, const ConvergenceRow& r) {
  j = {{"n", r.n},
       {"trial", r.trial},
       {"seed", r.seed},
       {"kolmogorov", r.kolmogorov},
       {"levy", r.levy},
       {"stieltjes_errors", r.stieltjes_errors},
       {"pairing_residual", r.pairing_residual},
       {"checks_ok", r.checks_ok},
       {"failures", r.failures}};
  j["pipeline"] = r.pipeline ? json(*r.pipeline) : json(nullptr);
  if (r.histogram) j["histogram"] = *r.histogram;
}

void from_json(const json& j, ConvergenceRow& r) {
  r = ConvergenceRow{};
  r.n = j.at("n").get<std::size_t>();
  r.trial = j.at("trial").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.kolmogorov = get_double(j.at("kolmogorov"));
  r.levy = get_double(j.at("levy"));
  const json& se = j.at("stieltjes_errors");
  for (const auto& e : se) r.stieltjes_errors.push_back(get_double(e.is_object() ? e.at("error") : e));
  r.pairing_residual = get_double(j.at("pairing_residual"));
  r.checks_ok = j.at("checks_ok").get<bool>();
  r.failures = j.at("failures").get<std::vector<std::string>>();
  if (j.contains("pipeline") && !j.at("pipeline").is_null()) r.pipeline = j.at("pipeline").get<PipelineSummary>();
  if (j.contains("histogram")) r.histogram = j.at("histogram").get<Histogram>();
  if (j.contains("wall_time")) r.wall_time = get_double(j.at("wall_time"));
}

namespace {

constexpr std::pair<const char*, bool CheckSet::*> kCheckNames[] = {
    {"lemma1", &CheckSet::lemma1},
    {"resolvent_structure", &CheckSet::resolvent_structure},
    {"trace_minor", &CheckSet::trace_minor},
    {"levy_bounds", &CheckSet::levy_bounds},
    {"rank_bounds", &CheckSet::rank_bounds},
};

}  // namespace

void to_json(json& j, const CheckSet& c) {
  j = json::array();
  for (const auto& [name, member] : kCheckNames)
    if (c.*member) j.push_back(name);
}

void from_json(const json& j, CheckSet& c) {
  c = CheckSet{};
  if (j.is_string() && j.get<std::string>() == "all") {
    c = CheckSet::all();
    return;
  }
  if (!j.is_array()) throw ConfigError("checks must be a list of names or \"all\"");
  for (const auto& item : j) {
    const std::string name = item.get<std::string>();
    bool found = false;
    for (const auto& [known, member] : kCheckNames) {
      if (name == known) {
        c.*member = true;
        found = true;
      }
    }
    if (!found) throw ConfigError("unknown check '" + name + "'");
  }
}

void to_json(json& j, const ExperimentConfig& c) {
  json grid = json::array();
  for (const cplx& z : c.z_grid) grid.push_back(complex_to_json(z));
  j = {{"ensemble", c.ensemble},
       {"sizes", c.sizes},
       {"trials_per_size", c.trials_per_size},
       {"z_grid", std::move(grid)},
       {"pipeline", c.pipeline},
       {"checks", c.checks},
       {"output", {{"path", c.output_path}, {"format", c.format}}},
       {"tol", c.tol},
       {"pair_tol", c.pair_tol},
       {"lemma1", {{"max_n", c.lemma1_max_n}, {"trials", c.lemma1_trials}}},
       {"histogram_bins", c.histogram_bins},
       {"mc_samples", c.mc_samples}};
}

void from_json(const json& j, ExperimentConfig& c) {
  reject_unknown(j,
                 {"ensemble", "sizes", "trials_per_size", "z_grid", "pipeline", "checks", "output", "tol", "pair_tol",
                  "lemma1", "histogram_bins", "mc_samples"},
                 "config");
  c = ExperimentConfig{};
  if (j.contains("ensemble")) c.ensemble = j.at("ensemble").get<EnsembleSpec>();
  if (j.contains("sizes")) c.sizes = j.at("sizes").get<std::vector<std::size_t>>();
  c.trials_per_size = j.value("trials_per_size", c.trials_per_size);
  if (j.contains("z_grid")) {
    c.z_grid.clear();
    for (const auto& z : j.at("z_grid")) c.z_grid.push_back(complex_from_json(z));
  }
  c.pipeline = j.value("pipeline", false);
  if (j.contains("checks")) c.checks = j.at("checks").get<CheckSet>();
  if (j.contains("output")) {
    const json& o = j.at("output");
    reject_unknown(o, {"path", "format"}, "output");
    c.output_path = o.value("path", std::string{});
    c.format = o.value("format", c.format);
  }
  c.tol = j.value("tol", c.tol);
  c.pair_tol = j.value("pair_tol", c.pair_tol);
  if (j.contains("lemma1")) {
    const json& l = j.at("lemma1");
    reject_unknown(l, {"max_n", "trials"}, "lemma1");
    c.lemma1_max_n = l.value("max_n", c.lemma1_max_n);
    c.lemma1_trials = l.value("trials", c.lemma1_trials);
  }
  c.histogram_bins = j.value("histogram_bins", c.histogram_bins);
  c.mc_samples = j.value("mc_samples", c.mc_samples);
}

void to_json(json& j, const CheckResult& c) {
  j = {{"name", c.name}, {"passed", c.passed}, {"max_residual", c.max_residual}, {"cases", c.cases},
       {"detail", c.detail}};
}

void to_json(json& j, const CheckReport& r) { j = {{"all_passed", r.all_passed()}, {"checks", r.checks}}; }

json rows_to_json(const std::vector<ConvergenceRow>& rows, const std::vector<cplx>& z_grid, bool include_timing) {
  json out = json::array();
  for (const auto& r : rows) {
    json jr = r;
    json se = json::array();
    for (std::size_t i = 0; i < r.stieltjes_errors.size(); ++i) {
      json e = {{"error", r.stieltjes_errors[i]}};
      if (i < z_grid.size()) e["z"] = complex_to_json(z_grid[i]);
      se.push_back(std::move(e));
    }
    jr["stieltjes_errors"] = std::move(se);
    if (include_timing) jr["wall_time"] = r.wall_time;
    out.push_back(std::move(jr));
  }
  return out;
}

namespace {

json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  const json j = read_json(path);
  ExperimentConfig c;
  try {
    c = j.get<ExperimentConfig>();
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "': " + e.what());
  } catch (const SpecError& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
  c.validate();
  return c;
}

EnsembleSpec load_ensemble(const std::string& path) {
  const json j = read_json(path);
  try {
    // Accept either a bare ensemble or a full experiment config.
    EnsembleSpec s = j.contains("ensemble") ? j.at("ensemble").get<EnsembleSpec>() : j.get<EnsembleSpec>();
    validate(s);
    return s;
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "': " + e.what());
  } catch (const SpecError& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

}  // namespace qsc
