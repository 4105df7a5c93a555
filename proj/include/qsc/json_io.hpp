#pragma once

// JSON (de)serialization for the library's value types (nlohmann/json ADL hooks).

#include <json.hpp>

#include "qsc/harness.hpp"
#include "qsc/pipeline.hpp"
#include "qsc/spectra.hpp"
#include "qsc/structure.hpp"

namespace qsc {

using json = nlohmann::json;

void to_json(json& j, const Quaternion& q);
void from_json(const json& j, Quaternion& q);

void to_json(json& j, const Distribution& d);
void from_json(const json& j, Distribution& d);
void to_json(json& j, const EtaSchedule& e);
void from_json(const json& j, EtaSchedule& e);
void to_json(json& j, const EnsembleSpec& s);
void from_json(const json& j, EnsembleSpec& s);

void to_json(json& j, const SelfDualMatrix& w);

void to_json(json& j, const Witness& w);
void to_json(json& j, const StructureReport& r);
void to_json(json& j, const Lemma1Report& r);

void to_json(json& j, const StageRecord& r);
void to_json(json& j, const PipelineTrace& t);

void to_json(json& j, const SpectralSample& s);
void to_json(json& j, const ResolventStructureReport& r);
void to_json(json& j, const TraceMinorReport& r);
void to_json(json& j, const Histogram& h);
void from_json(const json& j, Histogram& h);

void to_json(json& j, const PipelineSummary& p);
void from_json(const json& j, PipelineSummary& p);
void to_json(json& j, const ConvergenceRow& r);
void from_json(const json& j, ConvergenceRow& r);

void to_json(json& j, const CheckSet& c);
void from_json(const json& j, CheckSet& c);
void to_json(json& j, const ExperimentConfig& c);
void from_json(const json& j, ExperimentConfig& c);

void to_json(json& j, const CheckResult& c);
void to_json(json& j, const CheckReport& r);

/// Rows as emitted by the sweep (timing omitted unless include_timing).
json rows_to_json(const std::vector<ConvergenceRow>& rows, const std::vector<cplx>& z_grid, bool include_timing);

/// Reads and validates an ExperimentConfig file. Throws ConfigError / IoError.
ExperimentConfig load_config(const std::string& path);
EnsembleSpec load_ensemble(const std::string& path);

}  // namespace qsc
