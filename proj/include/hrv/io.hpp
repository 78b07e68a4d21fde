#pragma once

// JSON and CSV forms of the library types. Parsing errors are ConfigErrors
// whose message starts with the offending field path, e.g.
// "cone.forbidden[1].direction: expected an array of numbers".

#include "hrv/cone.hpp"
#include "hrv/estimation.hpp"
#include "hrv/pipeline.hpp"
#include "hrv/risk_set.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace hrv {

using nlohmann::json;

json cone_to_json(const ConeSpec& cone);
ConeSpec cone_from_json(const json& j, const std::string& path = "cone");

// Infinite thresholds are written as the string "inf" and read back from
// "inf" or null.
json risk_set_to_json(const RiskSet& a);
RiskSet risk_set_from_json(const json& j, const std::string& path = "risk_set");

// A file holding either one object or an array of objects.
std::vector<RiskSet> risk_sets_from_json(const json& j, const std::string& path = "risk_sets");

json fit_to_json(const TailIndexFit& fit);
json cluster_to_json(const SupportCluster& c, std::size_t id);
json model_to_json(const LimitMeasureModel& m);
json level_report_to_json(const HrvLevelReport& r);

// Atoms as CSV: w1..wd, weight, cluster_id (-1 when no clustering was run).
std::string atoms_csv(const SpectralMeasureEstimate& s, const std::vector<std::size_t>* cluster_of = nullptr);
std::string sweep_csv(const std::vector<SweepPoint>& sweep);

// Histogram of the first L1-normalized coordinate of the atoms, `bins` equal
// bins on [0, 1], columns bin_lo, bin_hi, mass.
std::string spectral_histogram_csv(const SpectralMeasureEstimate& s, std::size_t bins = 20);

std::string cev_csv(const std::vector<CevRow>& rows);

// Reads and parses a JSON document; ConfigError naming `what` on failure.
json load_json_file(const std::string& path, const std::string& what);

// Stable text form: two-space indent and a trailing newline.
std::string dump_json(const json& j);

}  // namespace hrv
