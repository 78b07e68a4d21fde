#pragma once

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hrv {

// Every flag of every subcommand; unused ones keep their defaults. Embedded
// verbatim in each report so a run can be reproduced from its output.
struct RunConfig {
    std::string command;
    std::string in;
    std::string out;
    std::string cone;       // path to a ConeSpec JSON file
    std::string cones;      // path to an array of cones or a pipeline config
    std::string risk_set;   // path to a RiskSet (or array) JSON file
    std::string config;     // path to a pipeline config JSON file
    std::optional<std::string> scenario;
    std::optional<std::size_t> n;
    std::optional<std::size_t> k;
    std::vector<std::size_t> ks;
    std::uint64_t seed = 0;
    double cluster_eps = 0.05;
    double alpha = 1.0;
    std::size_t dim = 2;
    std::size_t m = 6;
    std::string method = "hill";
    std::optional<double> t;
    std::size_t max_levels = 4;

    bool operator==(const RunConfig&) const = default;
};

nlohmann::json run_config_to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitData = 3, kExitConfig = 4 };

// Parses argv (argv[0] is the program name), runs the subcommand and returns
// the process exit code. Diagnostics go to `err`, provenance/summary to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hrv
