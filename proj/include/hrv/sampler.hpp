#pragma once

#include "hrv/cone.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace hrv {

// ---------------------------------------------------------------------------
// Random streams
//
// Every random component of a scenario draws from its own stream. Stream s of
// seed `seed` is a std::mt19937_64 (sequence fixed by the C++ standard) seeded
// with splitmix64(seed + (s + 1) * 0x9E3779B97F4A7C15). Uniforms take the top
// 53 bits of one engine output. Stream numbering per scenario:
//   0: mixture selector (B or T)   1, 2, 3: components in construction order
// Each stream is advanced exactly once per row whether or not its branch
// fires, so row i depends only on (seed, i).
// ---------------------------------------------------------------------------
std::uint64_t splitmix64(std::uint64_t x) noexcept;

class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::uint64_t stream);

    double uniform01() noexcept;        // [0, 1)
    double uniform_positive() noexcept; // (0, 1]
    double pareto(double beta) noexcept { return std::pow(uniform_positive(), -1.0 / beta); }

private:
    std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// DataSet
// ---------------------------------------------------------------------------
struct Provenance {
    std::string scenario = "external";
    std::uint64_t seed = 0;
    nlohmann::json params = nlohmann::json::object();
};

class DataSet {
public:
    // Row-major values; throws DataError unless n >= 1 and entries are finite and >= 0.
    DataSet(std::size_t dim, std::vector<double> values, Provenance provenance = {});

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return values_.size() / dim_; }
    std::span<const double> row(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
    std::span<const double> values() const noexcept { return values_; }
    const Provenance& provenance() const noexcept { return provenance_; }

    // Rows whose index is listed, same provenance.
    DataSet subset(std::span<const std::size_t> rows) const;

private:
    std::size_t dim_;
    std::vector<double> values_;
    Provenance provenance_;
};

// ---------------------------------------------------------------------------
// Scenarios with known regular-variation structure (all two-dimensional
// except IidPareto). Pareto(b) means P(X > x) = x^{-b}, x >= 1.
// ---------------------------------------------------------------------------
enum class ScenarioKind {
    IidPareto,      // d iid Pareto(alpha)
    NonstdMix,      // B (X1, X3) + (1-B)(X2, X2), X1~P(1), X2~P(3), X3~P(4)
    Diversify,      // B R1 (U1, 1-U1) + (1-B) R2 (U2, 1-U2)
    FullDep,        // B (X1^2, X1^2) + (1-B)(X2, X3), Xi~P(2)
    InfiniteCones,  // T=1: (Y1, Y2); T=i+1: (X^p_i, 2^{i-1} X^p_i), p_i = 1/(2 - 2^{-(i-1)})
    CevMix          // B (Y, Y) + (1-B)(sqrt Y, Y), Y~P(1)
};

struct ScenarioId {
    ScenarioKind kind = ScenarioKind::FullDep;
    double alpha = 1.0;     // IidPareto only
    std::size_t dim = 2;    // IidPareto only
    std::size_t m = 6;      // InfiniteCones truncation (number of mixture terms)

    static ScenarioId iid_pareto(double alpha, std::size_t dim) { return {ScenarioKind::IidPareto, alpha, dim, 6}; }
    static ScenarioId nonstd_mix() { return {ScenarioKind::NonstdMix}; }
    static ScenarioId diversify() { return {ScenarioKind::Diversify}; }
    static ScenarioId full_dep() { return {ScenarioKind::FullDep}; }
    static ScenarioId infinite_cones(std::size_t m = 6) { return {ScenarioKind::InfiniteCones, 1.0, 2, m}; }
    static ScenarioId cev_mix() { return {ScenarioKind::CevMix}; }

    std::string name() const;
    std::size_t dimension() const { return kind == ScenarioKind::IidPareto ? dim : 2; }
    nlohmann::json params() const;
    void validate() const;  // ConfigError on out-of-range parameters

    bool operator==(const ScenarioId&) const = default;
};

ScenarioId scenario_from_name(const std::string& name);

// P(T = i) for the truncated geometric selector of InfiniteCones: 2^{-i} for
// i < m, the remaining 2^{-(m-1)} on i = m.
double infinite_cones_term_probability(std::size_t i, std::size_t m);

DataSet simulate(const ScenarioId& id, std::size_t n, std::uint64_t seed);

// CSV with header z1,...,zd. Errors name the 1-based data row and column.
DataSet load_csv(const std::filesystem::path& path);
DataSet parse_csv(const std::string& text);
std::string to_csv(const DataSet& data);

}  // namespace hrv
