#pragma once

#include "hrv/cone.hpp"
#include "hrv/estimation.hpp"
#include "hrv/risk_set.hpp"
#include "hrv/sampler.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hrv {

// ---------------------------------------------------------------------------
// Plug-in limit measure: nu(A) = mass_c * sum_j p_j r_A(atom_j)^(-alpha).
// ---------------------------------------------------------------------------
struct LimitMeasureModel {
    double alpha_hat = 1.0;
    std::vector<Point> atoms;
    std::vector<double> probs;  // normalized spectral weights
    double mass_c = 1.0;        // exceedance mass #atoms / k
    ConeSpec cone;
    double b_hat = 1.0;
    std::size_t n = 0;          // sample size the probabilities refer to
    std::size_t k = 0;
};

LimitMeasureModel build_model(const TailIndexFit& fit, const SpectralMeasureEstimate& spectral, std::size_t n);

// ContractError for a set that fails validation or is not bounded away from
// the model's forbidden cone.
double eval_limit_measure(const LimitMeasureModel& model, const RiskSet& a);

// Same sum without the bounded-away probe; for callers that already checked.
double eval_limit_measure_unchecked(const LimitMeasureModel& model, const RiskSet& a);

struct RiskEstimate {
    double plug_in = 0.0;    // (k/n) nu(A / b_hat)
    double empirical = 0.0;  // (1/n) #{Z_i in A}
};

RiskEstimate risk_probability(const DataSet& data, const LimitMeasureModel& model, const RiskSet& a);

// ---------------------------------------------------------------------------
// Sequential analysis over nested cones.
// ---------------------------------------------------------------------------
struct PipelineOptions {
    double cluster_eps = 0.05;
    double outlier_fraction = 0.01;
    std::size_t min_exceedances = 50;
    double alpha_slack = 0.1;
    TailMethod method = TailMethod::Hill;
    std::size_t sweep_points = 60;
};

// floor(sqrt(n_pos)) capped at n_pos / 10, never below 1.
std::size_t default_k(std::size_t n_pos);

struct HrvLevelReport {
    HrvLevelReport(std::size_t lvl, ConeSpec c) : level(lvl), cone(std::move(c)) {}

    std::size_t level = 0;
    ConeSpec cone;
    std::size_t n_sample = 0;
    std::size_t n_pos = 0;
    std::size_t n_zero = 0;
    std::size_t k = 0;
    bool degenerate = false;
    std::optional<TailIndexFit> fit;
    std::optional<SupportEstimate> support;  // carries the spectral estimate
    std::optional<LimitMeasureModel> model;
    std::optional<bool> alpha_consistent;    // alpha(level) >= alpha(level - 1) - slack
    std::vector<SweepPoint> hill_sweep;
    std::vector<std::string> warnings;
};

// Cones must be strictly nested (each forbidden set contains the previous
// one) or ConfigError is thrown. `ks` is empty (default rule) or one k per
// level.
std::vector<HrvLevelReport> run_sequence(const DataSet& data, const std::vector<ConeSpec>& cones,
                                         const std::vector<std::size_t>& ks = {}, const PipelineOptions& opts = {});

// Support peeling: each level adds Ray(center) of every non-outlier cluster to
// the forbidden set and drops the points inside AngularCap(center,
// cluster_eps) from the next level's sample. Stops at max_levels or at the
// first degenerate level. Risk sets with zero plug-in mass at every level get
// a warning on the last report.
std::vector<HrvLevelReport> discover_cones(const DataSet& data, const ConeSpec& base, std::optional<std::size_t> k,
                                           std::size_t max_levels, const PipelineOptions& opts = {},
                                           const std::vector<RiskSet>& risk_sets = {});

// ---------------------------------------------------------------------------
// Two normalizations of the CEV scenario: t * P_n[xi/t <= x, eta/t > y] and
// t * P_n[xi/sqrt(t) <= x, eta/t > y] next to their limits.
// ---------------------------------------------------------------------------
struct CevGridPoint {
    double x;
    double y;
};

struct CevRow {
    double x, y;
    double emp_t, nu1;
    double emp_sqrt_t, nu2;
};

std::vector<CevGridPoint> default_cev_grid();
std::vector<CevRow> cev_two_normalizations(const DataSet& data, const std::vector<CevGridPoint>& grid, double t);

}  // namespace hrv
