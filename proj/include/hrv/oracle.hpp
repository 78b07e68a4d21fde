#pragma once

// Reference values for the simulation scenarios: the limit measures of every
// level with a known closed form, and exact finite-sample probabilities by
// conditioning on the mixture branch.

#include "hrv/cone.hpp"
#include "hrv/risk_set.hpp"
#include "hrv/sampler.hpp"

#include <vector>

namespace hrv {

struct OracleSpec {
    ScenarioId scenario;
    std::size_t level = 0;
};

// Tail index of the given level. NoOracleError outside the table.
double oracle_alpha(const OracleSpec& spec);

// Limit measure nu_level(A) in the scaling of the canonical cone sequence.
double oracle_nu(const OracleSpec& spec, const RiskSet& a);

// The cone sequence the oracle levels refer to (all under Linf).
std::vector<ConeSpec> canonical_cones(const ScenarioId& scenario);

// P[Z in A] for one draw of the scenario, quadrature tolerance about 1e-10.
double oracle_probability(const ScenarioId& scenario, const RiskSet& a);

// Box-parameter forms quoted with the scenarios.
double full_dep_level0_box(double u, double v);            // nu([0,(u,v)]^c)
double full_dep_level1_box(double u, double v, double x);  // nu_1([0,(u,v)]^c and |u-v| > x)
double cev_nu1(double x, double y);                        // nu_1([0,x] x (y,inf))
double cev_nu2(double x, double y);                        // nu_2([0,x] x (y,inf))

// Angular support of the diversification scenario at level 0: the first
// L1-normalized coordinate lies in [0,1/3] or [2/3,1].
bool diversify_level0_support_contains(double angle);

}  // namespace hrv
