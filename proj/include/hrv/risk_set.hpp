#pragma once

#include "hrv/cone.hpp"

#include <string>
#include <variant>

namespace hrv {

// ---------------------------------------------------------------------------
// Ray-increasing risk sets: z in A implies t z in A for every t >= 1. Along a
// direction w the set is entered at a single radius r_A(w), so the homogeneous
// limit measure of A is a weighted sum of r_A(atom)^(-alpha).
// ---------------------------------------------------------------------------

// {z : z^j > u^j for all j}
struct JointExceed {
    Point u;
};

// {z : |z^i - z^j| > x}, 0-based coordinates
struct AbsDiffExceed {
    std::size_t i = 0;
    std::size_t j = 1;
    double x = 1.0;
};

// {z : <w, z> > x}, weights of any sign
struct LinearExceed {
    Point w;
    double x = 1.0;
};

// [0, u]^c = {z : z^j > u^j for some j}; u^j = +inf drops coordinate j
struct ComplementBox {
    Point u;
};

// {z : d(z, F) > r}
struct DistExceed {
    ConeSpec cone;
    double r = 1.0;
};

using RiskSetShape = std::variant<JointExceed, AbsDiffExceed, LinearExceed, ComplementBox, DistExceed>;

struct RiskSet {
    RiskSetShape shape;
    std::string id;  // label carried into reports, may be empty

    RiskSet(RiskSetShape s, std::string label = {}) : shape(std::move(s)), id(std::move(label)) {}

    bool contains(std::span<const double> z) const;

    // inf{r > 0 : r w in A}; +inf when the ray through w never enters A.
    double entry_radius(std::span<const double> w) const;

    // theta * A = {theta z : z in A}
    RiskSet scaled(double theta) const;

    // ConfigError when thresholds are not positive (or indices out of range)
    // for a dataset of dimension `dim`.
    void validate(std::size_t dim) const;

    std::string type_name() const;
};

// inf over z in A of d(z, F), computed as the minimum of r_A(w) d(w, F) over a
// deterministic set of directions on the L1 simplex. The set includes points
// geometrically close to every face so that sets touching F only in a limit
// are caught. Returns +inf for an empty set.
double min_distance_to_cone(const RiskSet& a, const ConeSpec& f);

// min_distance_to_cone > 1e-9 * inf{||z|| : z in A}
bool bounded_away(const RiskSet& a, const ConeSpec& f);

}  // namespace hrv
