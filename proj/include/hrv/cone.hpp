#pragma once

// Closed cones F inside C = [0,inf)^d, the homogeneous distance d(x, F) and the
// decomposition x -> (d(x, F), x / d(x, F)) that turns regular variation on
// O = C \ F into a radial Pareto part times an angular measure on
// {x : d(x, F) = 1}.

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace hrv {

using Point = std::vector<double>;

enum class Norm { L1, L2, Linf };

std::string to_string(Norm norm);
Norm norm_from_string(const std::string& name);  // "l1" | "l2" | "linf"

double norm_of(std::span<const double> x, Norm norm);

// ---------------------------------------------------------------------------
// Primitive cones. Every variant is closed, contains 0 and is invariant under
// positive scaling.
// ---------------------------------------------------------------------------

// F = {0}
struct Origin {
    bool operator==(const Origin&) const = default;
};

// F = {x : x^(l) = 0}, i.e. points with fewer than l positive coordinates.
// Only defined under the L-infinity norm, where d(x, F) = x^(l), the l-th
// largest coordinate.
struct CoordHyperplaneUnion {
    std::size_t l = 1;
    bool operator==(const CoordHyperplaneUnion&) const = default;
};

// F = {x in C : x^j = 0 for every j with keep[j] == false}.
struct AxisAlignedSubspace {
    std::vector<bool> keep;
    bool operator==(const AxisAlignedSubspace&) const = default;
};

// F = {t a : t >= 0}. The direction is stored normalized to the L1 simplex.
struct Ray {
    Point direction;
    bool operator==(const Ray&) const = default;
};

// F = {t w : t >= 0, ||w - c|| <= eps} intersected with C, with c scaled to
// unit norm under the cone's norm. Requires 0 < eps < 1. Center stored
// L1-normalized; the norm-dependent rescaling happens at evaluation.
struct AngularCap {
    Point center;
    double eps = 0.05;
    bool operator==(const AngularCap&) const = default;
};

using PrimitiveCone = std::variant<Origin, CoordHyperplaneUnion, AxisAlignedSubspace, Ray, AngularCap>;

// Normalizing constructors; they validate shape but not the norm pairing.
Ray make_ray(Point direction);
AngularCap make_cap(Point center, double eps);
AxisAlignedSubspace make_subspace(std::size_t dim, std::initializer_list<std::size_t> kept_axes);

// Distance from x to a single primitive cone under `norm`.
double primitive_distance(std::span<const double> x, const PrimitiveCone& cone, Norm norm);

// Exact distance from x to {t a : t >= 0}. L2 uses the clamped projection; L1
// and Linf minimize the convex piecewise-linear t -> ||x - t a|| over its
// candidate breakpoints.
double ray_distance(std::span<const double> x, std::span<const double> a, Norm norm);

// Scale-free angular gap between the ray through x and a center direction c:
// the distance from c / ||c|| to the ray {t x : t >= 0}. Lies in [0, 1]; 0 iff
// x is a positive multiple of c. AngularCap membership is
// angular_distance(x, c) <= eps.
double angular_distance(std::span<const double> x, std::span<const double> center, Norm norm);

// x in the cap cone (x = 0 counts as inside).
bool cap_contains(std::span<const double> x, const AngularCap& cap, Norm norm);

// ---------------------------------------------------------------------------
// ConeSpec: F as a finite union of primitive cones.
// ---------------------------------------------------------------------------
class ConeSpec {
public:
    // Throws ConfigError for an empty union, a dimension mismatch or a
    // coordinate-hyperplane union under a norm other than Linf.
    ConeSpec(std::size_t dim, Norm norm, std::vector<PrimitiveCone> forbidden);

    std::size_t dim() const noexcept { return dim_; }
    Norm norm() const noexcept { return norm_; }
    const std::vector<PrimitiveCone>& forbidden() const noexcept { return forbidden_; }

    // d(x, F) = min over the primitives. Values below 1e-12 * ||x|| are
    // reported as exactly 0 so rounding residue on a forbidden ray does not
    // count as an exceedance.
    double distance(std::span<const double> x) const;

    // x in O = C \ F.
    bool in_open_cone(std::span<const double> x) const { return distance(x) > 0.0; }

    bool operator==(const ConeSpec&) const = default;

private:
    std::size_t dim_;
    Norm norm_;
    std::vector<PrimitiveCone> forbidden_;
};

double distance_to_cone(std::span<const double> x, const ConeSpec& spec);

struct PolarPoint {
    double radius;  // d(x, F)
    Point angle;    // x / d(x, F), lies on {d(., F) = 1}
};

// Throws OnForbiddenConeError when d(x, F) = 0.
PolarPoint polar_decompose(std::span<const double> x, const ConeSpec& spec);

ConeSpec augment_cone(const ConeSpec& spec, const std::vector<PrimitiveCone>& extra);

// Conservative structural containment: true when every primitive of `inner`
// lies inside some single primitive of `outer` (same dimension and norm).
// A false answer does not prove non-containment for exotic unions.
bool cone_covers(const ConeSpec& outer, const ConeSpec& inner);

bool primitive_contains(const PrimitiveCone& outer, const PrimitiveCone& inner, Norm norm);

}  // namespace hrv
