#include "hrv/cone.hpp"

#include "hrv/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace hrv {

namespace {

constexpr double kSnapRelative = 1e-12;

void require_finite_nonnegative(std::span<const double> v, const char* what) {
    for (double c : v) {
        if (!std::isfinite(c) || c < 0.0) {
            throw ConfigError(std::string(what) + ": coordinates must be finite and >= 0");
        }
    }
}

Point l1_normalized(Point v, const char* what) {
    require_finite_nonnegative(v, what);
    const double s = std::accumulate(v.begin(), v.end(), 0.0);
    if (!(s > 0.0)) {
        throw ConfigError(std::string(what) + ": must have a positive coordinate");
    }
    for (double& c : v) c /= s;
    return v;
}

bool same_direction(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) return false;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (std::abs(a[j] - b[j]) > 1e-12) return false;
    }
    return true;
}

double l1_residual(std::span<const double> x, std::span<const double> a, double t) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += std::abs(x[j] - t * a[j]);
    return s;
}

double linf_residual(std::span<const double> x, std::span<const double> a, double t) {
    double m = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) m = std::max(m, std::abs(x[j] - t * a[j]));
    return m;
}

double residual(std::span<const double> x, std::span<const double> a, double t, Norm norm) {
    switch (norm) {
        case Norm::L1: return l1_residual(x, a, t);
        case Norm::Linf: return linf_residual(x, a, t);
        case Norm::L2: {
            double s = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double r = x[j] - t * a[j];
                s += r * r;
            }
            return std::sqrt(s);
        }
    }
    return 0.0;
}

double kth_largest(std::span<const double> x, std::size_t l) {
    std::vector<double> v(x.begin(), x.end());
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(l - 1), v.end(), std::greater<>());
    return v[l - 1];
}

Point unit_center(const AngularCap& cap, Norm norm) {
    Point c = cap.center;
    const double s = norm_of(c, norm);
    for (double& v : c) v /= s;
    return c;
}

// min over t >= 0 of max(0, ||x - t c|| - t eps), c of unit norm. The map is
// convex in t; golden-section search on [0, 2||x|| / (1 - eps)], where the
// objective already exceeds its value at t = 0.
double cap_distance(std::span<const double> x, const AngularCap& cap, Norm norm) {
    if (cap_contains(x, cap, norm)) return 0.0;
    const Point c = unit_center(cap, norm);
    auto g = [&](double t) { return residual(x, c, t, norm) - t * cap.eps; };

    const double x_norm = norm_of(x, norm);
    double lo = 0.0;
    double hi = 2.0 * x_norm / (1.0 - cap.eps);
    const double tol = 1e-13 * hi;
    constexpr double kInvPhi = 0.6180339887498949;
    double a = hi - kInvPhi * (hi - lo);
    double b = lo + kInvPhi * (hi - lo);
    double ga = g(a);
    double gb = g(b);
    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        if (ga <= gb) {
            hi = b;
            b = a;
            gb = ga;
            a = hi - kInvPhi * (hi - lo);
            ga = g(a);
        } else {
            lo = a;
            a = b;
            ga = gb;
            b = lo + kInvPhi * (hi - lo);
            gb = g(b);
        }
    }
    const double best = std::min({g(0.0), ga, gb, g(0.5 * (lo + hi))});
    return std::max(0.0, best);
}

}  // namespace

std::string to_string(Norm norm) {
    switch (norm) {
        case Norm::L1: return "l1";
        case Norm::L2: return "l2";
        case Norm::Linf: return "linf";
    }
    return "?";
}

Norm norm_from_string(const std::string& name) {
    if (name == "l1") return Norm::L1;
    if (name == "l2") return Norm::L2;
    if (name == "linf") return Norm::Linf;
    throw ConfigError("norm: expected \"l1\", \"l2\" or \"linf\", got \"" + name + "\"");
}

double norm_of(std::span<const double> x, Norm norm) {
    switch (norm) {
        case Norm::L1: {
            double s = 0.0;
            for (double v : x) s += std::abs(v);
            return s;
        }
        case Norm::L2: {
            double s = 0.0;
            for (double v : x) s += v * v;
            return std::sqrt(s);
        }
        case Norm::Linf: {
            double m = 0.0;
            for (double v : x) m = std::max(m, std::abs(v));
            return m;
        }
    }
    return 0.0;
}

Ray make_ray(Point direction) { return Ray{l1_normalized(std::move(direction), "ray.direction")}; }

AngularCap make_cap(Point center, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("cap.eps: must lie in (0, 1)");
    return AngularCap{l1_normalized(std::move(center), "cap.center"), eps};
}

AxisAlignedSubspace make_subspace(std::size_t dim, std::initializer_list<std::size_t> kept_axes) {
    AxisAlignedSubspace s{std::vector<bool>(dim, false)};
    for (std::size_t j : kept_axes) {
        if (j >= dim) throw ConfigError("subspace: axis index out of range");
        s.keep[j] = true;
    }
    return s;
}

double ray_distance(std::span<const double> x, std::span<const double> a, Norm norm) {
    if (x.size() != a.size()) throw ContractError("ray_distance: dimension mismatch");
    bool any_positive = false;
    for (double v : a) any_positive = any_positive || v > 0.0;
    if (!any_positive) return norm_of(x, norm);

    switch (norm) {
        case Norm::L2: {
            double xa = 0.0;
            double aa = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) {
                xa += x[j] * a[j];
                aa += a[j] * a[j];
            }
            return residual(x, a, std::max(0.0, xa / aa), norm);
        }
        case Norm::L1: {
            double best = l1_residual(x, a, 0.0);
            for (std::size_t j = 0; j < x.size(); ++j) {
                if (a[j] > 0.0) {
                    const double t = x[j] / a[j];
                    if (t > 0.0) best = std::min(best, l1_residual(x, a, t));
                }
            }
            return best;
        }
        case Norm::Linf: {
            // The upper envelope of the lines +-(x^j - t a^j) attains its minimum
            // where a decreasing line x^i - t a^i meets an increasing one t a^j - x^j.
            double best = linf_residual(x, a, 0.0);
            for (std::size_t i = 0; i < x.size(); ++i) {
                for (std::size_t j = i; j < x.size(); ++j) {
                    const double den = a[i] + a[j];
                    if (den <= 0.0) continue;
                    const double t = (x[i] + x[j]) / den;
                    if (t > 0.0) best = std::min(best, linf_residual(x, a, t));
                }
            }
            return best;
        }
    }
    return 0.0;
}

double angular_distance(std::span<const double> x, std::span<const double> center, Norm norm) {
    Point c(center.begin(), center.end());
    const double s = norm_of(c, norm);
    if (!(s > 0.0)) throw ContractError("angular_distance: zero center");
    for (double& v : c) v /= s;
    return ray_distance(c, x, norm);
}

bool cap_contains(std::span<const double> x, const AngularCap& cap, Norm norm) {
    if (norm_of(x, norm) == 0.0) return true;
    return angular_distance(x, cap.center, norm) <= cap.eps;
}

double primitive_distance(std::span<const double> x, const PrimitiveCone& cone, Norm norm) {
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Origin>) {
                return norm_of(x, norm);
            } else if constexpr (std::is_same_v<T, CoordHyperplaneUnion>) {
                if (norm != Norm::Linf) {
                    throw ConfigError("coord_hyperplane: distance only defined under linf");
                }
                return kth_largest(x, p.l);
            } else if constexpr (std::is_same_v<T, AxisAlignedSubspace>) {
                Point off(x.size(), 0.0);
                for (std::size_t j = 0; j < x.size(); ++j) {
                    if (!p.keep[j]) off[j] = x[j];
                }
                return norm_of(off, norm);
            } else if constexpr (std::is_same_v<T, Ray>) {
                return ray_distance(x, p.direction, norm);
            } else {
                return cap_distance(x, p, norm);
            }
        },
        cone);
}

ConeSpec::ConeSpec(std::size_t dim, Norm norm, std::vector<PrimitiveCone> forbidden)
    : dim_(dim), norm_(norm), forbidden_(std::move(forbidden)) {
    if (dim_ == 0) throw ConfigError("cone.dim: must be >= 1");
    if (forbidden_.empty()) throw ConfigError("cone.forbidden: must contain at least one cone");
    for (auto& prim : forbidden_) {
        std::visit(
            [&](auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, CoordHyperplaneUnion>) {
                    if (norm_ != Norm::Linf) {
                        throw ConfigError("cone.forbidden: coord_hyperplane requires norm \"linf\"");
                    }
                    if (p.l < 1 || p.l > dim_) throw ConfigError("cone.forbidden: coord_hyperplane.l out of range");
                } else if constexpr (std::is_same_v<T, AxisAlignedSubspace>) {
                    if (p.keep.size() != dim_) throw ConfigError("cone.forbidden: subspace.mask has wrong length");
                } else if constexpr (std::is_same_v<T, Ray>) {
                    if (p.direction.size() != dim_) {
                        throw ConfigError("cone.forbidden: ray.direction has wrong length");
                    }
                    p = make_ray(std::move(p.direction));
                } else if constexpr (std::is_same_v<T, AngularCap>) {
                    if (p.center.size() != dim_) throw ConfigError("cone.forbidden: cap.center has wrong length");
                    p = make_cap(std::move(p.center), p.eps);
                }
            },
            prim);
    }
}

double ConeSpec::distance(std::span<const double> x) const {
    if (x.size() != dim_) throw ContractError("distance_to_cone: point dimension does not match cone");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& prim : forbidden_) best = std::min(best, primitive_distance(x, prim, norm_));
    if (best <= kSnapRelative * norm_of(x, norm_)) return 0.0;
    return best;
}

double distance_to_cone(std::span<const double> x, const ConeSpec& spec) { return spec.distance(x); }

PolarPoint polar_decompose(std::span<const double> x, const ConeSpec& spec) {
    const double r = spec.distance(x);
    if (r == 0.0) throw OnForbiddenConeError();
    PolarPoint out{r, Point(x.begin(), x.end())};
    for (double& v : out.angle) v /= r;
    return out;
}

ConeSpec augment_cone(const ConeSpec& spec, const std::vector<PrimitiveCone>& extra) {
    std::vector<PrimitiveCone> all = spec.forbidden();
    all.insert(all.end(), extra.begin(), extra.end());
    return ConeSpec(spec.dim(), spec.norm(), std::move(all));
}

bool primitive_contains(const PrimitiveCone& outer, const PrimitiveCone& inner, Norm norm) {
    auto inner_is_origin = [&] {
        if (std::holds_alternative<Origin>(inner)) return true;
        if (const auto* h = std::get_if<CoordHyperplaneUnion>(&inner)) return h->l == 1;
        if (const auto* s = std::get_if<AxisAlignedSubspace>(&inner)) {
            return std::none_of(s->keep.begin(), s->keep.end(), [](bool b) { return b; });
        }
        return false;
    };
    if (inner_is_origin()) return true;

    return std::visit(
        [&](const auto& o) -> bool {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, Origin>) {
                return false;
            } else if constexpr (std::is_same_v<T, CoordHyperplaneUnion>) {
                if (const auto* h = std::get_if<CoordHyperplaneUnion>(&inner)) return h->l <= o.l;
                if (const auto* s = std::get_if<AxisAlignedSubspace>(&inner)) {
                    return static_cast<std::size_t>(std::count(s->keep.begin(), s->keep.end(), true)) < o.l;
                }
                if (const auto* r = std::get_if<Ray>(&inner)) {
                    const auto positive = std::count_if(r->direction.begin(), r->direction.end(),
                                                        [](double v) { return v > 0.0; });
                    return static_cast<std::size_t>(positive) < o.l;
                }
                return false;
            } else if constexpr (std::is_same_v<T, AxisAlignedSubspace>) {
                const bool everything = std::all_of(o.keep.begin(), o.keep.end(), [](bool b) { return b; });
                if (everything) return true;
                if (const auto* s = std::get_if<AxisAlignedSubspace>(&inner)) {
                    for (std::size_t j = 0; j < o.keep.size(); ++j) {
                        if (s->keep[j] && !o.keep[j]) return false;
                    }
                    return true;
                }
                if (const auto* r = std::get_if<Ray>(&inner)) {
                    for (std::size_t j = 0; j < o.keep.size(); ++j) {
                        if (r->direction[j] > 0.0 && !o.keep[j]) return false;
                    }
                    return true;
                }
                return false;
            } else if constexpr (std::is_same_v<T, Ray>) {
                if (const auto* r = std::get_if<Ray>(&inner)) return same_direction(r->direction, o.direction);
                return false;
            } else {
                if (const auto* r = std::get_if<Ray>(&inner)) return cap_contains(r->direction, o, norm);
                if (const auto* c = std::get_if<AngularCap>(&inner)) {
                    return same_direction(c->center, o.center) && c->eps <= o.eps;
                }
                return false;
            }
        },
        outer);
}

bool cone_covers(const ConeSpec& outer, const ConeSpec& inner) {
    if (outer.dim() != inner.dim() || outer.norm() != inner.norm()) return false;
    for (const auto& in : inner.forbidden()) {
        const bool covered = std::any_of(outer.forbidden().begin(), outer.forbidden().end(),
                                         [&](const PrimitiveCone& out) { return primitive_contains(out, in, outer.norm()); });
        if (!covered) return false;
    }
    return true;
}

}  // namespace hrv
