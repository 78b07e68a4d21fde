#include "hrv/risk_set.hpp"

#include "hrv/error.hpp"
#include "hrv/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hrv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_size(std::size_t got, std::size_t dim, const char* field) {
    if (got != dim) {
        throw ConfigError(std::string(field) + ": expected " + std::to_string(dim) + " entries, got " +
                          std::to_string(got));
    }
}

void push_normalized(std::vector<Point>& out, Point w) {
    double s = 0.0;
    for (double v : w) s += v;
    if (!(s > 0.0)) return;
    for (double& v : w) v /= s;
    out.push_back(std::move(w));
}

std::vector<Point> probe_directions(std::size_t dim, const ConeSpec& f) {
    std::vector<Point> out;
    if (dim == 1) {
        out.push_back({1.0});
    } else if (dim == 2) {
        for (int i = 0; i <= 4000; ++i) {
            const double u = i / 4000.0;
            out.push_back({u, 1.0 - u});
        }
        for (int e = 1; e <= 12; ++e) {
            const double s = std::pow(10.0, -e);
            out.push_back({s, 1.0 - s});
            out.push_back({1.0 - s, s});
        }
    } else if (dim == 3) {
        std::vector<double> levels = {0.0, 1e-12, 1e-9, 1e-6, 1e-3};
        for (int i = 1; i <= 40; ++i) levels.push_back(i / 40.0);
        for (double a : levels)
            for (double b : levels)
                for (double c : levels) push_normalized(out, {a, b, c});
    } else {
        const std::vector<double> levels = {0.0, 1e-12, 1e-6, 1.0};
        if (dim <= 8) {
            std::vector<std::size_t> idx(dim, 0);
            for (;;) {
                Point w(dim);
                for (std::size_t j = 0; j < dim; ++j) w[j] = levels[idx[j]];
                push_normalized(out, std::move(w));
                std::size_t j = 0;
                while (j < dim && ++idx[j] == levels.size()) idx[j++] = 0;
                if (j == dim) break;
            }
        }
        StreamRng rng(0x5eed, 0);
        for (int i = 0; i < 20000; ++i) {
            Point w(dim);
            for (double& v : w) v = -std::log(rng.uniform_positive());
            push_normalized(out, std::move(w));
        }
    }
    for (const auto& prim : f.forbidden()) {
        if (const auto* ray = std::get_if<Ray>(&prim)) out.push_back(ray->direction);
        if (const auto* cap = std::get_if<AngularCap>(&prim)) out.push_back(cap->center);
    }
    return out;
}

}  // namespace

bool RiskSet::contains(std::span<const double> z) const {
    return std::visit(
        overloaded{
            [&](const JointExceed& s) {
                for (std::size_t j = 0; j < z.size(); ++j)
                    if (!(z[j] > s.u[j])) return false;
                return true;
            },
            [&](const AbsDiffExceed& s) { return std::abs(z[s.i] - z[s.j]) > s.x; },
            [&](const LinearExceed& s) {
                double v = 0.0;
                for (std::size_t j = 0; j < z.size(); ++j) v += s.w[j] * z[j];
                return v > s.x;
            },
            [&](const ComplementBox& s) {
                for (std::size_t j = 0; j < z.size(); ++j)
                    if (z[j] > s.u[j]) return true;
                return false;
            },
            [&](const DistExceed& s) { return s.cone.distance(z) > s.r; },
        },
        shape);
}

double RiskSet::entry_radius(std::span<const double> w) const {
    return std::visit(
        overloaded{
            [&](const JointExceed& s) {
                double r = 0.0;
                for (std::size_t j = 0; j < w.size(); ++j) {
                    if (!(w[j] > 0.0)) return kInf;
                    r = std::max(r, s.u[j] / w[j]);
                }
                return r;
            },
            [&](const AbsDiffExceed& s) {
                const double gap = std::abs(w[s.i] - w[s.j]);
                return gap > 0.0 ? s.x / gap : kInf;
            },
            [&](const LinearExceed& s) {
                double v = 0.0;
                for (std::size_t j = 0; j < w.size(); ++j) v += s.w[j] * w[j];
                return v > 0.0 ? s.x / v : kInf;
            },
            [&](const ComplementBox& s) {
                double r = kInf;
                for (std::size_t j = 0; j < w.size(); ++j) {
                    if (w[j] > 0.0) r = std::min(r, s.u[j] / w[j]);
                }
                return r;
            },
            [&](const DistExceed& s) {
                const double d = s.cone.distance(w);
                return d > 0.0 ? s.r / d : kInf;
            },
        },
        shape);
}

RiskSet RiskSet::scaled(double theta) const {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw ContractError("RiskSet::scaled: theta must be finite and > 0");
    RiskSetShape s = shape;
    std::visit(overloaded{
                   [&](JointExceed& v) {
                       for (double& u : v.u) u *= theta;
                   },
                   [&](AbsDiffExceed& v) { v.x *= theta; },
                   [&](LinearExceed& v) { v.x *= theta; },
                   [&](ComplementBox& v) {
                       for (double& u : v.u) u *= theta;
                   },
                   [&](DistExceed& v) { v.r *= theta; },
               },
               s);
    return RiskSet(std::move(s), id);
}

void RiskSet::validate(std::size_t dim) const {
    std::visit(
        overloaded{
            [&](const JointExceed& s) {
                require_size(s.u.size(), dim, "risk_set.u");
                double mx = 0.0;
                for (double u : s.u) {
                    if (std::isnan(u) || u < 0.0) throw ConfigError("risk_set.u: thresholds must be >= 0");
                    mx = std::max(mx, u);
                }
                if (!(mx > 0.0)) throw ConfigError("risk_set.u: at least one threshold must be > 0");
            },
            [&](const AbsDiffExceed& s) {
                if (s.i >= dim || s.j >= dim || s.i == s.j) {
                    throw ConfigError("risk_set.i/j: need two distinct coordinates below the dimension");
                }
                if (!(s.x > 0.0)) throw ConfigError("risk_set.x: must be > 0");
            },
            [&](const LinearExceed& s) {
                require_size(s.w.size(), dim, "risk_set.w");
                for (double w : s.w)
                    if (!std::isfinite(w)) throw ConfigError("risk_set.w: weights must be finite");
                if (!(s.x > 0.0)) throw ConfigError("risk_set.x: must be > 0");
            },
            [&](const ComplementBox& s) {
                require_size(s.u.size(), dim, "risk_set.u");
                bool any_finite = false;
                for (double u : s.u) {
                    if (!(u > 0.0)) throw ConfigError("risk_set.u: thresholds must be > 0");
                    any_finite = any_finite || std::isfinite(u);
                }
                if (!any_finite) throw ConfigError("risk_set.u: at least one threshold must be finite");
            },
            [&](const DistExceed& s) {
                if (s.cone.dim() != dim) throw ConfigError("risk_set.cone.dim: does not match the data dimension");
                if (!(s.r > 0.0)) throw ConfigError("risk_set.r: must be > 0");
            },
        },
        shape);
}

std::string RiskSet::type_name() const {
    return std::visit(overloaded{
                          [](const JointExceed&) { return std::string("joint_exceed"); },
                          [](const AbsDiffExceed&) { return std::string("abs_diff_exceed"); },
                          [](const LinearExceed&) { return std::string("linear_exceed"); },
                          [](const ComplementBox&) { return std::string("complement_box"); },
                          [](const DistExceed&) { return std::string("dist_exceed"); },
                      },
                      shape);
}

namespace {

struct Extent {
    double to_cone = kInf;
    double to_origin = kInf;
};

Extent extent(const RiskSet& a, const ConeSpec& f) {
    Extent e;
    for (const Point& w : probe_directions(f.dim(), f)) {
        const double r = a.entry_radius(w);
        if (!std::isfinite(r)) continue;
        // unsnapped distance: probes sit as close as 1e-12 to a face on purpose
        double d = kInf;
        for (const PrimitiveCone& c : f.forbidden()) d = std::min(d, primitive_distance(w, c, f.norm()));
        e.to_cone = std::min(e.to_cone, r * d);
        e.to_origin = std::min(e.to_origin, r * norm_of(w, f.norm()));
    }
    return e;
}

}  // namespace

double min_distance_to_cone(const RiskSet& a, const ConeSpec& f) { return extent(a, f).to_cone; }

bool bounded_away(const RiskSet& a, const ConeSpec& f) {
    const Extent e = extent(a, f);
    if (!std::isfinite(e.to_origin)) return true;
    return e.to_cone > 1e-9 * e.to_origin;
}

}  // namespace hrv
