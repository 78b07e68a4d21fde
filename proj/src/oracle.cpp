#include "hrv/oracle.hpp"

#include "hrv/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace hrv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Pareto(beta) on [1, inf)
double pareto_sf(double s, double beta) { return s <= 1.0 ? 1.0 : std::pow(s, -beta); }
double pareto_cdf(double s, double beta) { return 1.0 - pareto_sf(s, beta); }

ConeSpec linf(std::vector<PrimitiveCone> f) { return ConeSpec(2, Norm::Linf, std::move(f)); }

// A limit measure made of homogeneous masses on finitely many rays:
// nu({t d_i : t > s}) = weight_i s^(-alpha).
struct RayMass {
    Point direction;
    double weight;
};

double ray_masses_nu(const std::vector<RayMass>& masses, double alpha, const RiskSet& a) {
    double s = 0.0;
    for (const auto& m : masses) {
        const double r = a.entry_radius(m.direction);
        if (std::isfinite(r)) s += m.weight * std::pow(r, -alpha);
    }
    return s;
}

std::string describe(const OracleSpec& spec) {
    return spec.scenario.name() + " level " + std::to_string(spec.level);
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

// Integral over [a, b] of a function that is smooth between the given
// breakpoints.
double integrate_pieces(const std::function<double(double)>& f, double a, double b, std::vector<double> cuts) {
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    double prev = a;
    for (double c : cuts) {
        c = std::clamp(c, a, b);
        if (c > prev) {
            double err = 0.0;
            total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, prev, c, 15, 1e-13, &err);
            prev = c;
        }
    }
    return total;
}

// Breakpoints of g on [a, b]: sign changes of g - level and changes between
// finite and infinite values, located by bisection from a uniform scan.
void add_crossings(const std::function<double(double)>& g, double level, double a, double b, std::vector<double>& out) {
    constexpr int kScan = 2048;
    auto state = [&](double u) {
        const double v = g(u);
        if (!std::isfinite(v)) return 2;
        return v > level ? 1 : 0;
    };
    double u0 = a;
    int s0 = state(u0);
    for (int i = 1; i <= kScan; ++i) {
        const double u1 = a + (b - a) * i / kScan;
        const int s1 = state(u1);
        if (s1 != s0) {
            double lo = u0, hi = u1;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                (state(mid) == s0 ? lo : hi) = mid;
            }
            out.push_back(0.5 * (lo + hi));
        }
        u0 = u1;
        s0 = s1;
    }
}

// ---------------------------------------------------------------------------
// Branches
// ---------------------------------------------------------------------------

// R * direction with R ~ Pareto(beta)
double ray_branch(const RiskSet& a, const Point& direction, double beta) {
    const double r = a.entry_radius(direction);
    return std::isfinite(r) ? pareto_sf(r, beta) : 0.0;
}

// Kinks of u -> r_A((u, 1 - u)) that come from the set's formula.
std::vector<double> formula_kinks(const RiskSet& a) {
    std::vector<double> k;
    if (const auto* s = std::get_if<JointExceed>(&a.shape)) {
        if (s->u[0] + s->u[1] > 0.0) k.push_back(s->u[0] / (s->u[0] + s->u[1]));
    } else if (const auto* s = std::get_if<ComplementBox>(&a.shape)) {
        if (std::isfinite(s->u[0]) && std::isfinite(s->u[1])) k.push_back(s->u[0] / (s->u[0] + s->u[1]));
    } else if (std::holds_alternative<AbsDiffExceed>(a.shape)) {
        k.push_back(0.5);
    } else if (const auto* s = std::get_if<LinearExceed>(&a.shape)) {
        if (s->w[1] != s->w[0]) k.push_back(s->w[1] / (s->w[1] - s->w[0]));
    } else if (const auto* s = std::get_if<DistExceed>(&a.shape)) {
        for (const auto& prim : s->cone.forbidden()) {
            if (const auto* ray = std::get_if<Ray>(&prim)) k.push_back(ray->direction[0]);
        }
    }
    return k;
}

// R * (U, 1 - U), R ~ Pareto(beta), U uniform on the union of `intervals`.
double mixed_direction_branch(const RiskSet& a, double beta, const std::vector<std::pair<double, double>>& intervals) {
    auto r_of = [&](double u) { return a.entry_radius(Point{u, 1.0 - u}); };
    auto f = [&](double u) {
        const double r = r_of(u);
        return std::isfinite(r) ? pareto_sf(r, beta) : 0.0;
    };
    double total_len = 0.0;
    for (const auto& [lo, hi] : intervals) total_len += hi - lo;
    double s = 0.0;
    for (const auto& [lo, hi] : intervals) {
        std::vector<double> cuts = formula_kinks(a);
        add_crossings(r_of, 1.0, lo, hi, cuts);
        s += integrate_pieces(f, lo, hi, cuts);
    }
    return s / total_len;
}

// (X, Y) independent, X ~ Pareto(bx), Y ~ Pareto(by).
double pair_branch(const RiskSet& a, double bx, double by) {
    if (const auto* s = std::get_if<JointExceed>(&a.shape)) {
        return pareto_sf(s->u[0], bx) * pareto_sf(s->u[1], by);
    }
    if (const auto* s = std::get_if<ComplementBox>(&a.shape)) {
        const double fx = std::isfinite(s->u[0]) ? pareto_cdf(s->u[0], bx) : 1.0;
        const double fy = std::isfinite(s->u[1]) ? pareto_cdf(s->u[1], by) : 1.0;
        return 1.0 - fx * fy;
    }
    // Integrate over v = P(Y > y) in (0, 1], y = v^(-1/by).
    auto y_of = [by](double v) { return std::pow(v, -1.0 / by); };
    auto v_of = [by](double y) { return y <= 1.0 ? 1.0 : std::pow(y, -by); };
    if (const auto* s = std::get_if<AbsDiffExceed>(&a.shape)) {
        // With (i, j) = (1, 0) the roles swap, which leaves |X - Y| unchanged.
        const double x = s->x;
        auto f = [&](double v) {
            const double y = y_of(v);
            return pareto_sf(y + x, bx) + (y - x > 1.0 ? pareto_cdf(y - x, bx) : 0.0);
        };
        return integrate_pieces(f, 0.0, 1.0, {v_of(x + 1.0)});
    }
    if (const auto* s = std::get_if<LinearExceed>(&a.shape)) {
        const double w1 = s->w[0], w2 = s->w[1], x = s->x;
        auto f = [&](double v) {
            const double y = y_of(v);
            const double c = x - w2 * y;  // need w1 X > c
            if (w1 > 0.0) return pareto_sf(c / w1, bx);
            if (w1 < 0.0) return c / w1 > 1.0 ? pareto_cdf(c / w1, bx) : 0.0;
            return c < 0.0 ? 1.0 : 0.0;
        };
        std::vector<double> cuts;
        if (w2 != 0.0) {
            if (w1 != 0.0) cuts.push_back(v_of((x - w1) / w2));
            cuts.push_back(v_of(x / w2));
        }
        return integrate_pieces(f, 0.0, 1.0, cuts);
    }
    throw NoOracleError("distance-exceedance set on an independent pair branch");
}

// (sqrt(Y), Y), Y ~ Pareto(1). With s = sqrt(Y) ~ Pareto(2) every set is a
// union of s-intervals.
double curve_branch(const RiskSet& a) {
    auto sf = [](double s) { return pareto_sf(s, 2.0); };
    if (const auto* st = std::get_if<JointExceed>(&a.shape)) {
        return sf(std::max(st->u[0], std::sqrt(st->u[1])));
    }
    if (const auto* st = std::get_if<ComplementBox>(&a.shape)) {
        return sf(std::min(st->u[0], std::sqrt(st->u[1])));
    }
    if (const auto* st = std::get_if<AbsDiffExceed>(&a.shape)) {
        // Y - sqrt(Y) > x  <=>  s > (1 + sqrt(1 + 4x)) / 2
        return sf(0.5 * (1.0 + std::sqrt(1.0 + 4.0 * st->x)));
    }
    if (const auto* st = std::get_if<LinearExceed>(&a.shape)) {
        // q(s) = w2 s^2 + w1 s - x > 0 on s >= 1
        const double qa = st->w[1], qb = st->w[0], qc = -st->x;
        auto q = [&](double s) { return (qa * s + qb) * s + qc; };
        std::vector<double> roots;
        if (qa == 0.0) {
            if (qb != 0.0) roots.push_back(-qc / qb);
        } else {
            const double disc = qb * qb - 4.0 * qa * qc;
            if (disc >= 0.0) {
                const double sq = std::sqrt(disc);
                const double t = -0.5 * (qb + std::copysign(sq, qb));
                if (t != 0.0) {
                    roots.push_back(t / qa);
                    roots.push_back(qc / t);
                } else {
                    roots.push_back(0.0);
                }
            }
        }
        std::vector<double> pts{1.0};
        for (double r : roots)
            if (r > 1.0) pts.push_back(r);
        std::sort(pts.begin(), pts.end());
        pts.push_back(kInf);
        double p = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double mid = std::isfinite(pts[i + 1]) ? 0.5 * (pts[i] + pts[i + 1]) : 2.0 * pts[i] + 1.0;
            if (q(mid) > 0.0) p += sf(pts[i]) - (std::isfinite(pts[i + 1]) ? sf(pts[i + 1]) : 0.0);
        }
        return p;
    }
    throw NoOracleError("distance-exceedance set on the (sqrt Y, Y) branch");
}

bool empty_set(const RiskSet& a) {
    return std::visit(
        [](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, JointExceed>) {
                return std::any_of(s.u.begin(), s.u.end(), [](double u) { return std::isinf(u); });
            } else if constexpr (std::is_same_v<T, ComplementBox>) {
                return std::all_of(s.u.begin(), s.u.end(), [](double u) { return std::isinf(u); });
            } else if constexpr (std::is_same_v<T, DistExceed>) {
                return std::isinf(s.r);
            } else {
                return std::isinf(s.x);
            }
        },
        a.shape);
}

}  // namespace

// ============================================================================
// Limit measures
// ============================================================================

double oracle_alpha(const OracleSpec& spec) {
    const auto& sc = spec.scenario;
    const std::size_t l = spec.level;
    switch (sc.kind) {
        case ScenarioKind::IidPareto:
            if (l < sc.dim) return static_cast<double>(l + 1) * sc.alpha;
            break;
        case ScenarioKind::FullDep:
            if (l <= 1) return l == 0 ? 1.0 : 2.0;
            break;
        case ScenarioKind::NonstdMix: {
            constexpr double a[] = {1.0, 3.0, 4.0, 5.0};
            if (l < 4) return a[l];
            break;
        }
        case ScenarioKind::InfiniteCones:
            if (l <= 2 && l + 2 <= sc.m) return 2.0 - std::ldexp(1.0, -static_cast<int>(l));
            break;
        case ScenarioKind::CevMix:
        case ScenarioKind::Diversify:
            if (l == 0) return 1.0;
            break;
    }
    throw NoOracleError("tail index for " + describe(spec));
}

double oracle_nu(const OracleSpec& spec, const RiskSet& a) {
    const auto& sc = spec.scenario;
    a.validate(sc.dimension());
    const std::size_t l = spec.level;
    const double alpha = oracle_alpha(spec);
    switch (sc.kind) {
        case ScenarioKind::IidPareto: {
            const std::size_t d = sc.dim;
            if (l == 0) {
                std::vector<RayMass> axes;
                for (std::size_t j = 0; j < d; ++j) {
                    Point e(d, 0.0);
                    e[j] = 1.0;
                    axes.push_back({e, 1.0});
                }
                return ray_masses_nu(axes, alpha, a);
            }
            if (l + 1 == d) {
                if (const auto* s = std::get_if<JointExceed>(&a.shape)) {
                    double p = 1.0;
                    for (double u : s->u) p *= std::pow(u, -sc.alpha);
                    return p;
                }
            }
            break;
        }
        case ScenarioKind::FullDep:
            if (l == 0) return ray_masses_nu({{{1.0, 1.0}, 0.5}}, alpha, a);
            return ray_masses_nu({{{1.0, 0.0}, 0.5}, {{0.0, 1.0}, 0.5}}, alpha, a);
        case ScenarioKind::NonstdMix:
            if (l == 0) return ray_masses_nu({{{1.0, 0.0}, 0.5}}, alpha, a);
            if (l == 1) return ray_masses_nu({{{1.0, 1.0}, 0.5}}, alpha, a);
            if (l == 2) return ray_masses_nu({{{0.0, 1.0}, 0.5}}, alpha, a);
            if (const auto* s = std::get_if<JointExceed>(&a.shape)) {
                return 0.5 / s->u[0] * std::pow(s->u[1], -4.0);
            }
            break;
        case ScenarioKind::InfiniteCones: {
            const double w = infinite_cones_term_probability(l + 2, sc.m);
            return ray_masses_nu({{{1.0, std::ldexp(1.0, static_cast<int>(l))}, w}}, alpha, a);
        }
        case ScenarioKind::CevMix:
            return ray_masses_nu({{{1.0, 1.0}, 0.5}, {{0.0, 1.0}, 0.5}}, alpha, a);
        case ScenarioKind::Diversify:
            break;
    }
    throw NoOracleError(a.type_name() + " under " + describe(spec));
}

std::vector<ConeSpec> canonical_cones(const ScenarioId& sc) {
    const PrimitiveCone origin = Origin{};
    const PrimitiveCone diag = make_ray({1.0, 1.0});
    switch (sc.kind) {
        case ScenarioKind::IidPareto: {
            std::vector<ConeSpec> out;
            for (std::size_t l = 1; l <= sc.dim; ++l) {
                out.emplace_back(sc.dim, Norm::Linf, std::vector<PrimitiveCone>{CoordHyperplaneUnion{l}});
            }
            return out;
        }
        case ScenarioKind::FullDep: return {linf({origin}), linf({origin, diag})};
        case ScenarioKind::NonstdMix: {
            const PrimitiveCone x_axis = make_subspace(2, {0});
            const PrimitiveCone y_axis = make_subspace(2, {1});
            return {linf({origin}), linf({origin, x_axis}), linf({origin, x_axis, diag}),
                    linf({origin, x_axis, diag, y_axis})};
        }
        case ScenarioKind::InfiniteCones:
            return {linf({origin}), linf({origin, diag}), linf({origin, diag, make_ray({1.0, 2.0})})};
        case ScenarioKind::CevMix:
        case ScenarioKind::Diversify: return {linf({origin})};
    }
    return {};
}

// ============================================================================
// Finite-sample probabilities
// ============================================================================

double oracle_probability(const ScenarioId& sc, const RiskSet& a) {
    sc.validate();
    a.validate(sc.dimension());
    if (empty_set(a)) return 0.0;
    switch (sc.kind) {
        case ScenarioKind::IidPareto: {
            if (const auto* s = std::get_if<JointExceed>(&a.shape)) {
                double p = 1.0;
                for (double u : s->u) p *= pareto_sf(u, sc.alpha);
                return p;
            }
            if (const auto* s = std::get_if<ComplementBox>(&a.shape)) {
                double f = 1.0;
                for (double u : s->u) f *= std::isfinite(u) ? pareto_cdf(u, sc.alpha) : 1.0;
                return 1.0 - f;
            }
            if (sc.dim == 2) return pair_branch(a, sc.alpha, sc.alpha);
            break;
        }
        case ScenarioKind::FullDep:
            return 0.5 * ray_branch(a, {1.0, 1.0}, 1.0) + 0.5 * pair_branch(a, 2.0, 2.0);
        case ScenarioKind::NonstdMix:
            return 0.5 * pair_branch(a, 1.0, 4.0) + 0.5 * ray_branch(a, {1.0, 1.0}, 3.0);
        case ScenarioKind::Diversify:
            return 0.5 * mixed_direction_branch(a, 1.0, {{0.0, 1.0 / 3.0}, {2.0 / 3.0, 1.0}}) +
                   0.5 * mixed_direction_branch(a, 2.0, {{1.0 / 3.0, 2.0 / 3.0}});
        case ScenarioKind::InfiniteCones: {
            double p = infinite_cones_term_probability(1, sc.m) * pair_branch(a, 2.0, 2.0);
            for (std::size_t t = 2; t <= sc.m; ++t) {
                const int term = static_cast<int>(t) - 1;
                const double beta = 2.0 - std::ldexp(1.0, -(term - 1));
                p += infinite_cones_term_probability(t, sc.m) *
                     ray_branch(a, {1.0, std::ldexp(1.0, term - 1)}, beta);
            }
            return p;
        }
        case ScenarioKind::CevMix:
            return 0.5 * ray_branch(a, {1.0, 1.0}, 1.0) + 0.5 * curve_branch(a);
    }
    throw NoOracleError(a.type_name() + " probability for " + sc.name());
}

double full_dep_level0_box(double u, double v) { return 0.5 / std::min(u, v); }

double full_dep_level1_box(double u, double v, double x) {
    return 0.5 * (std::pow(std::max(u, x), -2.0) + std::pow(std::max(v, x), -2.0));
}

double cev_nu1(double x, double y) {
    const double first = x > 0.0 ? std::max(0.0, 1.0 / y - 1.0 / x) : 0.0;
    return 0.5 * first + 0.5 / y;
}

double cev_nu2(double x, double y) {
    if (!(x > 0.0)) return 0.0;
    return 0.5 * std::max(0.0, 1.0 / y - 1.0 / (x * x));
}

bool diversify_level0_support_contains(double angle) {
    return (angle >= 0.0 && angle <= 1.0 / 3.0) || (angle >= 2.0 / 3.0 && angle <= 1.0);
}

}  // namespace hrv
