#include "hrv/pipeline.hpp"

#include "hrv/error.hpp"
#include "hrv/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hrv {

LimitMeasureModel build_model(const TailIndexFit& fit, const SpectralMeasureEstimate& spectral, std::size_t n) {
    if (spectral.atoms.empty()) throw DataError("spectral estimate has no atoms");
    LimitMeasureModel m{fit.alpha_hat, spectral.atoms, {}, spectral.total_mass, fit.cone, fit.b_hat, n, fit.k};
    const double p = 1.0 / static_cast<double>(spectral.atoms.size());
    m.probs.assign(spectral.atoms.size(), p);
    return m;
}

double eval_limit_measure_unchecked(const LimitMeasureModel& model, const RiskSet& a) {
    double s = 0.0;
    for (std::size_t j = 0; j < model.atoms.size(); ++j) {
        const double r = a.entry_radius(model.atoms[j]);
        if (std::isfinite(r)) s += model.probs[j] * std::pow(r, -model.alpha_hat);
    }
    return model.mass_c * s;
}

namespace {

void check_set(const LimitMeasureModel& model, const RiskSet& a) {
    try {
        a.validate(model.cone.dim());
    } catch (const ConfigError& e) {
        throw ContractError(std::string("risk set rejected: ") + e.what());
    }
    if (!bounded_away(a, model.cone)) {
        throw ContractError("risk set " + a.type_name() + " is not bounded away from the forbidden cone");
    }
}

}  // namespace

double eval_limit_measure(const LimitMeasureModel& model, const RiskSet& a) {
    check_set(model, a);
    return eval_limit_measure_unchecked(model, a);
}

RiskEstimate risk_probability(const DataSet& data, const LimitMeasureModel& model, const RiskSet& a) {
    check_set(model, a);
    if (data.dim() != model.cone.dim()) throw ContractError("risk_probability: data dimension does not match model");
    RiskEstimate out;
    const double scale = static_cast<double>(model.k) / static_cast<double>(model.n);
    out.plug_in = scale * eval_limit_measure_unchecked(model, a.scaled(1.0 / model.b_hat));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < data.size(); ++i) hits += a.contains(data.row(i)) ? 1 : 0;
    out.empirical = static_cast<double>(hits) / static_cast<double>(data.size());
    return out;
}

std::size_t default_k(std::size_t n_pos) {
    const auto root = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n_pos))));
    return std::max<std::size_t>(1, std::min(root, n_pos / 10));
}

namespace {

// Fills fit, support, model and sweep for one level; marks it degenerate when
// there are too few positive distances.
HrvLevelReport analyse_level(std::size_t level, const DataSet& sample, const ConeSpec& cone,
                             std::optional<std::size_t> k_request, std::size_t n_model, const PipelineOptions& opts) {
    HrvLevelReport rep(level, cone);
    rep.n_sample = sample.size();
    const OrderedDistances od = order_distances(sample, cone);
    rep.n_pos = od.n_pos();
    rep.n_zero = od.n_zero;
    if (rep.n_pos < opts.min_exceedances) {
        rep.degenerate = true;
        rep.warnings.push_back("only " + std::to_string(rep.n_pos) + " positive distances (< " +
                               std::to_string(opts.min_exceedances) + "): no regular variation detected");
        return rep;
    }
    rep.k = k_request.value_or(default_k(rep.n_pos));
    const TailIndexFit fit = fit_tail_index(od, cone, rep.k, opts.method);
    SpectralMeasureEstimate spectral = spectral_estimate(od, sample, cone, rep.k);
    rep.model = build_model(fit, spectral, n_model);
    rep.support = cluster_support(std::move(spectral), opts.cluster_eps, opts.outlier_fraction);
    rep.fit = fit;
    rep.hill_sweep = hill_sweep(od, sweep_grid(rep.n_pos, opts.sweep_points));
    return rep;
}

void mark_consistency(std::vector<HrvLevelReport>& reps, const PipelineOptions& opts) {
    for (std::size_t i = 1; i < reps.size(); ++i) {
        if (reps[i].fit && reps[i - 1].fit) {
            reps[i].alpha_consistent = reps[i].fit->alpha_hat >= reps[i - 1].fit->alpha_hat - opts.alpha_slack;
            if (!*reps[i].alpha_consistent) {
                reps[i].warnings.push_back("alpha_hat decreased by more than the slack relative to the previous level");
            }
        }
    }
}

}  // namespace

std::vector<HrvLevelReport> run_sequence(const DataSet& data, const std::vector<ConeSpec>& cones,
                                         const std::vector<std::size_t>& ks, const PipelineOptions& opts) {
    if (cones.empty()) throw ConfigError("cones: need at least one cone");
    if (!ks.empty() && ks.size() != cones.size()) {
        throw ConfigError("ks: expected " + std::to_string(cones.size()) + " entries, got " + std::to_string(ks.size()));
    }
    for (std::size_t i = 0; i < cones.size(); ++i) {
        if (cones[i].dim() != data.dim()) {
            throw ConfigError("cones[" + std::to_string(i) + "].dim: does not match the data dimension");
        }
        if (i > 0) {
            const bool covers = cones[i].norm() == cones[i - 1].norm() && cone_covers(cones[i], cones[i - 1]);
            if (!covers || cone_covers(cones[i - 1], cones[i])) {
                throw ConfigError("cones[" + std::to_string(i) + "]: not strictly nested (must contain cones[" +
                                  std::to_string(i - 1) + "] and be larger, same norm)");
            }
        }
    }
    std::vector<HrvLevelReport> reps;
    for (std::size_t i = 0; i < cones.size(); ++i) {
        std::optional<std::size_t> k;
        if (!ks.empty()) k = ks[i];
        reps.push_back(analyse_level(i, data, cones[i], k, data.size(), opts));
    }
    mark_consistency(reps, opts);
    return reps;
}

std::vector<HrvLevelReport> discover_cones(const DataSet& data, const ConeSpec& base, std::optional<std::size_t> k,
                                           std::size_t max_levels, const PipelineOptions& opts,
                                           const std::vector<RiskSet>& risk_sets) {
    if (max_levels < 1) throw ConfigError("max_levels: must be >= 1");
    if (base.dim() != data.dim()) throw ConfigError("cone.dim: does not match the data dimension");
    for (const auto& a : risk_sets) a.validate(data.dim());

    std::vector<HrvLevelReport> reps;
    DataSet sample = data;
    ConeSpec cone = base;
    for (std::size_t level = 0; level < max_levels; ++level) {
        std::optional<std::size_t> k_level;
        if (k) {
            const std::size_t n_pos = order_distances(sample, cone).n_pos();
            if (*k < n_pos) k_level = k;
        }
        reps.push_back(analyse_level(level, sample, cone, k_level, data.size(), opts));
        const HrvLevelReport& rep = reps.back();
        if (rep.degenerate || level + 1 == max_levels) break;

        std::vector<PrimitiveCone> rays;
        std::vector<AngularCap> caps;
        for (const auto& cl : rep.support->clusters) {
            if (cl.outlier) continue;
            rays.push_back(make_ray(cl.center));
            caps.push_back(make_cap(cl.center, opts.cluster_eps));
        }
        if (rays.empty()) break;
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < sample.size(); ++i) {
            bool peeled = false;
            for (const auto& cap : caps) {
                if (cap_contains(sample.row(i), cap, cone.norm())) {
                    peeled = true;
                    break;
                }
            }
            if (!peeled) keep.push_back(i);
        }
        if (keep.empty()) {
            reps.emplace_back(level + 1, augment_cone(cone, rays));
            reps.back().degenerate = true;
            reps.back().warnings.push_back("no points left after peeling");
            break;
        }
        sample = sample.subset(keep);
        cone = augment_cone(cone, rays);
    }
    mark_consistency(reps, opts);

    for (const auto& a : risk_sets) {
        bool any_mass = false;
        for (const auto& rep : reps) {
            if (!rep.model || !bounded_away(a, rep.model->cone)) continue;
            if (eval_limit_measure_unchecked(*rep.model, a) > 0.0) any_mass = true;
        }
        if (!any_mass) {
            reps.back().warnings.push_back("risk set " + (a.id.empty() ? a.type_name() : a.id) +
                                           " has zero plug-in mass at every discovered level");
        }
    }
    return reps;
}

std::vector<CevGridPoint> default_cev_grid() {
    std::vector<CevGridPoint> g;
    for (double x : {0.0, 0.5, 1.0, 2.0, 4.0})
        for (double y : {0.5, 1.0, 2.0, 4.0}) g.push_back({x, y});
    return g;
}

std::vector<CevRow> cev_two_normalizations(const DataSet& data, const std::vector<CevGridPoint>& grid, double t) {
    if (data.dim() != 2) throw ContractError("cev_two_normalizations: data must be two-dimensional");
    if (!(t >= 10.0) || !std::isfinite(t)) throw ContractError("cev_two_normalizations: t must be >= 10");
    for (const auto& g : grid) {
        if (!(g.x >= 0.0) || !(g.y > 0.0)) throw ContractError("cev_two_normalizations: need x >= 0 and y > 0");
    }
    const double root = std::sqrt(t);
    std::vector<std::size_t> hit_t(grid.size(), 0), hit_root(grid.size(), 0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto z = data.row(i);
        const double eta = z[1] / t;
        const double xi_t = z[0] / t;
        const double xi_root = z[0] / root;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            if (!(eta > grid[g].y)) continue;
            if (xi_t <= grid[g].x) ++hit_t[g];
            if (xi_root <= grid[g].x) ++hit_root[g];
        }
    }
    const double scale = t / static_cast<double>(data.size());
    std::vector<CevRow> rows;
    rows.reserve(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        rows.push_back({grid[g].x, grid[g].y, scale * static_cast<double>(hit_t[g]), cev_nu1(grid[g].x, grid[g].y),
                        scale * static_cast<double>(hit_root[g]), cev_nu2(grid[g].x, grid[g].y)});
    }
    return rows;
}

}  // namespace hrv
