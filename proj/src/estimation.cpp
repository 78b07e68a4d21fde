#include "hrv/estimation.hpp"

#include "hrv/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

namespace hrv {

std::string to_string(TailMethod m) { return m == TailMethod::Hill ? "hill" : "qq"; }

TailMethod tail_method_from_string(const std::string& name) {
    if (name == "hill") return TailMethod::Hill;
    if (name == "qq") return TailMethod::QQ;
    throw ConfigError("method: expected \"hill\" or \"qq\", got \"" + name + "\"");
}

OrderedDistances order_distances(const DataSet& data, const ConeSpec& cone) {
    if (data.dim() != cone.dim()) throw ContractError("data dimension does not match cone dimension");
    OrderedDistances od;
    od.n_total = data.size();
    std::vector<std::pair<double, std::size_t>> pos;
    pos.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double d = cone.distance(data.row(i));
        if (d > 0.0) {
            pos.emplace_back(d, i);
        } else {
            ++od.n_zero;
        }
    }
    std::sort(pos.begin(), pos.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    od.dist.reserve(pos.size());
    od.row.reserve(pos.size());
    for (const auto& [d, i] : pos) {
        od.dist.push_back(d);
        od.row.push_back(i);
    }
    return od;
}

namespace {

void require_k(std::size_t k, std::size_t n_pos) {
    if (k < 1 || k >= n_pos) {
        throw InsufficientExceedancesError("insufficient exceedances: need 1 <= k < n_pos, got k = " +
                                           std::to_string(k) + " with n_pos = " + std::to_string(n_pos));
    }
}

}  // namespace

double hill_estimate(std::span<const double> desc, std::size_t k) {
    require_k(k, desc.size());
    const double log_ref = std::log(desc[k]);
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += std::log(desc[i]) - log_ref;
    if (!(s > 0.0)) throw InsufficientExceedancesError("insufficient exceedances: top k distances all tied");
    return static_cast<double>(k) / s;
}

double qq_estimate(std::span<const double> desc, std::size_t k) {
    require_k(k, desc.size());
    const double kp1 = static_cast<double>(k + 1);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        mx += -std::log((i + 1) / kp1);
        my += std::log(desc[i]);
    }
    mx /= static_cast<double>(k);
    my /= static_cast<double>(k);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double dx = -std::log((i + 1) / kp1) - mx;
        sxy += dx * (std::log(desc[i]) - my);
        sxx += dx * dx;
    }
    if (!(sxx > 0.0) || !(sxy > 0.0)) {
        throw InsufficientExceedancesError("insufficient exceedances: QQ slope is not positive");
    }
    return sxx / sxy;
}

TailIndexFit fit_tail_index(const OrderedDistances& od, const ConeSpec& cone, std::size_t k, TailMethod method) {
    require_k(k, od.n_pos());
    const double a = method == TailMethod::Hill ? hill_estimate(od.dist, k) : qq_estimate(od.dist, k);
    return TailIndexFit{a, k, od.dist[k], method, od.n_pos(), od.n_zero, cone};
}

TailIndexFit fit_tail_index(const DataSet& data, const ConeSpec& cone, std::size_t k, TailMethod method) {
    return fit_tail_index(order_distances(data, cone), cone, k, method);
}

std::vector<std::size_t> sweep_grid(std::size_t n_pos, std::size_t points) {
    std::vector<std::size_t> ks;
    if (n_pos < 2 || points == 0) return ks;
    const std::size_t hi = n_pos - 1;
    const std::size_t lo = std::min<std::size_t>(10, hi);
    if (points == 1 || lo == hi) return {hi};
    const double step = std::log(static_cast<double>(hi) / lo) / static_cast<double>(points - 1);
    for (std::size_t p = 0; p < points; ++p) {
        const auto k = static_cast<std::size_t>(std::llround(lo * std::exp(step * static_cast<double>(p))));
        const std::size_t kk = std::clamp(k, lo, hi);
        if (ks.empty() || ks.back() != kk) ks.push_back(kk);
    }
    return ks;
}

std::vector<SweepPoint> hill_sweep(const OrderedDistances& od, const std::vector<std::size_t>& ks) {
    const std::size_t top = ks.empty() ? 0 : *std::max_element(ks.begin(), ks.end());
    if (!ks.empty()) require_k(top, od.n_pos());
    std::vector<double> prefix(top + 1, 0.0);
    for (std::size_t i = 0; i < top; ++i) prefix[i + 1] = prefix[i] + std::log(od.dist[i]);
    std::vector<SweepPoint> out;
    out.reserve(ks.size());
    for (std::size_t k : ks) {
        require_k(k, od.n_pos());
        const double s = prefix[k] - static_cast<double>(k) * std::log(od.dist[k]);
        out.push_back({k, s > 0.0 ? static_cast<double>(k) / s : std::numeric_limits<double>::quiet_NaN()});
    }
    return out;
}

SpectralMeasureEstimate spectral_estimate(const OrderedDistances& od, const DataSet& data, const ConeSpec& cone,
                                          std::size_t k) {
    require_k(k, od.n_pos());
    const double b = od.dist[k];
    SpectralMeasureEstimate est{{}, {}, {}, 0.0, cone, k, b};
    const double w = 1.0 / static_cast<double>(k);
    for (std::size_t i = 0; i < od.n_pos() && od.dist[i] > b; ++i) {
        auto z = data.row(od.row[i]);
        Point atom(z.begin(), z.end());
        for (double& v : atom) v /= od.dist[i];
        est.atoms.push_back(std::move(atom));
        est.rows.push_back(od.row[i]);
        est.weights.push_back(w);
    }
    est.total_mass = static_cast<double>(est.atoms.size()) * w;
    return est;
}

SpectralMeasureEstimate spectral_estimate(const DataSet& data, const ConeSpec& cone, std::size_t k) {
    return spectral_estimate(order_distances(data, cone), data, cone, k);
}

SupportEstimate cluster_support(SpectralMeasureEstimate spectral, double cluster_eps, double outlier_fraction) {
    if (!(cluster_eps > 0.0)) throw ConfigError("cluster_eps: must be > 0");
    if (!(outlier_fraction >= 0.0 && outlier_fraction < 1.0)) {
        throw ConfigError("outlier_fraction: must lie in [0, 1)");
    }
    constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
    const std::size_t n = spectral.atoms.size();
    SupportEstimate out{std::move(spectral), {}, std::vector<std::size_t>(n, kUnassigned), cluster_eps,
                        outlier_fraction};
    const auto& atoms = out.spectral.atoms;
    const Norm norm = out.spectral.cone.norm();

    // members[c]: atoms within cluster_eps of atom c taken as a center;
    // covers[a]: centers whose ball contains atom a.
    std::vector<std::vector<std::uint32_t>> members(n), covers(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t a = 0; a < n; ++a) {
            if (angular_distance(atoms[a], atoms[c], norm) <= cluster_eps) {
                members[c].push_back(static_cast<std::uint32_t>(a));
                covers[a].push_back(static_cast<std::uint32_t>(c));
            }
        }
    }
    std::vector<std::size_t> count(n);
    for (std::size_t c = 0; c < n; ++c) count[c] = members[c].size();

    std::size_t remaining = n;
    while (remaining > 0) {
        std::size_t best = kUnassigned;
        for (std::size_t c = 0; c < n; ++c) {
            if (out.cluster_of[c] != kUnassigned) continue;
            if (best == kUnassigned || count[c] > count[best] ||
                (count[c] == count[best] && std::lexicographical_compare(atoms[c].begin(), atoms[c].end(),
                                                                         atoms[best].begin(), atoms[best].end()))) {
                best = c;
            }
        }
        const std::size_t id = out.clusters.size();
        SupportCluster cl;
        cl.center = atoms[best];
        double mass = 0.0;
        for (std::uint32_t a : members[best]) {
            if (out.cluster_of[a] != kUnassigned) continue;
            out.cluster_of[a] = id;
            ++cl.count;
            mass += out.spectral.weights[a];
            cl.radius = std::max(cl.radius, angular_distance(atoms[a], cl.center, norm));
            for (std::uint32_t c : covers[a]) --count[c];
            --remaining;
        }
        const double total = out.spectral.total_mass;
        cl.mass_fraction = total > 0.0 ? mass / total : 0.0;
        cl.outlier = cl.mass_fraction < outlier_fraction;
        out.clusters.push_back(std::move(cl));
    }
    return out;
}

SupportEstimate support_estimate(const DataSet& data, const ConeSpec& cone, std::size_t k, double cluster_eps,
                                 double outlier_fraction) {
    return cluster_support(spectral_estimate(data, cone, k), cluster_eps, outlier_fraction);
}

double empirical_tail_measure(const OrderedDistances& od, const DataSet& data, const ConeSpec& cone, std::size_t k,
                              const RiskSet& region) {
    require_k(k, od.n_pos());
    region.validate(data.dim());
    if (!bounded_away(region, cone)) {
        throw ContractError("empirical_tail_measure: region is not bounded away from the forbidden cone");
    }
    const double b = od.dist[k];
    std::size_t hits = 0;
    Point scaled(data.dim());
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto z = data.row(i);
        for (std::size_t j = 0; j < z.size(); ++j) scaled[j] = z[j] / b;
        if (region.contains(scaled)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(k);
}

double empirical_tail_measure(const DataSet& data, const ConeSpec& cone, std::size_t k, const RiskSet& region) {
    return empirical_tail_measure(order_distances(data, cone), data, cone, k, region);
}

}  // namespace hrv
