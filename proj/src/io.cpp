#include "hrv/io.hpp"

#include "hrv/error.hpp"
#include "hrv/text.hpp"

#include <cmath>
#include <limits>

namespace hrv {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

const json& field(const json& j, const std::string& name, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(name);
    if (it == j.end()) fail(path + "." + name, "missing");
    return *it;
}

double number(const json& j, const std::string& path, bool allow_inf = false) {
    if (j.is_number()) return j.get<double>();
    if (allow_inf && (j.is_null() || (j.is_string() && j.get<std::string>() == "inf"))) {
        return std::numeric_limits<double>::infinity();
    }
    fail(path, allow_inf ? "expected a number or \"inf\"" : "expected a number");
}

std::size_t count(const json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 0) fail(path, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

Point numbers(const json& j, const std::string& path, bool allow_inf = false) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    Point out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]", allow_inf));
    return out;
}

json number_out(double v) {
    if (std::isinf(v) && v > 0) return "inf";
    return v;
}

json numbers_out(const Point& p) {
    json a = json::array();
    for (double v : p) a.push_back(number_out(v));
    return a;
}

// Re-throws library validation errors with the field path in front.
template <class F>
auto with_path(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        if (msg.rfind(path, 0) == 0) throw;
        throw ConfigError(path + ": " + msg);
    }
}

PrimitiveCone primitive_from_json(const json& j, std::size_t dim, const std::string& path) {
    const json& t = field(j, "type", path);
    if (!t.is_string()) fail(path + ".type", "expected a string");
    const std::string type = t.get<std::string>();
    if (type == "origin") return Origin{};
    if (type == "coord_hyperplane") return CoordHyperplaneUnion{count(field(j, "l", path), path + ".l")};
    if (type == "subspace") {
        const json& m = field(j, "mask", path);
        if (!m.is_array() || m.size() != dim) fail(path + ".mask", "expected an array of " + std::to_string(dim) + " flags");
        AxisAlignedSubspace s;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i].is_boolean()) {
                s.keep.push_back(m[i].get<bool>());
            } else if (m[i].is_number_integer() && (m[i] == 0 || m[i] == 1)) {
                s.keep.push_back(m[i] == 1);
            } else {
                fail(path + ".mask[" + std::to_string(i) + "]", "expected true/false or 0/1");
            }
        }
        return s;
    }
    if (type == "ray") {
        Point d = numbers(field(j, "direction", path), path + ".direction");
        return with_path(path + ".direction", [&] { return PrimitiveCone(make_ray(std::move(d))); });
    }
    if (type == "cap") {
        Point c = numbers(field(j, "center", path), path + ".center");
        const double eps = number(field(j, "eps", path), path + ".eps");
        return with_path(path, [&] { return PrimitiveCone(make_cap(std::move(c), eps)); });
    }
    fail(path + ".type", "unknown cone type \"" + type + "\"");
}

}  // namespace

json cone_to_json(const ConeSpec& cone) {
    json f = json::array();
    for (const auto& prim : cone.forbidden()) {
        std::visit(
            [&](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, Origin>) {
                    f.push_back({{"type", "origin"}});
                } else if constexpr (std::is_same_v<T, CoordHyperplaneUnion>) {
                    f.push_back({{"type", "coord_hyperplane"}, {"l", p.l}});
                } else if constexpr (std::is_same_v<T, AxisAlignedSubspace>) {
                    json mask = json::array();
                    for (bool b : p.keep) mask.push_back(b);
                    f.push_back({{"type", "subspace"}, {"mask", mask}});
                } else if constexpr (std::is_same_v<T, Ray>) {
                    f.push_back({{"type", "ray"}, {"direction", numbers_out(p.direction)}});
                } else {
                    f.push_back({{"type", "cap"}, {"center", numbers_out(p.center)}, {"eps", p.eps}});
                }
            },
            prim);
    }
    return {{"dim", cone.dim()}, {"norm", to_string(cone.norm())}, {"forbidden", f}};
}

ConeSpec cone_from_json(const json& j, const std::string& path) {
    const std::size_t dim = count(field(j, "dim", path), path + ".dim");
    const json& n = field(j, "norm", path);
    if (!n.is_string()) fail(path + ".norm", "expected \"l1\", \"l2\" or \"linf\"");
    const Norm norm = with_path(path + ".norm", [&] { return norm_from_string(n.get<std::string>()); });
    const json& f = field(j, "forbidden", path);
    if (!f.is_array()) fail(path + ".forbidden", "expected an array");
    std::vector<PrimitiveCone> prims;
    for (std::size_t i = 0; i < f.size(); ++i) {
        prims.push_back(primitive_from_json(f[i], dim, path + ".forbidden[" + std::to_string(i) + "]"));
    }
    return with_path(path, [&] { return ConeSpec(dim, norm, std::move(prims)); });
}

json risk_set_to_json(const RiskSet& a) {
    json j = std::visit(
        [](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, JointExceed>) {
                return {{"type", "joint_exceed"}, {"u", numbers_out(s.u)}};
            } else if constexpr (std::is_same_v<T, AbsDiffExceed>) {
                return {{"type", "abs_diff_exceed"}, {"i", s.i}, {"j", s.j}, {"x", number_out(s.x)}};
            } else if constexpr (std::is_same_v<T, LinearExceed>) {
                return {{"type", "linear_exceed"}, {"w", numbers_out(s.w)}, {"x", number_out(s.x)}};
            } else if constexpr (std::is_same_v<T, ComplementBox>) {
                return {{"type", "complement_box"}, {"u", numbers_out(s.u)}};
            } else {
                return {{"type", "dist_exceed"}, {"cone", cone_to_json(s.cone)}, {"r", number_out(s.r)}};
            }
        },
        a.shape);
    if (!a.id.empty()) j["id"] = a.id;
    return j;
}

RiskSet risk_set_from_json(const json& j, const std::string& path) {
    const json& t = field(j, "type", path);
    if (!t.is_string()) fail(path + ".type", "expected a string");
    const std::string type = t.get<std::string>();
    std::string id;
    if (j.contains("id")) {
        if (!j["id"].is_string()) fail(path + ".id", "expected a string");
        id = j["id"].get<std::string>();
    }
    if (type == "joint_exceed") return RiskSet(JointExceed{numbers(field(j, "u", path), path + ".u", true)}, id);
    if (type == "complement_box") return RiskSet(ComplementBox{numbers(field(j, "u", path), path + ".u", true)}, id);
    if (type == "abs_diff_exceed") {
        // coordinates default to the first pair
        const std::size_t i = j.contains("i") ? count(j["i"], path + ".i") : 0;
        const std::size_t jj = j.contains("j") ? count(j["j"], path + ".j") : 1;
        return RiskSet(AbsDiffExceed{i, jj, number(field(j, "x", path), path + ".x", true)}, id);
    }
    if (type == "linear_exceed") {
        return RiskSet(LinearExceed{numbers(field(j, "w", path), path + ".w"), number(field(j, "x", path), path + ".x", true)},
                       id);
    }
    if (type == "dist_exceed") {
        return RiskSet(DistExceed{cone_from_json(field(j, "cone", path), path + ".cone"),
                                  number(field(j, "r", path), path + ".r", true)},
                       id);
    }
    fail(path + ".type", "unknown risk set type \"" + type + "\"");
}

std::vector<RiskSet> risk_sets_from_json(const json& j, const std::string& path) {
    std::vector<RiskSet> out;
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(risk_set_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    } else {
        out.push_back(risk_set_from_json(j, path));
    }
    return out;
}

json fit_to_json(const TailIndexFit& fit) {
    return {{"alpha_hat", fit.alpha_hat}, {"k", fit.k},         {"b_hat", fit.b_hat},
            {"method", to_string(fit.method)}, {"n_pos", fit.n_pos}, {"n_zero", fit.n_zero},
            {"cone", cone_to_json(fit.cone)}};
}

json cluster_to_json(const SupportCluster& c, std::size_t id) {
    return {{"id", id},
            {"center", numbers_out(c.center)},
            {"radius", c.radius},
            {"mass_fraction", c.mass_fraction},
            {"count", c.count},
            {"outlier", c.outlier}};
}

json model_to_json(const LimitMeasureModel& m) {
    return {{"alpha_hat", m.alpha_hat}, {"mass_c", m.mass_c}, {"b_hat", m.b_hat},
            {"n", m.n},                 {"k", m.k},           {"atom_count", m.atoms.size()}};
}

json level_report_to_json(const HrvLevelReport& r) {
    json j = {{"level", r.level},   {"cone", cone_to_json(r.cone)}, {"n_sample", r.n_sample},
              {"n_pos", r.n_pos},   {"n_zero", r.n_zero},           {"k", r.k},
              {"degenerate", r.degenerate}};
    j["fit"] = r.fit ? fit_to_json(*r.fit) : json(nullptr);
    if (r.support) {
        const auto& s = r.support->spectral;
        j["spectral"] = {{"atom_count", s.atoms.size()}, {"total_mass", s.total_mass}, {"k", s.k}, {"b_hat", s.b_hat}};
        json cl = json::array();
        for (std::size_t i = 0; i < r.support->clusters.size(); ++i) cl.push_back(cluster_to_json(r.support->clusters[i], i));
        j["support"] = {{"cluster_eps", r.support->cluster_eps},
                        {"outlier_fraction", r.support->outlier_fraction},
                        {"clusters", cl}};
    } else {
        j["spectral"] = nullptr;
        j["support"] = nullptr;
    }
    j["model"] = r.model ? model_to_json(*r.model) : json(nullptr);
    j["alpha_consistent"] = r.alpha_consistent ? json(*r.alpha_consistent) : json(nullptr);
    j["warnings"] = r.warnings;
    return j;
}

std::string atoms_csv(const SpectralMeasureEstimate& s, const std::vector<std::size_t>* cluster_of) {
    const std::size_t d = s.cone.dim();
    std::string out;
    for (std::size_t j = 0; j < d; ++j) out += "w" + std::to_string(j + 1) + ",";
    out += "weight,cluster_id\n";
    for (std::size_t i = 0; i < s.atoms.size(); ++i) {
        for (double v : s.atoms[i]) out += format_double(v) + ",";
        out += format_double(s.weights[i]) + ",";
        out += cluster_of ? std::to_string((*cluster_of)[i]) : std::string("-1");
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& sweep) {
    std::string out = "k,alpha_hat\n";
    for (const auto& p : sweep) out += std::to_string(p.k) + "," + format_double(p.alpha_hat) + "\n";
    return out;
}

std::string spectral_histogram_csv(const SpectralMeasureEstimate& s, std::size_t bins) {
    std::vector<double> mass(bins, 0.0);
    for (std::size_t i = 0; i < s.atoms.size(); ++i) {
        double tot = 0.0;
        for (double v : s.atoms[i]) tot += v;
        const double a = tot > 0.0 ? s.atoms[i][0] / tot : 0.0;
        const auto b = std::min(bins - 1, static_cast<std::size_t>(a * static_cast<double>(bins)));
        mass[b] += s.weights[i];
    }
    std::string out = "bin_lo,bin_hi,mass\n";
    for (std::size_t b = 0; b < bins; ++b) {
        out += format_double(static_cast<double>(b) / bins) + "," + format_double(static_cast<double>(b + 1) / bins) +
               "," + format_double(mass[b]) + "\n";
    }
    return out;
}

std::string cev_csv(const std::vector<CevRow>& rows) {
    std::string out = "x,y,emp_t,nu1,emp_sqrt_t,nu2\n";
    for (const auto& r : rows) {
        out += format_double(r.x) + "," + format_double(r.y) + "," + format_double(r.emp_t) + "," +
               format_double(r.nu1) + "," + format_double(r.emp_sqrt_t) + "," + format_double(r.nu2) + "\n";
    }
    return out;
}

json load_json_file(const std::string& path, const std::string& what) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const DataError& e) {
        throw ConfigError(what + ": " + e.what());
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(what + ": invalid JSON in " + path + " (" + e.what() + ")");
    }
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace hrv
