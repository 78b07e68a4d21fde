#include "hrv/cli.hpp"

#include "hrv/error.hpp"
#include "hrv/io.hpp"
#include "hrv/oracle.hpp"
#include "hrv/pipeline.hpp"
#include "hrv/text.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <ostream>

namespace hrv {

// ============================================================================
// RunConfig <-> JSON
// ============================================================================

json run_config_to_json(const RunConfig& c) {
    auto opt = [](const auto& o) { return o ? json(*o) : json(nullptr); };
    return {{"command", c.command},     {"in", c.in},
            {"out", c.out},             {"cone", c.cone},
            {"cones", c.cones},         {"risk_set", c.risk_set},
            {"config", c.config},       {"scenario", opt(c.scenario)},
            {"n", opt(c.n)},            {"k", opt(c.k)},
            {"ks", c.ks},               {"seed", c.seed},
            {"cluster_eps", c.cluster_eps}, {"alpha", c.alpha},
            {"dim", c.dim},             {"m", c.m},
            {"method", c.method},       {"t", opt(c.t)},
            {"max_levels", c.max_levels}};
}

RunConfig run_config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config: expected an object");
    RunConfig c;
    auto get = [&](const char* name, auto& dst) {
        if (!j.contains(name)) return;
        try {
            j.at(name).get_to(dst);
        } catch (const json::exception&) {
            throw ConfigError(std::string("config.") + name + ": wrong type");
        }
    };
    auto get_opt = [&](const char* name, auto& dst) {
        if (!j.contains(name) || j.at(name).is_null()) {
            dst.reset();
            return;
        }
        typename std::decay_t<decltype(dst)>::value_type v{};
        get(name, v);
        dst = v;
    };
    get("command", c.command);
    get("in", c.in);
    get("out", c.out);
    get("cone", c.cone);
    get("cones", c.cones);
    get("risk_set", c.risk_set);
    get("config", c.config);
    get_opt("scenario", c.scenario);
    get_opt("n", c.n);
    get_opt("k", c.k);
    get("ks", c.ks);
    get("seed", c.seed);
    get("cluster_eps", c.cluster_eps);
    get("alpha", c.alpha);
    get("dim", c.dim);
    get("m", c.m);
    get("method", c.method);
    get_opt("t", c.t);
    get("max_levels", c.max_levels);
    return c;
}

namespace {

// ============================================================================
// Helpers
// ============================================================================

ScenarioId scenario_of(const RunConfig& c) {
    ScenarioId id = scenario_from_name(*c.scenario);
    if (id.kind == ScenarioKind::IidPareto) {
        id.alpha = c.alpha;
        id.dim = c.dim;
    }
    if (id.kind == ScenarioKind::InfiniteCones) id.m = c.m;
    id.validate();
    return id;
}

ConeSpec load_cone(const std::string& path) { return cone_from_json(load_json_file(path, "--cone"), "cone"); }

std::size_t require_k(const RunConfig& c) {
    if (!c.k) throw ConfigError("k: required (--k)");
    return *c.k;
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
    if (c.out.empty()) {
        out << text;
    } else {
        write_file_atomic(c.out, text);
    }
}

void write_meta(const RunConfig& c, const json& meta) {
    if (!c.out.empty()) write_file_atomic(c.out + ".meta.json", dump_json(meta));
}

std::string sibling(const std::string& out, const std::string& suffix) {
    std::filesystem::path p(out);
    return (p.parent_path() / p.stem()).string() + suffix;
}

json spectral_meta(const SpectralMeasureEstimate& s, const TailIndexFit& fit) {
    return {{"fit", fit_to_json(fit)},
            {"atom_count", s.atoms.size()},
            {"total_mass", s.total_mass},
            {"k", s.k},
            {"b_hat", s.b_hat}};
}

// ============================================================================
// Subcommands
// ============================================================================

int cmd_simulate(const RunConfig& c, std::ostream& out) {
    if (!c.n) throw ConfigError("n: required (--n)");
    const ScenarioId id = scenario_of(c);
    const DataSet data = simulate(id, *c.n, c.seed);
    write_file_atomic(c.out, to_csv(data));
    const json prov = {{"scenario", data.provenance().scenario},
                       {"seed", data.provenance().seed},
                       {"n", data.size()},
                       {"params", data.provenance().params},
                       {"out", c.out}};
    out << prov.dump() << "\n";
    return kExitOk;
}

int cmd_fit(const RunConfig& c, std::ostream& out) {
    const DataSet data = load_csv(c.in);
    const ConeSpec cone = load_cone(c.cone);
    const TailIndexFit fit = fit_tail_index(data, cone, require_k(c), tail_method_from_string(c.method));
    json rep = fit_to_json(fit);
    rep["config"] = run_config_to_json(c);
    emit(c, dump_json(rep), out);
    return kExitOk;
}

int cmd_spectral(const RunConfig& c, std::ostream& out, bool cluster) {
    const DataSet data = load_csv(c.in);
    const ConeSpec cone = load_cone(c.cone);
    const std::size_t k = require_k(c);
    const OrderedDistances od = order_distances(data, cone);
    const TailIndexFit fit = fit_tail_index(od, cone, k, tail_method_from_string(c.method));
    SpectralMeasureEstimate s = spectral_estimate(od, data, cone, k);
    json meta = spectral_meta(s, fit);
    meta["config"] = run_config_to_json(c);
    if (!cluster) {
        emit(c, atoms_csv(s), out);
        write_meta(c, meta);
        return kExitOk;
    }
    const SupportEstimate sup = cluster_support(std::move(s), c.cluster_eps);
    json cl = json::array();
    for (std::size_t i = 0; i < sup.clusters.size(); ++i) cl.push_back(cluster_to_json(sup.clusters[i], i));
    meta["clusters"] = cl;
    meta["cluster_eps"] = sup.cluster_eps;
    meta["outlier_fraction"] = sup.outlier_fraction;
    emit(c, atoms_csv(sup.spectral, &sup.cluster_of), out);
    write_meta(c, meta);
    return kExitOk;
}

struct PipelineInput {
    std::vector<ConeSpec> cones;
    std::vector<std::size_t> ks;
    std::vector<RiskSet> risk_sets;
    double cluster_eps;
    std::size_t max_levels;
};

PipelineInput pipeline_input(const RunConfig& c, bool eps_flag, bool levels_flag) {
    PipelineInput p{{}, c.ks, {}, c.cluster_eps, c.max_levels};
    json doc;
    if (!c.config.empty()) doc = load_json_file(c.config, "--config");
    if (!c.cones.empty()) {
        json cones_doc = load_json_file(c.cones, "--cones");
        if (cones_doc.is_array()) {
            doc["cones"] = cones_doc;
        } else {
            for (auto it = cones_doc.begin(); it != cones_doc.end(); ++it) doc[it.key()] = it.value();
        }
    }
    if (doc.is_null()) doc = json::object();
    if (!doc.is_object()) throw ConfigError("config: expected an object");
    if (doc.contains("cones")) {
        const json& a = doc["cones"];
        if (!a.is_array()) throw ConfigError("config.cones: expected an array of cones");
        for (std::size_t i = 0; i < a.size(); ++i) p.cones.push_back(cone_from_json(a[i], "cones[" + std::to_string(i) + "]"));
    }
    if (p.ks.empty() && doc.contains("ks")) {
        const json& a = doc["ks"];
        if (!a.is_array()) throw ConfigError("config.ks: expected an array of integers");
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!a[i].is_number_integer() || a[i].get<long long>() < 1) {
                throw ConfigError("config.ks[" + std::to_string(i) + "]: expected a positive integer");
            }
            p.ks.push_back(a[i].get<std::size_t>());
        }
    }
    if (doc.contains("risk_sets")) p.risk_sets = risk_sets_from_json(doc["risk_sets"], "risk_sets");
    if (!c.risk_set.empty()) {
        auto extra = risk_sets_from_json(load_json_file(c.risk_set, "--risk-set"), "risk_set");
        p.risk_sets.insert(p.risk_sets.end(), extra.begin(), extra.end());
    }
    if (!eps_flag && doc.contains("cluster_eps")) {
        if (!doc["cluster_eps"].is_number()) throw ConfigError("config.cluster_eps: expected a number");
        p.cluster_eps = doc["cluster_eps"].get<double>();
    }
    if (!levels_flag && doc.contains("max_levels")) {
        if (!doc["max_levels"].is_number_integer()) throw ConfigError("config.max_levels: expected an integer");
        p.max_levels = doc["max_levels"].get<std::size_t>();
    }
    return p;
}

json oracle_entry(const std::optional<ScenarioId>& sc, std::size_t level) {
    if (!sc) return nullptr;
    try {
        return {{"alpha", oracle_alpha({*sc, level})}};
    } catch (const NoOracleError&) {
        return nullptr;
    }
}

json oracle_probability_or_null(const std::optional<ScenarioId>& sc, const RiskSet& a) {
    if (!sc) return nullptr;
    try {
        return oracle_probability(*sc, a);
    } catch (const NoOracleError&) {
        return nullptr;
    }
}

std::string set_label(const RiskSet& a, std::size_t i) { return a.id.empty() ? "set" + std::to_string(i) : a.id; }

int cmd_hrv(const RunConfig& c, bool eps_flag, bool levels_flag, std::ostream& out) {
    if (c.out.empty()) throw ConfigError("out: required (--out)");
    const DataSet data = load_csv(c.in);
    const PipelineInput p = pipeline_input(c, eps_flag, levels_flag);
    PipelineOptions opts;
    opts.cluster_eps = p.cluster_eps;
    opts.method = tail_method_from_string(c.method);
    for (const auto& a : p.risk_sets) a.validate(data.dim());

    std::vector<HrvLevelReport> reps;
    std::string mode;
    if (!p.cones.empty()) {
        mode = "sequence";
        reps = run_sequence(data, p.cones, p.ks, opts);
    } else if (!c.cone.empty()) {
        mode = "discover";
        reps = discover_cones(data, load_cone(c.cone), c.k, p.max_levels, opts, p.risk_sets);
    } else {
        throw ConfigError("cones: need --cones, a --config with \"cones\", or a base --cone");
    }

    std::optional<ScenarioId> sc;
    if (c.scenario) sc = scenario_of(c);

    json levels = json::array();
    for (const auto& r : reps) {
        json lj = level_report_to_json(r);
        lj["oracle"] = oracle_entry(sc, r.level);
        json risk = json::array();
        for (std::size_t i = 0; i < p.risk_sets.size(); ++i) {
            const RiskSet& a = p.risk_sets[i];
            json e = {{"id", set_label(a, i)}, {"type", a.type_name()}};
            if (r.model && bounded_away(a, r.model->cone)) {
                const RiskEstimate est = risk_probability(data, *r.model, a);
                e["plug_in"] = est.plug_in;
                e["empirical"] = est.empirical;
            } else {
                e["plug_in"] = nullptr;
                e["empirical"] = nullptr;
            }
            e["oracle"] = oracle_probability_or_null(sc, a);
            risk.push_back(e);
        }
        lj["risk"] = risk;
        levels.push_back(lj);
        if (!r.degenerate) {
            const std::string tag = ".level" + std::to_string(r.level);
            write_file_atomic(sibling(c.out, tag + ".hill.csv"), sweep_csv(r.hill_sweep));
            write_file_atomic(sibling(c.out, tag + ".spectral_hist.csv"), spectral_histogram_csv(r.support->spectral));
        }
    }
    json pipeline = {{"mode", mode}, {"cluster_eps", p.cluster_eps}, {"max_levels", p.max_levels}, {"ks", p.ks}};
    json cones = json::array();
    for (const auto& cone : p.cones) cones.push_back(cone_to_json(cone));
    pipeline["cones"] = cones;
    json sets = json::array();
    for (const auto& a : p.risk_sets) sets.push_back(risk_set_to_json(a));
    pipeline["risk_sets"] = sets;

    json rep = {{"config", run_config_to_json(c)}, {"pipeline", pipeline}, {"levels", levels}};
    write_file_atomic(c.out, dump_json(rep));
    out << "wrote " << reps.size() << " level report(s) to " << c.out << "\n";
    return kExitOk;
}

int cmd_risk(const RunConfig& c, std::ostream& out) {
    if (c.risk_set.empty()) throw ConfigError("risk_set: required (--risk-set)");
    const DataSet data = load_csv(c.in);
    const ConeSpec cone = load_cone(c.cone);
    const auto sets = risk_sets_from_json(load_json_file(c.risk_set, "--risk-set"), "risk_set");
    const std::size_t k = require_k(c);
    const OrderedDistances od = order_distances(data, cone);
    const TailIndexFit fit = fit_tail_index(od, cone, k, tail_method_from_string(c.method));
    const LimitMeasureModel model = build_model(fit, spectral_estimate(od, data, cone, k), data.size());
    std::optional<ScenarioId> sc;
    if (c.scenario) sc = scenario_of(c);

    std::string csv = "id,type,plug_in,empirical,oracle\n";
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const RiskSet& a = sets[i];
        a.validate(data.dim());
        const RiskEstimate est = risk_probability(data, model, a);
        const json o = oracle_probability_or_null(sc, a);
        csv += set_label(a, i) + "," + a.type_name() + "," + format_double(est.plug_in) + "," +
               format_double(est.empirical) + "," + (o.is_null() ? std::string() : format_double(o.get<double>())) + "\n";
    }
    emit(c, csv, out);
    write_meta(c, {{"config", run_config_to_json(c)}, {"fit", fit_to_json(fit)}, {"model", model_to_json(model)}});
    return kExitOk;
}

int cmd_cev(const RunConfig& c, std::ostream& out) {
    const DataSet data = load_csv(c.in);
    double t = 0.0;
    if (c.t) {
        t = *c.t;
    } else if (c.k) {
        t = static_cast<double>(data.size()) / static_cast<double>(*c.k);
    } else {
        throw ConfigError("t: required (--t, or --k for t = n/k)");
    }
    if (!(t >= 10.0)) throw ConfigError("t: must be >= 10, got " + format_double(t));
    emit(c, cev_csv(cev_two_normalizations(data, default_cev_grid(), t)), out);
    write_meta(c, {{"config", run_config_to_json(c)}, {"t", t}, {"n", data.size()}});
    return kExitOk;
}

}  // namespace

// ============================================================================
// Entry point
// ============================================================================

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hidden regular variation: tail fits on nested cones, spectral and support estimates, risk "
                 "probabilities"};
    app.name("hrv");
    app.require_subcommand(1, 1);

    RunConfig cfg;
    std::string scenario;
    std::size_t n = 0, k = 0;
    double t = 0.0;
    const std::vector<std::string> scenarios = {"iid_pareto", "nonstd_mix", "diversify",
                                                "full_dep",   "infinite_cones", "cev_mix"};

    auto add_in = [&](CLI::App* s) { s->add_option("--in", cfg.in, "input CSV with header z1..zd")->required(); };
    auto add_cone = [&](CLI::App* s, bool required) {
        auto* o = s->add_option("--cone", cfg.cone, "ConeSpec JSON file");
        if (required) o->required();
    };
    auto add_k = [&](CLI::App* s) { s->add_option("--k", k, "number of upper order statistics")->check(CLI::PositiveNumber); };
    auto add_method = [&](CLI::App* s) {
        s->add_option("--method", cfg.method, "tail index estimator")->check(CLI::IsMember({"hill", "qq"}));
    };
    auto add_scenario = [&](CLI::App* s, bool required) {
        auto* o = s->add_option("--scenario", scenario, "scenario name")->check(CLI::IsMember(scenarios));
        if (required) o->required();
        s->add_option("--alpha", cfg.alpha, "iid_pareto tail index");
        s->add_option("--dim", cfg.dim, "iid_pareto dimension");
        s->add_option("--m", cfg.m, "infinite_cones mixture terms");
    };

    auto* sim = app.add_subcommand("simulate", "draw a scenario sample to CSV");
    add_scenario(sim, true);
    sim->add_option("--n", n, "sample size")->required()->check(CLI::PositiveNumber);
    sim->add_option("--seed", cfg.seed, "64-bit seed");
    sim->add_option("--out", cfg.out, "output CSV")->required();

    auto* fit = app.add_subcommand("fit", "tail index on one cone (JSON)");
    add_in(fit);
    add_cone(fit, true);
    add_k(fit);
    add_method(fit);
    fit->add_option("--out", cfg.out, "output JSON (stdout when omitted)");

    auto* spec = app.add_subcommand("spectral", "spectral atoms (CSV plus .meta.json)");
    auto* sup = app.add_subcommand("support", "spectral atoms with greedy clusters (CSV plus .meta.json)");
    for (auto* s : {spec, sup}) {
        add_in(s);
        add_cone(s, true);
        add_k(s);
        add_method(s);
        s->add_option("--out", cfg.out, "output CSV (stdout when omitted)");
    }
    sup->add_option("--cluster-eps", cfg.cluster_eps, "angular cluster radius")->check(CLI::PositiveNumber);

    auto* hrv = app.add_subcommand("hrv", "sequential analysis over nested or discovered cones");
    add_in(hrv);
    add_cone(hrv, false);
    hrv->add_option("--cones", cfg.cones, "JSON array of cones or pipeline config");
    hrv->add_option("--config", cfg.config, "pipeline config JSON");
    hrv->add_option("--risk-set", cfg.risk_set, "RiskSet JSON (object or array)");
    add_k(hrv);
    hrv->add_option("--ks", cfg.ks, "per-level k, comma separated")->delimiter(',');
    auto* eps_opt = hrv->add_option("--cluster-eps", cfg.cluster_eps, "angular cluster radius")->check(CLI::PositiveNumber);
    auto* levels_opt = hrv->add_option("--max-levels", cfg.max_levels, "levels for cone discovery")->check(CLI::PositiveNumber);
    add_method(hrv);
    add_scenario(hrv, false);
    hrv->add_option("--out", cfg.out, "output JSON report")->required();

    auto* risk = app.add_subcommand("risk", "plug-in and empirical risk probabilities (CSV)");
    add_in(risk);
    add_cone(risk, true);
    add_k(risk);
    add_method(risk);
    risk->add_option("--risk-set", cfg.risk_set, "RiskSet JSON (object or array)")->required();
    add_scenario(risk, false);
    risk->add_option("--out", cfg.out, "output CSV (stdout when omitted)");

    auto* cev = app.add_subcommand("cev", "two-normalization table for CEV data (CSV)");
    add_in(cev);
    cev->add_option("--t", t, "scaling level t >= 10");
    add_k(cev);
    cev->add_option("--out", cfg.out, "output CSV (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    auto given = [&](const char* flag) {
        try {
            return sub->get_option(flag)->count() > 0;
        } catch (const CLI::OptionNotFound&) {
            return false;
        }
    };
    if (given("--scenario")) cfg.scenario = scenario;
    if (given("--n")) cfg.n = n;
    if (given("--k")) cfg.k = k;
    if (given("--t")) cfg.t = t;

    try {
        if (sub == sim) return cmd_simulate(cfg, out);
        if (sub == fit) return cmd_fit(cfg, out);
        if (sub == spec) return cmd_spectral(cfg, out, false);
        if (sub == sup) return cmd_spectral(cfg, out, true);
        if (sub == hrv) return cmd_hrv(cfg, eps_opt->count() > 0, levels_opt->count() > 0, out);
        if (sub == risk) return cmd_risk(cfg, out);
        if (sub == cev) return cmd_cev(cfg, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ContractError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NoOracleError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace hrv
