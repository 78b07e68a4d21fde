// Acceptance run: one PASS/FAIL line per criterion. With no argument every
// criterion runs; with a number only that one. Exit status is 0 iff all
// requested criteria pass.

#include "brute.hpp"
#include "cone_check.hpp"

#include "hrv/estimation.hpp"
#include "hrv/oracle.hpp"
#include "hrv/pipeline.hpp"
#include "hrv/sampler.hpp"
#include "hrv/text.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace hrv;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// 1. distances against grid projections
// ---------------------------------------------------------------------------
Outcome distance_correctness() {
    Stopwatch sw;
    std::size_t combos = 0, grid_fail = 0, homog_fail = 0;
    double worst = 0.0;
    std::string worst_name;
    for (const auto& combo : cone_check::all_combos()) {
        const auto r = cone_check::check(combo, 10000, 1);
        ++combos;
        grid_fail += r.grid_failures;
        homog_fail += r.homogeneity_failures;
        if (r.worst_excess > worst) {
            worst = r.worst_excess;
            worst_name = r.name;
        }
    }
    const double t = sw.seconds();
    const bool pass = grid_fail == 0 && homog_fail == 0 && t < 10.0;
    return {pass, std::to_string(combos) + " combos x 10000 points, grid failures " + std::to_string(grid_fail) +
                      (worst > 0 ? " (worst " + worst_name + " by " + fmt(worst) + ")" : "") +
                      ", homogeneity failures " + std::to_string(homog_fail) + ", " + fmt(t, 3) + " s"};
}

// ---------------------------------------------------------------------------
// 2. Hill on exact quantiles
// ---------------------------------------------------------------------------
Outcome hill_determinism() {
    Stopwatch sw;
    const std::size_t n = 100000, k = 1000;
    std::vector<double> d(n);
    for (std::size_t i = 1; i <= n; ++i) d[i - 1] = static_cast<double>(n) / i;
    const double a = hill_estimate(d, k);
    const double t = sw.seconds();
    const double ref = brute::hill_on_exact_quantiles(k, 1.0);
    const bool pass = a >= 0.99 && a <= 1.02 && std::abs(a - ref) <= 1e-10 * ref && t < 1.0;
    return {pass, "alpha_hat " + fmt(a, 10) + ", closed form " + fmt(ref, 10) + ", " + fmt(t, 3) + " s"};
}

// ---------------------------------------------------------------------------
// 3. full dependence cascade
// ---------------------------------------------------------------------------
Outcome full_dep_cascade() {
    const auto cones = canonical_cones(ScenarioId::full_dep());
    const Point e1 = {2, 0}, e2 = {0, 2};
    int good = 0;
    double worst_time = 0.0;
    std::string notes;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Stopwatch sw;
        const DataSet d = simulate(ScenarioId::full_dep(), 1000000, seed);
        const auto reps = run_sequence(d, cones, {2000, 2000});
        const double a0 = reps[0].fit->alpha_hat, a1 = reps[1].fit->alpha_hat;
        const auto& s = reps[1].support->spectral;
        double near1 = 0, near2 = 0, lit = 0;
        for (std::size_t i = 0; i < s.atoms.size(); ++i) {
            const auto& w = s.atoms[i];
            if (angular_distance(w, e1, Norm::Linf) <= 0.1) near1 += s.weights[i];
            else if (angular_distance(w, e2, Norm::Linf) <= 0.1) near2 += s.weights[i];
            const double sup1 = std::max(std::abs(w[0] - 2), std::abs(w[1]));
            const double sup2 = std::max(std::abs(w[0]), std::abs(w[1] - 2));
            if (std::min(sup1, sup2) <= 0.1) lit += s.weights[i];
        }
        const double frac = (near1 + near2) / s.total_mass;
        const double split = near1 / (near1 + near2);
        const double t = sw.seconds();
        worst_time = std::max(worst_time, t);
        const bool ok = std::abs(a0 - 1) <= 0.1 && std::abs(a1 - 2) <= 0.25 && frac >= 0.95 &&
                        std::abs(split - 0.5) <= 0.1 && t < 30.0;
        good += ok;
        notes += " [s" + std::to_string(seed) + " a0=" + fmt(a0, 3) + " a1=" + fmt(a1, 3) + " mass=" + fmt(frac, 3) +
                 " split=" + fmt(split, 3) + " sup-norm-reading=" + fmt(lit / s.total_mass, 3) + (ok ? "" : " FAIL") +
                 "]";
    }
    return {good == 10, std::to_string(good) + "/10 seeds, slowest " + fmt(worst_time, 3) + " s;" + notes};
}

// ---------------------------------------------------------------------------
// 4. non-standard mixture cascade
// ---------------------------------------------------------------------------
Outcome nonstd_cascade() {
    const auto cones = canonical_cones(ScenarioId::nonstd_mix());
    const double expect[] = {1, 3, 4, 5}, tol[] = {0.15, 0.5, 0.8, 1.25};
    int good = 0;
    double worst_time = 0.0;
    std::string notes;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Stopwatch sw;
        const DataSet d = simulate(ScenarioId::nonstd_mix(), 1000000, seed);
        std::vector<std::size_t> ks;
        for (const auto& c : cones) {
            ks.push_back(static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(order_distances(d, c).n_pos())))));
        }
        const auto reps = run_sequence(d, cones, ks);
        bool ok = true;
        notes += " [s" + std::to_string(seed);
        for (std::size_t i = 0; i < 4; ++i) {
            const double a = reps[i].fit->alpha_hat;
            ok = ok && std::abs(a - expect[i]) <= tol[i];
            if (i > 0) ok = ok && a > reps[i - 1].fit->alpha_hat;
            notes += " " + fmt(a, 3);
        }
        const double t = sw.seconds();
        worst_time = std::max(worst_time, t);
        ok = ok && t < 60.0;
        good += ok;
        notes += ok ? "]" : " FAIL]";
    }
    return {good >= 8, std::to_string(good) + "/10 seeds (need 8), slowest " + fmt(worst_time, 3) + " s;" + notes};
}

// ---------------------------------------------------------------------------
// 5. infinitely many hidden cones
// ---------------------------------------------------------------------------
Outcome infinite_cones() {
    const auto cones = canonical_cones(ScenarioId::infinite_cones(6));
    const double expect[] = {1, 1.5, 1.75}, tol[] = {0.1, 0.2, 0.3};
    int good = 0;
    std::string notes;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const DataSet d = simulate(ScenarioId::infinite_cones(6), 1000000, seed);
        const auto reps = run_sequence(d, cones);
        bool ok = true;
        notes += " [s" + std::to_string(seed);
        for (std::size_t i = 0; i < 3; ++i) {
            const double a = reps[i].fit->alpha_hat;
            ok = ok && std::abs(a - expect[i]) <= tol[i];
            notes += " " + fmt(a, 3) + "(k=" + std::to_string(reps[i].k) + ")";
        }
        good += ok;
        notes += ok ? "]" : " FAIL]";
    }
    return {good >= 8, std::to_string(good) + "/10 seeds (need 8);" + notes};
}

// ---------------------------------------------------------------------------
// 6. two normalizations of the CEV mixture
// ---------------------------------------------------------------------------
Outcome cev_normalizations() {
    Stopwatch sw;
    const std::size_t n = 10000000, k = 10000;
    const DataSet d = simulate(ScenarioId::cev_mix(), n, 1);
    const double t = static_cast<double>(n) / k;
    const auto rows = cev_two_normalizations(d, default_cev_grid(), t);
    double sup1 = 0, sup2 = 0, sup1_pos = 0;
    std::string where;
    for (const CevRow& r : rows) {
        const double e1 = std::abs(r.emp_t - r.nu1), e2 = std::abs(r.emp_sqrt_t - r.nu2);
        if (e1 > sup1) {
            sup1 = e1;
            where = "(" + fmt(r.x) + "," + fmt(r.y) + ")";
        }
        sup2 = std::max(sup2, e2);
        if (r.x > 0) sup1_pos = std::max(sup1_pos, e1);
    }
    const double secs = sw.seconds();
    const bool pass = sup1 <= 0.05 && sup2 <= 0.05 && secs < 60.0;
    return {pass, "t=" + fmt(t) + ": sup|emp-nu1| " + fmt(sup1) + " at " + where + " (over x>0: " + fmt(sup1_pos) +
                      "), sup|emp-nu2| " + fmt(sup2) + ", " + fmt(secs, 3) + " s"};
}

// ---------------------------------------------------------------------------
// 7. risk probability of a large coordinate gap
// ---------------------------------------------------------------------------
Outcome risk_probability_check() {
    const auto cones = canonical_cones(ScenarioId::full_dep());
    const std::size_t n = 1000000, k = 2000;
    int good = 0;
    std::string notes;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const DataSet d = simulate(ScenarioId::full_dep(), n, seed);
        std::vector<double> gap(n);
        for (std::size_t i = 0; i < n; ++i) gap[i] = std::abs(d.row(i)[0] - d.row(i)[1]);
        std::vector<double> sorted = gap;
        std::sort(sorted.begin(), sorted.end());
        const double x = sorted[static_cast<std::size_t>(std::ceil(0.999 * n)) - 1];
        const double b1 = sorted[n - 1 - k];  // (k+1)-th largest gap

        const auto reps = run_sequence(d, cones, {k, k});
        const RiskSet a(AbsDiffExceed{0, 1, x});
        const RiskEstimate est = risk_probability(d, *reps[1].model, a);
        const double oracle = oracle_probability(ScenarioId::full_dep(), a);
        const double paper_form = (static_cast<double>(k) / n) * std::pow(x / b1, -2.0);
        const double ratio = est.plug_in / oracle;
        const double rel = std::abs(est.plug_in / paper_form - 1.0);
        const bool ok = ratio <= 2.0 && ratio >= 0.5 && rel <= 0.2;
        good += ok;
        notes += " [s" + std::to_string(seed) + " x=" + fmt(x) + " plug=" + fmt(est.plug_in) + " oracle=" +
                 fmt(oracle) + " form=" + fmt(paper_form) + (ok ? "" : " FAIL") + "]";
    }
    return {good >= 9, std::to_string(good) + "/10 seeds (need 9);" + notes};
}

// ---------------------------------------------------------------------------
// 8. diversification support and peeling
// ---------------------------------------------------------------------------
Outcome diversify_support() {
    const double lo = 1.0 / 3.0 + 0.02, hi = 2.0 / 3.0 - 0.02;
    auto angle = [](const Point& w) { return w[0] / (w[0] + w[1]); };
    int good = 0;
    std::string notes;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const DataSet d = simulate(ScenarioId::diversify(), 1000000, seed);
        const auto reps = discover_cones(d, ConeSpec(2, Norm::L1, {Origin{}}), std::size_t{1000}, 2);
        const auto& s0 = reps[0].support->spectral;
        double middle = 0;
        for (std::size_t i = 0; i < s0.atoms.size(); ++i) {
            const double a = angle(s0.atoms[i]);
            if (a >= lo && a <= hi) middle += s0.weights[i];
        }
        const double frac = middle / s0.total_mass;
        std::size_t inside = 0;
        if (reps.size() > 1 && reps[1].support) {
            for (const auto& w : reps[1].support->spectral.atoms) {
                const double a = angle(w);
                inside += a > lo && a < hi;
            }
        }
        const bool ok = frac <= 0.05 && inside >= 10;
        good += ok;
        notes += " [s" + std::to_string(seed) + " middle=" + fmt(frac, 3) + " level1-inside=" + std::to_string(inside) +
                 (ok ? "" : " FAIL") + "]";
    }
    return {good == 10, std::to_string(good) + "/10 seeds;" + notes};
}

// ---------------------------------------------------------------------------
// 9. homogeneity of the plug-in measure
// ---------------------------------------------------------------------------
Outcome plug_in_homogeneity() {
    StreamRng rng(2024, 0);
    std::size_t bad = 0, triples = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t dim = rng.uniform01() < 0.5 ? 2 : 3;
        const Norm norm = std::array<Norm, 3>{Norm::L1, Norm::L2, Norm::Linf}[static_cast<int>(rng.uniform01() * 3)];
        const ConeSpec cone(dim, norm, {Origin{}});
        const std::size_t na = 1 + static_cast<std::size_t>(rng.uniform01() * 50);
        std::vector<Point> atoms;
        for (std::size_t j = 0; j < na; ++j) {
            Point w(dim);
            for (double& v : w) v = rng.uniform01() < 0.1 ? 0.0 : rng.uniform_positive();
            if (norm_of(w, norm) == 0.0) w[0] = 1.0;
            const double s = norm_of(w, norm);
            for (double& v : w) v /= s;
            atoms.push_back(w);
        }
        const LimitMeasureModel m{0.3 + 5 * rng.uniform01(), atoms, std::vector<double>(na, 1.0 / na),
                                  0.2 + rng.uniform01(), cone, 1.0, 1000, na};
        auto u = [&] { return 0.05 + 3 * rng.uniform01(); };
        Point uj(dim), ub(dim), lw(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            uj[j] = u();
            ub[j] = u();
            lw[j] = 2 * rng.uniform01() - 0.5;
        }
        std::vector<RiskSet> sets = {RiskSet(JointExceed{uj}), RiskSet(ComplementBox{ub}),
                                     RiskSet(AbsDiffExceed{0, 1, u()}), RiskSet(DistExceed{cone, u()})};
        lw[0] = std::abs(lw[0]) + 0.1;
        sets.push_back(RiskSet(LinearExceed{lw, u()}));
        const RiskSet& a = sets[static_cast<std::size_t>(rng.uniform01() * sets.size())];
        const double theta = std::exp(std::log(1e-2) + rng.uniform01() * std::log(1e4));
        const double lhs = eval_limit_measure(m, a.scaled(theta));
        const double rhs = std::pow(theta, -m.alpha_hat) * eval_limit_measure(m, a);
        const double err = std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        worst = std::max(worst, lhs == rhs ? 0.0 : err);
        bad += err > 1e-12;
        ++triples;
    }
    return {bad == 0, std::to_string(triples) + " triples, worst relative error " + fmt(worst, 3) + ", violations " +
                          std::to_string(bad)};
}

// ---------------------------------------------------------------------------
// 10. byte-identical CLI outputs
// ---------------------------------------------------------------------------
int run_command(const std::string& cmd) { return std::system((cmd + " > /dev/null 2>&1").c_str()); }

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file()) out[e.path().filename().string()] = read_file(e.path());
    }
    return out;
}

Outcome cli_reproducibility() {
    const fs::path dir = HRV_ACCEPTANCE_TMP;
    const std::string cli = HRV_CLI_PATH;
    auto p = [&](const std::string& f) { return (dir / f).string(); };
    std::vector<std::map<std::string, std::string>> runs;
    for (int pass = 0; pass < 2; ++pass) {
        fs::remove_all(dir);
        fs::create_directories(dir);
        write_file_atomic(p("cones.json"),
                          R"([{"dim":2,"norm":"linf","forbidden":[{"type":"origin"}]},)"
                          R"({"dim":2,"norm":"linf","forbidden":[{"type":"origin"},{"type":"ray","direction":[1,1]}]}])");
        write_file_atomic(p("origin.json"), R"({"dim":2,"norm":"linf","forbidden":[{"type":"origin"}]})");
        write_file_atomic(p("diag.json"),
                          R"({"dim":2,"norm":"linf","forbidden":[{"type":"origin"},{"type":"ray","direction":[1,1]}]})");
        write_file_atomic(p("sets.json"), R"([{"type":"abs_diff_exceed","x":30,"id":"gap"},)"
                                          R"({"type":"linear_exceed","w":[1,-1],"x":20}])");
        const std::vector<std::string> cmds = {
            cli + " simulate --scenario full_dep --n 200000 --seed 7 --out " + p("z.csv"),
            cli + " simulate --scenario cev_mix --n 200000 --seed 7 --out " + p("cev.csv"),
            cli + " fit --in " + p("z.csv") + " --cone " + p("origin.json") + " --k 500 --out " + p("fit.json"),
            cli + " support --in " + p("z.csv") + " --cone " + p("diag.json") + " --k 500 --out " + p("support.csv"),
            cli + " hrv --in " + p("z.csv") + " --cones " + p("cones.json") + " --risk-set " + p("sets.json") +
                " --scenario full_dep --out " + p("hrv.json"),
            cli + " hrv --in " + p("z.csv") + " --cone " + p("origin.json") + " --max-levels 3 --out " +
                p("discover.json"),
            cli + " risk --in " + p("z.csv") + " --cone " + p("diag.json") + " --k 500 --risk-set " + p("sets.json") +
                " --scenario full_dep --out " + p("risk.csv"),
            cli + " cev --in " + p("cev.csv") + " --k 200 --out " + p("cev_table.csv"),
        };
        for (const auto& c : cmds) {
            if (run_command(c) != 0) return {false, "command failed: " + c};
        }
        runs.push_back(snapshot(dir));
    }
    std::size_t differing = 0;
    for (const auto& [name, bytes] : runs[0]) {
        auto it = runs[1].find(name);
        differing += it == runs[1].end() || it->second != bytes;
    }
    differing += runs[0].size() != runs[1].size();
    return {differing == 0, std::to_string(runs[0].size()) + " output files compared, " + std::to_string(differing) +
                                " differ"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"distance correctness", distance_correctness},
        {"hill determinism", hill_determinism},
        {"full dependence cascade", full_dep_cascade},
        {"non-standard mixture cascade", nonstd_cascade},
        {"infinite cones cascade", infinite_cones},
        {"cev two normalizations", cev_normalizations},
        {"risk probability", risk_probability_check},
        {"support estimation", diversify_support},
        {"plug-in homogeneity", plug_in_homogeneity},
        {"cli reproducibility", cli_reproducibility},
    };
    std::size_t first = 1, last = criteria.size();
    if (argc > 1) {
        first = last = static_cast<std::size_t>(std::atoi(argv[1]));
        if (first < 1 || first > criteria.size()) {
            std::cerr << "criterion must be 1.." << criteria.size() << "\n";
            return 2;
        }
    }
    bool all = true;
    for (std::size_t c = first; c <= last; ++c) {
        Outcome o;
        try {
            o = criteria[c - 1].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.pass;
        std::cout << "C" << c << " " << (o.pass ? "PASS" : "FAIL") << " " << criteria[c - 1].first << ": " << o.detail
                  << std::endl;
    }
    return all ? 0 : 1;
}
