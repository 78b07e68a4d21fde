#include "hrv/sampler.hpp"

#include "hrv/error.hpp"
#include "hrv/text.hpp"

#include <sstream>

namespace hrv {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(seed + (stream + 1) * 0x9E3779B97F4A7C15ULL)) {}

double StreamRng::uniform01() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double StreamRng::uniform_positive() noexcept {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

// ============================================================================
// DataSet
// ============================================================================

DataSet::DataSet(std::size_t dim, std::vector<double> values, Provenance provenance)
    : dim_(dim), values_(std::move(values)), provenance_(std::move(provenance)) {
    if (dim_ == 0) throw DataError("dataset dimension must be >= 1");
    if (values_.empty()) throw DataError("empty dataset");
    if (values_.size() % dim_ != 0) throw DataError("dataset values not a multiple of the dimension");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double v = values_[i];
        if (!std::isfinite(v) || v < 0.0) {
            throw DataError("row " + std::to_string(i / dim_ + 1) + ", column z" + std::to_string(i % dim_ + 1) +
                            ": entries must be finite and >= 0");
        }
    }
}

DataSet DataSet::subset(std::span<const std::size_t> rows) const {
    std::vector<double> out;
    out.reserve(rows.size() * dim_);
    for (std::size_t r : rows) {
        auto src = row(r);
        out.insert(out.end(), src.begin(), src.end());
    }
    return DataSet(dim_, std::move(out), provenance_);
}

// ============================================================================
// Scenarios
// ============================================================================

std::string ScenarioId::name() const {
    switch (kind) {
        case ScenarioKind::IidPareto: return "iid_pareto";
        case ScenarioKind::NonstdMix: return "nonstd_mix";
        case ScenarioKind::Diversify: return "diversify";
        case ScenarioKind::FullDep: return "full_dep";
        case ScenarioKind::InfiniteCones: return "infinite_cones";
        case ScenarioKind::CevMix: return "cev_mix";
    }
    return "?";
}

nlohmann::json ScenarioId::params() const {
    nlohmann::json j = {{"name", name()}};
    if (kind == ScenarioKind::IidPareto) {
        j["alpha"] = alpha;
        j["dim"] = dim;
    }
    if (kind == ScenarioKind::InfiniteCones) j["m"] = m;
    return j;
}

void ScenarioId::validate() const {
    if (kind == ScenarioKind::IidPareto) {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("scenario.alpha: must be > 0");
        if (dim < 1) throw ConfigError("scenario.dim: must be >= 1");
    }
    if (kind == ScenarioKind::InfiniteCones && m < 2) throw ConfigError("scenario.m: must be >= 2");
}

ScenarioId scenario_from_name(const std::string& name) {
    if (name == "iid_pareto") return ScenarioId::iid_pareto(1.0, 2);
    if (name == "nonstd_mix") return ScenarioId::nonstd_mix();
    if (name == "diversify") return ScenarioId::diversify();
    if (name == "full_dep") return ScenarioId::full_dep();
    if (name == "infinite_cones") return ScenarioId::infinite_cones();
    if (name == "cev_mix") return ScenarioId::cev_mix();
    throw ConfigError("scenario: unknown name \"" + name + "\"");
}

double infinite_cones_term_probability(std::size_t i, std::size_t m) {
    if (i < 1 || i > m) return 0.0;
    return std::ldexp(1.0, -static_cast<int>(i < m ? i : m - 1));
}

namespace {

// First index T in {1..m} with P(T = i) = 2^{-i} (i < m), rest on m.
std::size_t truncated_geometric(double v, std::size_t m) {
    std::size_t t = 1;
    double cumulative = 0.5;
    while (t < m && v >= cumulative) {
        ++t;
        cumulative += std::ldexp(1.0, -static_cast<int>(t));
    }
    return t;
}

}  // namespace

DataSet simulate(const ScenarioId& id, std::size_t n, std::uint64_t seed) {
    id.validate();
    if (n < 1) throw ConfigError("n: must be >= 1");
    const std::size_t d = id.dimension();
    std::vector<double> z;
    z.reserve(n * d);

    StreamRng s0(seed, 0), s1(seed, 1), s2(seed, 2), s3(seed, 3), s4(seed, 4);

    switch (id.kind) {
        case ScenarioKind::IidPareto: {
            std::vector<StreamRng> coords;
            coords.reserve(d);
            for (std::size_t j = 0; j < d; ++j) coords.emplace_back(seed, j + 1);
            for (std::size_t i = 0; i < n; ++i) {
                for (auto& rng : coords) z.push_back(rng.pareto(id.alpha));
            }
            break;
        }
        case ScenarioKind::NonstdMix:
            for (std::size_t i = 0; i < n; ++i) {
                const bool b = s0.uniform01() < 0.5;
                const double x1 = s1.pareto(1.0), x2 = s2.pareto(3.0), x3 = s3.pareto(4.0);
                if (b) {
                    z.push_back(x1);
                    z.push_back(x3);
                } else {
                    z.push_back(x2);
                    z.push_back(x2);
                }
            }
            break;
        case ScenarioKind::Diversify:
            for (std::size_t i = 0; i < n; ++i) {
                const bool b = s0.uniform01() < 0.5;
                const double r1 = s1.pareto(1.0), r2 = s2.pareto(2.0);
                // U1 uniform on (0,1/3) u (2/3,1), U2 uniform on (1/3,2/3).
                double u1 = s3.uniform_positive() * (2.0 / 3.0);
                if (u1 > 1.0 / 3.0) u1 += 1.0 / 3.0;
                const double u2 = 1.0 / 3.0 + s4.uniform_positive() / 3.0;
                const double r = b ? r1 : r2;
                const double u = b ? u1 : u2;
                z.push_back(r * u);
                z.push_back(r * (1.0 - u));
            }
            break;
        case ScenarioKind::FullDep:
            for (std::size_t i = 0; i < n; ++i) {
                const bool b = s0.uniform01() < 0.5;
                const double x1 = s1.pareto(2.0), x2 = s2.pareto(2.0), x3 = s3.pareto(2.0);
                if (b) {
                    z.push_back(x1 * x1);
                    z.push_back(x1 * x1);
                } else {
                    z.push_back(x2);
                    z.push_back(x3);
                }
            }
            break;
        case ScenarioKind::InfiniteCones:
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t t = truncated_geometric(s0.uniform01(), id.m);
                const double y1 = s1.pareto(2.0), y2 = s2.pareto(2.0), x = s3.pareto(1.0);
                if (t == 1) {
                    z.push_back(y1);
                    z.push_back(y2);
                } else {
                    const int term = static_cast<int>(t) - 1;  // i in the mixture sum
                    const double p = 1.0 / (2.0 - std::ldexp(1.0, -(term - 1)));
                    const double s = std::pow(x, p);
                    z.push_back(s);
                    z.push_back(std::ldexp(s, term - 1));
                }
            }
            break;
        case ScenarioKind::CevMix:
            for (std::size_t i = 0; i < n; ++i) {
                const bool b = s0.uniform01() < 0.5;
                const double y = s1.pareto(1.0);
                z.push_back(b ? y : std::sqrt(y));
                z.push_back(y);
            }
            break;
    }
    return DataSet(d, std::move(z), Provenance{id.name(), seed, id.params()});
}

// ============================================================================
// CSV
// ============================================================================

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string_view strip_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

}  // namespace

DataSet parse_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw DataError("empty dataset");
    const auto header = split_fields(strip_cr(line));
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] != "z" + std::to_string(j + 1)) {
            throw DataError("header column " + std::to_string(j + 1) + ": expected \"z" + std::to_string(j + 1) + "\"");
        }
    }
    const std::size_t d = header.size();
    std::vector<double> values;
    std::size_t row = 0;
    while (std::getline(is, line)) {
        const auto content = strip_cr(line);
        if (content.empty()) continue;
        ++row;
        const auto fields = split_fields(content);
        if (fields.size() != d) {
            throw DataError("row " + std::to_string(row) + ": expected " + std::to_string(d) + " columns");
        }
        for (std::size_t j = 0; j < d; ++j) {
            double v = 0.0;
            if (!parse_double(fields[j], v) || !std::isfinite(v) || v < 0.0) {
                throw DataError("row " + std::to_string(row) + ", column z" + std::to_string(j + 1) + ": \"" +
                                std::string(fields[j]) + "\" is not a finite nonnegative number");
            }
            values.push_back(v);
        }
    }
    if (values.empty()) throw DataError("empty dataset");
    return DataSet(d, std::move(values));
}

DataSet load_csv(const std::filesystem::path& path) { return parse_csv(read_file(path)); }

std::string to_csv(const DataSet& data) {
    std::string out;
    for (std::size_t j = 0; j < data.dim(); ++j) {
        if (j) out += ',';
        out += "z" + std::to_string(j + 1);
    }
    out += '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto r = data.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (j) out += ',';
            out += format_double(r[j]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace hrv
