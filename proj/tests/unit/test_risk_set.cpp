#include "doctest.h"

#include "hrv/error.hpp"
#include "hrv/risk_set.hpp"
#include "hrv/sampler.hpp"

#include <cmath>
#include <limits>
#include <vector>

using namespace hrv;

namespace {

const double inf = std::numeric_limits<double>::infinity();

ConeSpec linf(std::vector<PrimitiveCone> f) { return ConeSpec(2, Norm::Linf, std::move(f)); }

std::vector<RiskSet> sample_sets() {
    return {
        RiskSet(JointExceed{{2, 3}}),
        RiskSet(JointExceed{{0, 3}}),
        RiskSet(AbsDiffExceed{0, 1, 1.5}),
        RiskSet(LinearExceed{{1, -0.5}, 2}),
        RiskSet(LinearExceed{{2, 1}, 1}),
        RiskSet(ComplementBox{{2, inf}}),
        RiskSet(ComplementBox{{1, 4}}),
        RiskSet(DistExceed{linf({Origin{}, make_ray({1, 1})}), 1.5}),
    };
}

}  // namespace

TEST_CASE("entry radius matches membership along each ray") {
    StreamRng rng(21, 0);
    for (const RiskSet& a : sample_sets()) {
        INFO(a.type_name());
        a.validate(2);
        for (int i = 0; i < 2000; ++i) {
            const double s = rng.uniform01();
            const Point w = {s, 1 - s};
            const double r = a.entry_radius(w);
            if (std::isinf(r)) {
                CHECK_FALSE(a.contains(Point{1e12 * w[0], 1e12 * w[1]}));
                continue;
            }
            REQUIRE(r > 0.0);
            const double hi = r * (1 + 1e-9), lo = r * (1 - 1e-9);
            CHECK(a.contains(Point{hi * w[0], hi * w[1]}));
            CHECK_FALSE(a.contains(Point{lo * w[0], lo * w[1]}));
            CHECK(a.contains(Point{10 * hi * w[0], 10 * hi * w[1]}));
        }
    }
}

TEST_CASE("entry radius of the documented shapes") {
    CHECK(RiskSet(JointExceed{{2, 3}}).entry_radius(Point{1, 1}) == 3.0);
    CHECK(RiskSet(JointExceed{{2, 3}}).entry_radius(Point{1, 0}) == inf);
    CHECK(RiskSet(ComplementBox{{2, 4}}).entry_radius(Point{1, 1}) == 2.0);
    CHECK(RiskSet(AbsDiffExceed{0, 1, 3}).entry_radius(Point{2, 0}) == 1.5);
    CHECK(RiskSet(AbsDiffExceed{0, 1, 3}).entry_radius(Point{1, 1}) == inf);
    CHECK(RiskSet(LinearExceed{{1, -1}, 2}).entry_radius(Point{0.5, 1}) == inf);
    CHECK(RiskSet(LinearExceed{{1, -1}, 2}).entry_radius(Point{1, 0.5}) == 4.0);
    const ConeSpec diag = linf({Origin{}, make_ray({1, 1})});
    CHECK(RiskSet(DistExceed{diag, 2}).entry_radius(Point{2, 0}) == doctest::Approx(2.0));
}

TEST_CASE("scaling multiplies entry radii") {
    StreamRng rng(22, 0);
    for (const RiskSet& a : sample_sets()) {
        const double theta = 0.1 + 10 * rng.uniform01();
        const RiskSet b = a.scaled(theta);
        for (int i = 0; i < 200; ++i) {
            const double s = rng.uniform01();
            const Point w = {s, 1 - s};
            const double ra = a.entry_radius(w), rb = b.entry_radius(w);
            if (std::isinf(ra)) {
                CHECK(std::isinf(rb));
            } else {
                CHECK(rb == doctest::Approx(theta * ra).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("bounded away from the forbidden cone") {
    const ConeSpec origin = linf({Origin{}});
    const ConeSpec diag = linf({Origin{}, make_ray({1, 1})});
    const ConeSpec xaxis = linf({make_subspace(2, {0})});
    const ConeSpec yaxis = linf({make_subspace(2, {1})});
    const ConeSpec axes = linf({make_subspace(2, {0}), make_subspace(2, {1})});

    CHECK(bounded_away(RiskSet(ComplementBox{{1, 1}}), origin));
    CHECK_FALSE(bounded_away(RiskSet(ComplementBox{{1, 1}}), diag));
    CHECK(bounded_away(RiskSet(AbsDiffExceed{0, 1, 1}), diag));
    CHECK(bounded_away(RiskSet(JointExceed{{1, 1}}), axes));
    CHECK(bounded_away(RiskSet(ComplementBox{{1, inf}}), yaxis));
    CHECK_FALSE(bounded_away(RiskSet(ComplementBox{{1, inf}}), xaxis));
    CHECK_FALSE(bounded_away(RiskSet(LinearExceed{{1, -1}, 1}), xaxis));
    CHECK(bounded_away(RiskSet(DistExceed{diag, 0.5}), diag));
    CHECK(bounded_away(RiskSet(JointExceed{{inf, 1}}), diag));
    CHECK(min_distance_to_cone(RiskSet(AbsDiffExceed{0, 1, 4}), diag) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(min_distance_to_cone(RiskSet(JointExceed{{inf, 1}}), diag) == inf);

    // a cone reaching the set only in the limit along a near-axis direction
    const ConeSpec level1 = linf({Origin{}, make_ray({1, 1}), make_subspace(2, {0})});
    CHECK_FALSE(bounded_away(RiskSet(ComplementBox{{1, 1}}), level1));
    CHECK(bounded_away(RiskSet(JointExceed{{1, 1}}), level1) == false);
    CHECK(bounded_away(RiskSet(AbsDiffExceed{0, 1, 1}), level1) == false);

    const ConeSpec d3(3, Norm::Linf, {CoordHyperplaneUnion{2}});
    CHECK(bounded_away(RiskSet(JointExceed{{1, 1, 0}}), d3));
    CHECK_FALSE(bounded_away(RiskSet(ComplementBox{{1, 1, 1}}), d3));
}

TEST_CASE("validation names the field") {
    auto message = [](const RiskSet& a, std::size_t dim) {
        try {
            a.validate(dim);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("ok");
    };
    CHECK(message(RiskSet(JointExceed{{1, -1}}), 2).rfind("risk_set.u", 0) == 0);
    CHECK(message(RiskSet(JointExceed{{1, 1, 1}}), 2).rfind("risk_set.u", 0) == 0);
    CHECK(message(RiskSet(JointExceed{{0, 0}}), 2).rfind("risk_set.u", 0) == 0);
    CHECK(message(RiskSet(AbsDiffExceed{0, 0, 1}), 2).rfind("risk_set.i/j", 0) == 0);
    CHECK(message(RiskSet(AbsDiffExceed{0, 2, 1}), 2).rfind("risk_set.i/j", 0) == 0);
    CHECK(message(RiskSet(AbsDiffExceed{0, 1, 0}), 2).rfind("risk_set.x", 0) == 0);
    CHECK(message(RiskSet(LinearExceed{{1, 1}, -1}), 2).rfind("risk_set.x", 0) == 0);
    CHECK(message(RiskSet(ComplementBox{{inf, inf}}), 2).rfind("risk_set.u", 0) == 0);
    CHECK(message(RiskSet(DistExceed{linf({Origin{}}), 1}), 3).rfind("risk_set.cone.dim", 0) == 0);
    CHECK(message(RiskSet(ComplementBox{{1, inf}}), 2) == "ok");
}
