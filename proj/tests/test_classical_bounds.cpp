#include "doctest.h"

#include <cmath>

#include "bellpost/classical_bounds.hpp"

using namespace bellpost;

TEST_CASE("exhaustive LHV bounds") {
    CHECK(lhv_bound(catalog("chsh", 2)).bound == doctest::Approx(2.0));
    CHECK(lhv_bound(catalog("mermin", 3)).bound == doctest::Approx(2.0));
    CHECK(lhv_bound(catalog("svetlichny", 3)).bound == doctest::Approx(4.0));
}

TEST_CASE("LHV witness reproduces the bound") {
    const auto f = catalog("chsh", 2);
    const auto res = lhv_bound(f);
    CHECK(evaluate(f, strategy_behavior(f.scenario, res.witness)) == doctest::Approx(res.bound));
}

TEST_CASE("no-signaling polytope has 24 vertices") {
    const auto& vs = enumerate_ns_vertices();
    CHECK(vs.size() == 24);
    int det = 0;
    const auto s = BellScenario::dichotomic(2, 2);
    for (const auto& v : vs) {
        if (v.deterministic) ++det;
        Behavior b{s, v.table};
        CHECK(validate_behavior(b).valid());
        CHECK(check_no_signaling(b).no_signaling);
    }
    CHECK(det == 16);
}

TEST_CASE("HLNHV bound for Svetlichny") {
    const auto sv = catalog("svetlichny", 3);
    const auto res = hlnhv_bound(sv);
    CHECK(res.bound == doctest::Approx(4.0));
    const auto& v = enumerate_ns_vertices()[res.vertex_index];
    const Behavior b = hlnhv_product_behavior(sv.scenario, res.single_party, res.single_map, v);
    CHECK(evaluate(sv, b) == doctest::Approx(res.bound));
}

TEST_CASE("HLNHV bound dominates the LHV bound") {
    const auto m = catalog("mermin", 3);
    const double lhv = lhv_bound(m).bound;
    const double hln = hlnhv_bound(m).bound;
    CHECK(hln >= lhv - 1e-12);
    CHECK(hln <= constant_C(m) + 1e-12);
}
