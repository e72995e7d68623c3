#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "bellpost/hvmodels.hpp"
#include "bellpost/sharpening.hpp"

using namespace bellpost;

TEST_CASE("random models yield valid detection behaviors") {
    const auto s2 = BellScenario::dichotomic(2, 2);
    const auto m = random_model(s2, HvKind::Lhv, 6, 1);
    CHECK(model_to_detection_behavior(m).validate().valid());

    const auto s3 = BellScenario::dichotomic(3, 2);
    const auto h = random_model(s3, HvKind::Hlnhv, 6, 2);
    const auto db = model_to_detection_behavior(h);
    CHECK(db.validate().valid());
    // operational no-signaling of the postselection denominator statistics
    const auto cg = coarse_grain(db);
    CHECK(cg.validate().valid());
}

TEST_CASE("LHV bound chain holds on random models") {
    const auto chsh = catalog("chsh", 2);
    const auto suite = run_lhv_chain_suite(chsh, 50, 100);
    CHECK(suite.pass);
    CHECK(suite.worst_margin >= -1e-9);
}

TEST_CASE("posterior-telescoping chain holds on random bipartition models") {
    const auto sv = catalog("svetlichny", 3);
    const auto suite = run_hlnhv_chain_suite(sv, 15, 200);
    CHECK(suite.pass);
    CHECK(suite.worst_margin >= -1e-9);
}

TEST_CASE("fair-sampling losses never fake a violation") {
    const auto chsh = catalog("chsh", 2);
    const auto suite = run_fair_sampling_suite(chsh, 100, 300);
    CHECK(suite.pass);
}

TEST_CASE("conservation plus no-signaling fixes the posterior") {
    const auto s = BellScenario::dichotomic(2, 2);
    const auto good = run_conservation_suite(s, 2, 10, 400, false);
    CHECK(good.pass);
    CHECK(good.worst_margin < 1e-8);

    const auto bad = run_conservation_suite(s, 2, 10, 400, true);
    CHECK_FALSE(bad.pass);
    CHECK(bad.worst_margin > 1e-4);
}

TEST_CASE("conservation check rejects non-conserving support") {
    const auto s = BellScenario::dichotomic(2, 2);
    const auto m = random_model(s, HvKind::Lhv, 3, 7);  // single-particle losses
    CHECK_THROWS_AS(conservation_posterior_check(m, 2, 1e-8), std::invalid_argument);
}

TEST_CASE("selective detection fakes a CHSH violation but obeys the sharpened bound") {
    const auto chsh = catalog("chsh", 2);
    const auto res = loophole_search(chsh, 2.0, 12, 60000);
    REQUIRE(res.found);
    CHECK(res.postselected_value > 2.0);
    CHECK(res.eta_c < 1.0);
    CHECK(res.sharpened_bound >= res.postselected_value - 1e-9);
    // consistency: the reported model reproduces the reported value
    const auto rep = lhv_chain_diagnostics(res.model, chsh);
    CHECK(rep.postselected_value == doctest::Approx(res.postselected_value));
    CHECK(rep.holds);
}
