#include "doctest.h"

#include "bellpost/scenario.hpp"

using namespace bellpost;

TEST_CASE("index round trips, party 1 fastest") {
    const auto s = BellScenario::dichotomic(3, 2);
    CHECK(s.num_joint_settings() == 8);
    CHECK(s.num_joint_outcomes() == 8);
    CHECK(setting_index(s, {1, 0, 0}) == 1);
    CHECK(setting_index(s, {0, 1, 0}) == 2);
    CHECK(outcome_index(s, {0, 0, 1}) == 4);
    for (int x = 0; x < s.num_joint_settings(); ++x)
        CHECK(setting_index(s, setting_from_index(s, x)) == x);
    for (int a = 0; a < s.num_joint_outcomes(); ++a)
        CHECK(outcome_index(s, outcome_from_index(s, a)) == a);
}

TEST_CASE("uniform behavior validates, perturbed does not") {
    const auto s = BellScenario::dichotomic(2, 2);
    Behavior b = Behavior::uniform(s);
    CHECK(validate_behavior(b).valid());
    b.at(0, 0) += 0.1;
    CHECK_FALSE(validate_behavior(b).valid());
}

TEST_CASE("no-signaling holds for products and fails for signaling tables") {
    const auto s = BellScenario::dichotomic(2, 2);
    Behavior b = Behavior::zeros(s);
    // p(a1|x1) p(a2|x2) with setting-dependent local marginals
    const double p1[2] = {0.3, 0.8}, p2[2] = {0.6, 0.1};
    for (int x = 0; x < 4; ++x) {
        const auto xv = setting_from_index(s, x);
        for (int a = 0; a < 4; ++a) {
            const auto av = outcome_from_index(s, a);
            const double q1 = av[0] ? p1[xv[0]] : 1 - p1[xv[0]];
            const double q2 = av[1] ? p2[xv[1]] : 1 - p2[xv[1]];
            b.at(x, a) = q1 * q2;
        }
    }
    CHECK(check_no_signaling(b).no_signaling);

    Behavior sig = Behavior::uniform(s);
    // party 2's marginal depends on x1
    sig.at(0, 0) = 0.5;
    sig.at(0, 1) = 0.0;
    sig.at(0, 2) = 0.5;
    sig.at(0, 3) = 0.0;
    CHECK_FALSE(check_no_signaling(sig).no_signaling);
}

TEST_CASE("full correlator of a deterministic table") {
    const auto s = BellScenario::dichotomic(2, 1);
    Behavior b = Behavior::zeros(s);
    b.at(0, outcome_index(s, {1, 0})) = 1.0;  // +1, -1
    CHECK(full_correlator(b, {0, 0}) == doctest::Approx(-1.0));
}
