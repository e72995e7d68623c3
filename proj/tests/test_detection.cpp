#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "bellpost/detection.hpp"
#include "bellpost/inequalities.hpp"

using namespace bellpost;

TEST_CASE("ideal embedding round-trips through postselection") {
    const auto s = BellScenario::dichotomic(2, 2);
    const Behavior b = Behavior::uniform(s);
    const auto db = DetectionBehavior::ideal(b);
    CHECK(db.validate().valid());
    CHECK(conditional_efficiency(db).eta_c == doctest::Approx(1.0));
    const Behavior back = postselect_coincidence(db);
    for (size_t i = 0; i < b.table.size(); ++i)
        CHECK(back.table[i] == doctest::Approx(b.table[i]));
}

TEST_CASE("registered-count distributions") {
    const auto nr = DetectorModel::independent(0.8);
    const auto one = nr.registered_distribution(1);
    CHECK(one[1] == doctest::Approx(0.8));
    const auto two = nr.registered_distribution(2);
    CHECK(two[1] == doctest::Approx(2.0 * 0.8 * 0.2));
    CHECK(two[2] == doctest::Approx(0.64));
    CHECK(two[0] == doctest::Approx(1.0 - 0.32 - 0.64));

    const auto onoff = DetectorModel::on_off(1.0);
    const auto two2 = onoff.registered_distribution(2);
    CHECK(two2[1] == doctest::Approx(1.0));
    CHECK(two2[2] == doctest::Approx(0.0));
}

TEST_CASE("uniform single-particle losses give eta_c = eta_det") {
    const auto s = BellScenario::dichotomic(3, 2);
    const Behavior b = Behavior::uniform(s);
    AllocationDistribution alloc;
    alloc[{1, 1, 1}] = 1.0;
    const std::vector<DetectorModel> dets(3, DetectorModel::independent(0.85));
    const auto db = apply_detector_model(b, alloc, dets);
    CHECK(db.validate().valid());
    CHECK(conditional_efficiency(db).eta_c == doctest::Approx(0.85));
    // fair-sampling losses leave the postselected behavior untouched
    const Behavior back = postselect_coincidence(db);
    for (size_t i = 0; i < b.table.size(); ++i)
        CHECK(back.table[i] == doctest::Approx(b.table[i]));
}

TEST_CASE("coarse graining keeps the coincidence slice intact") {
    const auto s = BellScenario::dichotomic(2, 1);
    const Behavior b = Behavior::uniform(s);
    AllocationDistribution alloc;
    alloc[{1, 1}] = 0.5;
    alloc[{2, 0}] = 0.5;
    const std::vector<DetectorModel> dets(2, DetectorModel::independent(0.9));
    const auto db = apply_detector_model(b, alloc, dets);
    const auto cg = coarse_grain(db);
    CHECK(cg.validate().valid());
    CHECK(cg.max_count == 1);
    const auto p1 = postselect_coincidence(db);
    const auto p2 = postselect_coincidence(cg);
    for (size_t i = 0; i < p1.table.size(); ++i)
        CHECK(p1.table[i] == doctest::Approx(p2.table[i]));
}

TEST_CASE("degenerate postselection is reported") {
    const auto s = BellScenario::dichotomic(2, 1);
    auto db = DetectionBehavior::zeros(s, 1);
    // all mass on the no-detection event
    std::vector<int> none = {0, 0};
    std::vector<int> nulls = {db.null_symbol(0), db.null_symbol(1)};
    db.at(0, db.count_index(none), db.ext_outcome_index(nulls)) = 1.0;
    CHECK(db.validate().valid());
    CHECK_THROWS_AS(postselect_coincidence(db), std::domain_error);
}
