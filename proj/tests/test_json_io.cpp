#include "doctest.h"

#include <random>

#include "bellpost/json_io.hpp"

using namespace bellpost;

TEST_CASE("behavior JSON round trip preserves full precision") {
    const auto s = BellScenario::dichotomic(3, 2);
    Behavior b = Behavior::zeros(s);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int x = 0; x < s.num_joint_settings(); ++x) {
        double sum = 0.0;
        for (int a = 0; a < s.num_joint_outcomes(); ++a) sum += (b.at(x, a) = unif(rng));
        for (int a = 0; a < s.num_joint_outcomes(); ++a) b.at(x, a) /= sum;
    }

    const auto j = behavior_to_json(b);
    const Behavior back = behavior_from_json(j);
    CHECK(back.scenario == s);
    for (size_t i = 0; i < b.table.size(); ++i) CHECK(back.table[i] == b.table[i]);

    // text round trip as well
    const Behavior back2 =
        behavior_from_json(nlohmann::ordered_json::parse(j.dump()));
    for (size_t i = 0; i < b.table.size(); ++i) CHECK(back2.table[i] == b.table[i]);
}

TEST_CASE("malformed tables are rejected") {
    const auto s = BellScenario::dichotomic(2, 2);
    auto j = behavior_to_json(Behavior::uniform(s));
    j["table"].erase(3);
    CHECK_THROWS(behavior_from_json(j));
}
