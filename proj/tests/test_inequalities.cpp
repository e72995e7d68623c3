#include "doctest.h"

#include <cmath>
#include <random>

#include "bellpost/classical_bounds.hpp"
#include "bellpost/inequalities.hpp"

using namespace bellpost;

TEST_CASE("catalog constants") {
    const auto chsh = catalog("chsh", 2);
    CHECK(chsh.classical_bound == doctest::Approx(2.0));
    CHECK(constant_C(chsh) == doctest::Approx(4.0));
    CHECK(constant_C_opt(chsh).value == doctest::Approx(2.0));
    CHECK(*chsh.quantum_value == doctest::Approx(2.0 * std::sqrt(2.0)));

    const auto mermin = catalog("mermin", 3);
    CHECK(mermin.classical_bound == doctest::Approx(2.0));
    CHECK(constant_C(mermin) == doctest::Approx(4.0));
    CHECK(constant_C_opt(mermin).value == doctest::Approx(2.0));
    CHECK(*mermin.quantum_value == doctest::Approx(4.0));

    const auto sv = catalog("svetlichny", 3);
    CHECK(sv.classical_bound == doctest::Approx(4.0));
    CHECK(constant_C(sv) == doctest::Approx(8.0));
    CHECK(constant_C_opt(sv).value == doctest::Approx(4.0));
    CHECK(*sv.quantum_value == doctest::Approx(4.0 * std::sqrt(2.0)));

    const auto m5 = catalog("mermin", 5);
    CHECK(m5.classical_bound == doctest::Approx(4.0));
    CHECK(*m5.quantum_value == doctest::Approx(16.0));
}

TEST_CASE("no-signaling vertices reach the algebraic CHSH maximum") {
    const auto chsh = catalog("chsh", 2);
    double best = 0.0;
    for (const auto& v : enumerate_ns_vertices()) {
        Behavior b{chsh.scenario, v.table};
        best = std::max(best, evaluate(chsh, b));
    }
    CHECK(best == doctest::Approx(4.0));
}

TEST_CASE("setting distance is the Hamming distance") {
    CHECK(setting_distance({0, 1, 1}, {0, 1, 1}) == 0);
    CHECK(setting_distance({0, 1, 1}, {1, 0, 1}) == 2);
}

TEST_CASE("C_opt never exceeds C") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    const auto s = BellScenario::dichotomic(3, 2);
    for (int trial = 0; trial < 25; ++trial) {
        BellFunctional f;
        f.scenario = s;
        f.coefficients.resize(static_cast<size_t>(s.num_joint_settings()) * s.num_joint_outcomes());
        for (double& c : f.coefficients) c = unif(rng);
        f.classical_bound = 0.0;
        CHECK(constant_C_opt(f).value <= constant_C(f) + 1e-12);
    }
}

TEST_CASE("catalog input validation") {
    CHECK_THROWS(catalog("mermin", 4));   // even N
    CHECK_THROWS(catalog("chsh", 3));
    CHECK_THROWS(catalog("svetlichny", 4));
    CHECK_THROWS(catalog("nope", 2));
}
