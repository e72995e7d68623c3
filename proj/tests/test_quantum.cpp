#include "doctest.h"

#include <cmath>

#include "bellpost/quantum.hpp"

using namespace bellpost;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("GHZ amplitudes") {
    const auto psi = ghz_state(3);
    REQUIRE(psi.size() == 8);
    CHECK(std::abs(psi[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(psi[7] - 1.0 / std::sqrt(2.0)) < 1e-15);
    for (int i = 1; i < 7; ++i) CHECK(std::abs(psi[i]) < 1e-15);
}

TEST_CASE("equatorial GHZ correlator equals cos of the phase sum") {
    for (int n : {2, 3, 4}) {
        const auto psi = ghz_state(n);
        const double phis[3] = {0.3, -1.1, 2.4};
        for (double shift : {0.0, 0.7, 1.9}) {
            MeasurementSettings settings(n);
            double phase_sum = 0.0;
            for (int k = 0; k < n; ++k) {
                const double phi = phis[k % 3] + shift;
                settings[k] = {BlochAngles{kPi / 2.0, phi}};
                phase_sum += phi;
            }
            const Behavior b = quantum_behavior(psi, settings);
            CHECK(validate_behavior(b).valid());
            CHECK(check_no_signaling(b, 1e-9).no_signaling);
            SettingVector x(n, 0);
            CHECK(full_correlator(b, x) == doctest::Approx(std::cos(phase_sum)).epsilon(1e-10));
        }
    }
}

TEST_CASE("computational-basis measurement on GHZ gives perfect correlations") {
    const auto psi = ghz_state(2);
    MeasurementSettings settings(2, {BlochAngles{0.0, 0.0}});
    const Behavior b = quantum_behavior(psi, settings);
    CHECK(b.at(0, outcome_index(b.scenario, {0, 0})) == doctest::Approx(0.5));
    CHECK(b.at(0, outcome_index(b.scenario, {1, 1})) == doctest::Approx(0.5));
    CHECK(b.at(0, outcome_index(b.scenario, {0, 1})) == doctest::Approx(0.0));
}

TEST_CASE("optimizer certifies the CHSH quantum value") {
    const auto f = catalog("chsh", 2);
    const auto res = optimize_settings(f, ghz_state(2), 16, 3);
    CHECK(res.value == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-7));
}
