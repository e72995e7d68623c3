#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "bellpost/sharpening.hpp"

using namespace bellpost;

TEST_CASE("perfect efficiency recovers the original bounds") {
    const auto chsh = catalog("chsh", 2);
    CHECK(sharpened_bound_lhv(chsh, 1.0).bound == doctest::Approx(2.0));
    const auto sv = catalog("svetlichny", 3);
    CHECK(sharpened_bound_hlnhv(sv, 1.0).bound == doctest::Approx(4.0));
}

TEST_CASE("sharpened bounds are monotone in efficiency") {
    const auto chsh = catalog("chsh", 2);
    double prev = sharpened_bound_lhv(chsh, 0.7).bound;
    for (double eta : {0.8, 0.9, 0.99, 1.0}) {
        const double cur = sharpened_bound_lhv(chsh, eta).bound;
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("threshold closed forms") {
    const double r2 = std::sqrt(2.0);
    const auto chsh = catalog("chsh", 2);
    const auto mermin = catalog("mermin", 3);
    const auto sv = catalog("svetlichny", 3);

    CHECK(threshold_eta_c(chsh, *chsh.quantum_value, ModelClass::Lhv).eta_c_star ==
          doctest::Approx(2.0 * (r2 - 1.0)).epsilon(1e-12));
    CHECK(threshold_eta_c(mermin, *mermin.quantum_value, ModelClass::Lhv).eta_c_star ==
          doctest::Approx(0.75).epsilon(1e-12));
    CHECK(threshold_eta_c(sv, *sv.quantum_value, ModelClass::Hlnhv, true).eta_c_star ==
          doctest::Approx(12.0 / (11.0 + r2)).epsilon(1e-12));
    CHECK(threshold_eta_c(chsh, *chsh.quantum_value, ModelClass::Hlnhv, true).eta_c_star ==
          doctest::Approx(8.0 / (7.0 + r2)).epsilon(1e-12));
}

TEST_CASE("bisection cross-check agrees with the closed form") {
    const auto sv = catalog("svetlichny", 3);
    const auto res = threshold_eta_c(sv, *sv.quantum_value, ModelClass::Hlnhv, true);
    CHECK(std::abs(res.eta_c_star - res.bisection_root) < 1e-10);
}

TEST_CASE("thresholds are undefined without quantum violation") {
    const auto chsh = catalog("chsh", 2);
    CHECK_THROWS_AS(threshold_eta_c(chsh, 1.5, ModelClass::Lhv), std::domain_error);
}

TEST_CASE("Mermin family thresholds N/(N+1)") {
    CHECK(mermin_family_threshold(3) == doctest::Approx(0.75));
    CHECK(mermin_family_threshold(5) == doctest::Approx(5.0 / 6.0));
    CHECK(mermin_family_threshold(7) == doctest::Approx(7.0 / 8.0));
}

TEST_CASE("product of probabilities dominates the union-style lower bound") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 100000; ++trial) {
        const int l = 2 + static_cast<int>(rng() % 5);
        double prod = 1.0, sum = 0.0;
        for (int i = 0; i < l; ++i) {
            const double p = unif(rng);
            prod *= p;
            sum += p;
        }
        CHECK(prod >= sum - l + 1 - 1e-12);
    }
}
