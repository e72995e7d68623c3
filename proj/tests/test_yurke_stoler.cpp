#include "doctest.h"

#include <cmath>

#include "bellpost/yurke_stoler.hpp"

using namespace bellpost;

TEST_CASE("analytic efficiency matches the exact detection pipeline") {
    for (int n : {2, 3, 4}) {
        for (double eta_det : {0.6, 0.85, 1.0}) {
            for (double eta_tra : {0.7, 1.0}) {
                YSConfig cfg;
                cfg.num_parties = n;
                cfg.detector = DetectorModel::independent(eta_det, eta_tra);
                CHECK(ys_eta_c_exact(cfg) == doctest::Approx(ys_eta_c_analytic(cfg)).epsilon(1e-12));

                cfg.detector = DetectorModel::on_off(eta_det, eta_tra);
                CHECK(ys_eta_c_exact(cfg) == doctest::Approx(ys_eta_c_analytic(cfg)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("ideal detectors give unit efficiency") {
    YSConfig cfg;
    cfg.num_parties = 3;
    cfg.detector = DetectorModel::independent(1.0);
    cfg.detector.eta_1of2 = 0.0;
    CHECK(ys_eta_c_analytic(cfg) == doctest::Approx(1.0));
}

TEST_CASE("ideal on-off detectors cap at two thirds") {
    YSConfig cfg;
    cfg.num_parties = 2;
    cfg.detector = DetectorModel::on_off(1.0);
    CHECK(ys_eta_c_analytic(cfg) == doctest::Approx(2.0 / 3.0));
    CHECK(ys_eta_c_exact(cfg) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("detector-efficiency thresholds") {
    const double r2 = std::sqrt(2.0);
    YSConfig cfg;
    cfg.detector = DetectorModel::independent(1.0);

    cfg.num_parties = 2;
    auto t = ys_threshold_eta_det(cfg, 2.0 * (r2 - 1.0));
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(4.0 / (3.0 + r2)).epsilon(1e-9));

    cfg.num_parties = 3;
    t = ys_threshold_eta_det(cfg, 0.75);
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(0.9).epsilon(1e-9));

    t = ys_threshold_eta_det(cfg, 12.0 / (11.0 + r2));
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(36.0 / (35.0 + r2)).epsilon(1e-9));

    // on-off detectors never reach the CHSH threshold
    cfg.num_parties = 2;
    cfg.detector = DetectorModel::on_off(1.0);
    CHECK_FALSE(ys_threshold_eta_det(cfg, 2.0 * (r2 - 1.0)).has_value());
}

TEST_CASE("Monte Carlo estimate brackets the analytic value") {
    YSConfig cfg;
    cfg.num_parties = 3;
    cfg.detector = DetectorModel::independent(0.9, 0.95);
    const auto est = ys_eta_c_monte_carlo(cfg, 200000, 42);
    const double truth = ys_eta_c_analytic(cfg);
    CHECK(std::abs(est.estimate - truth) < std::max(4.0 * est.std_error, 1e-3));
}
