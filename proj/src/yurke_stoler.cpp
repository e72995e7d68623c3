#include "bellpost/yurke_stoler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace bellpost {

void YSConfig::check() const {
    if (num_parties < 2) throw std::invalid_argument("YS setup requires at least two parties");
    detector.check();
}

AllocationDistribution ys_allocation_distribution(int num_parties) {
    if (num_parties < 2) throw std::invalid_argument("YS setup requires at least two parties");
    const int n = num_parties;
    AllocationDistribution dist;
    const double p = 1.0 / static_cast<double>(1u << n);
    for (unsigned cfg = 0; cfg < (1u << n); ++cfg) {
        // bit k: source k sends right (to party k) if set, left (to party
        // k-1 mod N) otherwise
        std::vector<int> counts(n, 0);
        for (int k = 0; k < n; ++k) {
            const int party = (cfg >> k) & 1 ? k : (k + n - 1) % n;
            counts[party] += 1;
        }
        dist[counts] += p;
    }
    return dist;
}

double ys_eta_c_analytic(const YSConfig& cfg) {
    cfg.check();
    const auto& d = cfg.detector;
    if (d.eta_det <= 0.0) throw std::domain_error("ys_eta_c_analytic: eta_det must be positive");
    const int n = cfg.num_parties;
    return 2.0 * d.eta_det * d.eta_tra /
           (2.0 + (n - 1) * (d.eta_tra * d.eta_1of2 / d.eta_det + 2.0 * (1.0 - d.eta_tra)));
}

double ys_eta_c_exact(const YSConfig& cfg) {
    cfg.check();
    const auto scenario = BellScenario::dichotomic(cfg.num_parties, 1);
    const Behavior b = Behavior::uniform(scenario);
    const std::vector<DetectorModel> detectors(cfg.num_parties, cfg.detector);
    const auto db = apply_detector_model(b, ys_allocation_distribution(cfg.num_parties), detectors);
    return conditional_efficiency(db).eta_c;
}

MonteCarloEstimate ys_eta_c_monte_carlo(const YSConfig& cfg, std::uint64_t samples,
                                        std::uint64_t seed) {
    cfg.check();
    if (samples < 1) throw std::invalid_argument("need at least one sample");
    const int n = cfg.num_parties;
    const auto& dm = cfg.detector;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::uint64_t n_coin = 0;
    std::vector<std::uint64_t> n_rest(n, 0);  // all-single excluding party k
    std::vector<int> counts(n), detected(n);

    for (std::uint64_t it = 0; it < samples; ++it) {
        std::fill(counts.begin(), counts.end(), 0);
        for (int k = 0; k < n; ++k) {
            const int party = (rng() & 1) ? k : (k + n - 1) % n;
            counts[party] += 1;
        }
        for (int k = 0; k < n; ++k) {
            int survive = 0;
            for (int p = 0; p < counts[k]; ++p)
                if (unif(rng) < dm.eta_tra) ++survive;
            const auto reg = dm.registered_distribution(survive);
            const double u = unif(rng);
            detected[k] = u < reg[0] ? 0 : (u < reg[0] + reg[1] ? 1 : 2);
        }
        bool all_single = true;
        for (int k = 0; k < n; ++k)
            if (detected[k] != 1) all_single = false;
        if (all_single) ++n_coin;
        for (int k = 0; k < n; ++k) {
            bool rest = true;
            for (int j = 0; j < n; ++j)
                if (j != k && detected[j] != 1) rest = false;
            if (rest) ++n_rest[k];
        }
    }

    MonteCarloEstimate est;
    est.samples = samples;
    est.seed = seed;
    est.coincidences = n_coin;
    est.estimate = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        if (n_rest[k] == 0)
            throw std::domain_error("monte carlo: no conditioning events observed");
        const double ratio = static_cast<double>(n_coin) / static_cast<double>(n_rest[k]);
        if (ratio < est.estimate) {
            est.estimate = ratio;
            est.argmin_party = k;
            est.conditioning_events = n_rest[k];
        }
    }
    // binomial standard error of the conditional proportion
    est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) /
                              static_cast<double>(est.conditioning_events));
    return est;
}

std::optional<double> ys_threshold_eta_det(const YSConfig& cfg_template, double eta_c_star) {
    if (!(eta_c_star > 0.0 && eta_c_star <= 1.0))
        throw std::domain_error("eta_c_star must lie in (0, 1]");

    auto eta_c_of = [&](double eta_det) {
        YSConfig cfg = cfg_template;
        cfg.detector.eta_det = eta_det;
        // independent detection of the two arrivals in both conventions
        cfg.detector.eta_1of2 = cfg.detector.number_resolving
                                    ? 2.0 * eta_det * (1.0 - eta_det)
                                    : 1.0 - (1.0 - eta_det) * (1.0 - eta_det);
        return ys_eta_c_analytic(cfg);
    };

    if (eta_c_of(1.0) < eta_c_star) return std::nullopt;
    double lo = 1e-9, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (eta_c_of(mid) < eta_c_star)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace bellpost
