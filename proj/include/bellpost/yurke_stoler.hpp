#pragma once

#include <cstdint>
#include <optional>

#include "bellpost/detection.hpp"

namespace bellpost {

// N sources on a ring, source k feeding parties k and k+1 (mod N); each
// particle goes left or right with probability 1/2.
struct YSConfig {
    int num_parties = 2;
    DetectorModel detector;  // homogeneous across parties

    void check() const;
};

// Exact distribution over per-party particle counts (sum = N).
AllocationDistribution ys_allocation_distribution(int num_parties);

// Closed-form conditional efficiency
// 2 eta_det eta_tra / (2 + (N-1)[eta_tra eta_1of2/eta_det + 2(1-eta_tra)]).
double ys_eta_c_analytic(const YSConfig& cfg);

// Exact eta_c through the generic detection machinery (oracle route).
double ys_eta_c_exact(const YSConfig& cfg);

struct MonteCarloEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t coincidences = 0;
    std::uint64_t conditioning_events = 0;  // all-single excluding the argmin party
    int argmin_party = -1;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

// Samples source directions, transmission, and detector response; estimates
// min_k p(all-single)/p(all-single except k) with a binomial standard error.
MonteCarloEstimate ys_eta_c_monte_carlo(const YSConfig& cfg, std::uint64_t samples,
                                        std::uint64_t seed);

// Bisection root of eta_c(eta_det) = eta_c_star over eta_det in (0, 1],
// holding eta_tra fixed and eta_1of2 = 2 eta_det (1 - eta_det) when the
// template detector is number resolving (independent-detection family) or
// the template's fixed eta_1of2 otherwise. Returns nullopt when even
// eta_det = 1 cannot reach the target.
std::optional<double> ys_threshold_eta_det(const YSConfig& cfg_template, double eta_c_star);

}  // namespace bellpost
