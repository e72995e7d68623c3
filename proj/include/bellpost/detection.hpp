#pragma once

#include <map>
#include <vector>

#include "bellpost/scenario.hpp"

namespace bellpost {

// Detection-extended table p(a, d | x). Per party: d_k in {0..max_count}
// detected particles, and an extended outcome index in 0..|A_k| where the
// last value is the null symbol (required exactly when d_k = 0).
struct DetectionBehavior {
    BellScenario scenario;
    int max_count = 1;  // N_T
    std::vector<double> table;  // [x][d][a], x slowest, party 1 fastest in d and a

    int num_joint_counts() const;
    int num_joint_ext_outcomes() const;
    int null_symbol(int party) const {
        return static_cast<int>(scenario.outcomes_per_party[party].size());
    }

    int count_index(const std::vector<int>& d) const;
    std::vector<int> count_from_index(int index) const;
    int ext_outcome_index(const std::vector<int>& a) const;
    std::vector<int> ext_outcome_from_index(int index) const;

    double& at(int x, int d, int a);
    double at(int x, int d, int a) const;

    static DetectionBehavior zeros(const BellScenario& s, int max_count);

    // d index of the all-single event.
    int all_single_index() const;

    // Checks normalization, nonnegativity, and the null-symbol invariant.
    ValidationReport validate(double tol = 1e-12) const;

    // Embeds an ideal behavior: one particle per party, always detected.
    static DetectionBehavior ideal(const Behavior& b);
};

// Per-party detector: single-particle efficiency eta_det, transmission
// eta_tra, and the probability eta_1of2 of registering exactly one count
// when two particles arrive. Non-number-resolving (on-off) detectors clamp
// registered counts to {0, 1}.
struct DetectorModel {
    double eta_det = 1.0;
    double eta_tra = 1.0;
    double eta_1of2 = 0.0;
    bool number_resolving = true;

    void check() const;
    // Independent-detection convention eta_1of2 = 2 eta_det (1 - eta_det).
    static DetectorModel independent(double eta_det, double eta_tra = 1.0);
    static DetectorModel on_off(double eta_det, double eta_tra = 1.0, double eta_1of2 = 1.0);

    // Distribution over registered counts given `arrived` particles at the
    // detector (after transmission). Supports arrived <= 2.
    std::vector<double> registered_distribution(int arrived) const;
    // Same, but starting from allocated particles before transmission loss.
    std::vector<double> detected_distribution(int allocated) const;
};

// Merges counts into {single = 1, other = 0}; outcomes of merged events
// collapse to the null symbol.
DetectionBehavior coarse_grain(const DetectionBehavior& db);

// p(a | d = all-single, x). Throws degenerate-postselection if some x has
// zero coincidence probability.
Behavior postselect_coincidence(const DetectionBehavior& db);

struct ConditionalEfficiency {
    double eta_c = 1.0;
    int argmin_party = -1;
    int argmin_setting = -1;  // joint setting index
};

// Minimal conditional detection efficiency
// min_{k,x} p(all-single|x) / p(all-single excluding k | x).
ConditionalEfficiency conditional_efficiency(const DetectionBehavior& db);

// Distribution over per-party particle counts, summing to a constant total.
using AllocationDistribution = std::map<std::vector<int>, double>;

// Composes an x-independent allocation of particles with per-party detector
// models on top of the ideal outcome statistics `b`: coincidence events
// carry b's outcomes, non-coincidence events carry null/default outcomes.
DetectionBehavior apply_detector_model(const Behavior& b, const AllocationDistribution& allocation,
                                       const std::vector<DetectorModel>& detectors);

}  // namespace bellpost
