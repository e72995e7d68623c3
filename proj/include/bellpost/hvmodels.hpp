#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellpost/classical_bounds.hpp"
#include "bellpost/detection.hpp"
#include "bellpost/inequalities.hpp"

namespace bellpost {

enum class HvKind { Lhv, Hlnhv, ConservingNs };

// Local response table p(a_k, d_k | x_k) for one party; a is extended with
// the null symbol at index num_outcomes, required exactly when d = 0.
struct PartyResponse {
    int settings = 0;
    int num_outcomes = 0;
    int max_count = 1;
    std::vector<double> table;  // [x][d][a]

    double& at(int x, int d, int a);
    double at(int x, int d, int a) const;
    // p(d = 1 | x), the single-detection probability
    double detect_single(int x) const;

    static PartyResponse zeros(int settings, int num_outcomes, int max_count = 1);
};

// One mixture component: the lambda-conditioned detection-extended behavior
// plus the structural data the diagnostics need.
struct HvComponent {
    DetectionBehavior joint;
    std::vector<PartyResponse> parties;  // LHV factors (empty otherwise)
    int single_party = -1;               // HLNHV bipartition label
};

// Finite mixture over lambda of product (LHV) or bipartition-product
// (HLNHV) response tables, or of conserving no-signaling components.
struct HiddenVariableModel {
    BellScenario scenario;
    int max_count = 1;
    HvKind kind = HvKind::Lhv;
    std::vector<double> weights;
    std::vector<HvComponent> components;

    int support() const { return static_cast<int>(weights.size()); }
};

DetectionBehavior model_to_detection_behavior(const HiddenVariableModel& m);

// Seeded random model generator. LHV: per-party tables with x-dependent
// single-detection probabilities in [0.3, 0.95]. HLNHV (N=3): one party
// splits off; the pair is a mixture of no-signaling vertices with
// setting-local detection, so the no-signaling constraint holds by
// construction.
HiddenVariableModel random_model(const BellScenario& scenario, HvKind kind, int support,
                                 std::uint64_t seed);

// LHV model whose detection tables are setting independent (fair sampling).
HiddenVariableModel random_fair_sampling_model(const BellScenario& scenario, int support,
                                               std::uint64_t seed);

// Conserving model: per lambda an x-independent allocation over count
// vectors with sum = total_count, with arbitrary x-dependent outcome tables
// attached. With signaling_control the allocation is made x-dependent,
// breaking the no-signaling hypothesis on purpose.
HiddenVariableModel random_conserving_model(const BellScenario& scenario, int total_count,
                                            int support, std::uint64_t seed,
                                            bool signaling_control = false);

// Less structured conserving generator: random per-setting count tables
// projected onto the conservation support and the no-signaling equalities
// by iterative proportional fitting. Returns the worst post-projection
// no-signaling residual through *residual.
HiddenVariableModel projected_conserving_model(const BellScenario& scenario, int total_count,
                                               int support, std::uint64_t seed,
                                               double* residual = nullptr);

struct LhvChainReport {
    double delta = 1.0;
    double eta_c = 1.0;
    double postselected_value = 0.0;
    double intermediate_bound = 0.0;  // C + (I - C) delta
    double sharpened_bound = 0.0;     // sharpened right-hand side
    double delta_lower_bound = 1.0;   // 1 - ((1-eta)/eta)(sum M_k - N)
    double worst_margin = 0.0;        // min slack across the bound chain
    bool holds = false;
};

// LHV bound chain: delta from the product detection probabilities, the
// intermediate C + (I-C)delta bound, and the final sharpened inequality.
LhvChainReport lhv_chain_diagnostics(const HiddenVariableModel& m, const BellFunctional& f);

struct HlnhvChainReport {
    SettingVector reference;
    double eta_c = 1.0;
    double postselected_value = 0.0;
    double worst_l1_margin = 0.0;  // min over x of 4 D(x,y)(1-eta)/eta - L1(x)
    double telescoped_bound = 0.0;  // I + 4 (1-eta)/eta sum_x max|c| D(x,y)
    double sharpened_bound = 0.0;   // sharpened right-hand side with C
    double worst_margin = 0.0;
    bool holds = false;
};

// HLNHV chain: per-setting L1 distance of the lambda posteriors against the
// telescoping bound, and the final sharpened inequality.
HlnhvChainReport hlnhv_chain_diagnostics(const HiddenVariableModel& m, const BellFunctional& f,
                                       const SettingVector& reference);

struct ConservationReport {
    double max_posterior_deviation = 0.0;
    bool pass = false;
};

// Verifies that the lambda posterior given the coincidence event is setting
// independent. Precondition: every component's detection support conserves
// the particle count.
ConservationReport conservation_posterior_check(const HiddenVariableModel& m, int total_count,
                                                double tol);

struct LoopholeSearchResult {
    bool found = false;
    HiddenVariableModel model;
    double postselected_value = 0.0;
    double eta_c = 1.0;
    double sharpened_bound = 0.0;  // sharpened bound at the model's own eta_c
    int iterations_used = 0;
};

// Randomized hill-climb over LHV models with setting-dependent detection,
// maximizing the postselected functional value past `target`.
LoopholeSearchResult loophole_search(const BellFunctional& f, double target, std::uint64_t seed,
                                     int iterations);

struct SuiteResult {
    int trials = 0;
    bool pass = false;
    double worst_margin = 0.0;
    std::string detail;
};

SuiteResult run_lhv_chain_suite(const BellFunctional& f, int trials, std::uint64_t seed);
SuiteResult run_hlnhv_chain_suite(const BellFunctional& f, int trials, std::uint64_t seed);
SuiteResult run_fair_sampling_suite(const BellFunctional& f, int trials, std::uint64_t seed);
SuiteResult run_conservation_suite(const BellScenario& scenario, int total_count, int trials,
                                   std::uint64_t seed, bool negative_control = false);

}  // namespace bellpost
