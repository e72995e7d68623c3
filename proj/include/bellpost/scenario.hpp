#pragma once

#include <string>
#include <vector>

namespace bellpost {

// N-partite Bell scenario: per-party setting counts and finite outcome
// alphabets (default dichotomic {-1,+1}).
struct BellScenario {
    int num_parties = 0;
    std::vector<int> settings_per_party;
    std::vector<std::vector<int>> outcomes_per_party;

    static BellScenario dichotomic(int parties, int settings_each);

    int num_joint_settings() const;
    int num_joint_outcomes() const;
    bool all_dichotomic() const;
    void check() const;

    bool operator==(const BellScenario&) const = default;
};

// Per-party index vectors. Settings and outcomes are 0-based indices into
// the scenario's ranges/alphabets.
using SettingVector = std::vector<int>;
using OutcomeVector = std::vector<int>;

// Flat index math. Party 1 varies fastest.
int setting_index(const BellScenario& s, const SettingVector& x);
SettingVector setting_from_index(const BellScenario& s, int index);
int outcome_index(const BellScenario& s, const OutcomeVector& a);
OutcomeVector outcome_from_index(const BellScenario& s, int index);

// Conditional probability table p(a|x), stored dense row-major:
// table[x * num_joint_outcomes + a], setting index slowest.
struct Behavior {
    BellScenario scenario;
    std::vector<double> table;

    double& at(int x, int a) { return table[static_cast<size_t>(x) * scenario.num_joint_outcomes() + a]; }
    double at(int x, int a) const { return table[static_cast<size_t>(x) * scenario.num_joint_outcomes() + a]; }

    static Behavior zeros(const BellScenario& s);
    static Behavior uniform(const BellScenario& s);
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool valid() const { return violations.empty(); }
};

// Checks table dimensions, nonnegativity, and per-setting normalization
// (tolerance 1e-12). Dimension mismatch throws std::invalid_argument.
ValidationReport validate_behavior(const Behavior& b, double tol = 1e-12);

struct NoSignalingReport {
    bool no_signaling = true;
    double worst_violation = 0.0;
    int worst_party = -1;
};

// Operational no-signaling: for each party k the marginal over a_k must be
// independent of x_k.
NoSignalingReport check_no_signaling(const Behavior& b, double tol = 1e-9);

// <prod_k A_k>_x for dichotomic alphabets. Throws on non-dichotomic input.
double full_correlator(const Behavior& b, const SettingVector& x);

}  // namespace bellpost
