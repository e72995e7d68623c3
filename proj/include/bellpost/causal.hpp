#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace bellpost {

// Directed acyclic graph with bidirected (latent-confounder) edges. Queries
// run on the expanded graph where each bidirected edge gets a fresh latent
// parent.
struct CausalDag {
    std::vector<std::string> nodes;
    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<std::pair<std::string, std::string>> bidirected;

    void add_node(const std::string& name);
    void add_edge(const std::string& from, const std::string& to);
    void add_bidirected(const std::string& a, const std::string& b);
    bool has_node(const std::string& name) const;

    // Replaces every bidirected edge with a fresh latent parent node.
    CausalDag expanded() const;
    // Replaces every bidirected edge A o-o B with A->B (or B->A).
    CausalDag directed_variant(bool first_to_second) const;

    // Unique names, edge endpoints exist, expanded graph acyclic.
    void check() const;
};

struct DsepQuery {
    std::vector<std::string> sources;
    std::vector<std::string> targets;
    std::vector<std::string> given;
};

struct PathStep {
    std::string node;
    bool collider = false;  // meaningful for interior nodes only
};

struct DsepResult {
    bool separated = true;
    std::vector<PathStep> witness;  // one open path when d-connected
};

// Reachability-style d-separation with an explicit open-path witness.
DsepResult d_separated(const CausalDag& g, const DsepQuery& q);

// Independent validator for witness paths: checks adjacency and the
// collider/noncollider opening rules against the conditioning set.
bool is_open_path(const CausalDag& g, const std::vector<PathStep>& path,
                  const std::vector<std::string>& given);

enum class DiagramKind { Lhv, Hlnhv };

// N-party detection diagram: Lambda -> {A_k, D_k}, X_k -> {A_k, D_k}, and a
// latent confounder between A_k and D_k. The Hlnhv kind adds a shared latent
// source per nonlocal group: all pairs when `nonlocal_group` is empty, or
// the single given group.
CausalDag bell_diagram(int num_parties, DiagramKind kind,
                       const std::vector<int>& nonlocal_group = {});

// Exact conditional-independence gap on the expanded graph with random
// binary conditional tables: max over conditioning assignments of the
// total-variation distance between p(S,T|z) and p(S|z) p(T|z). Throws when
// the expanded graph has more than 20 nodes.
double ci_oracle(const CausalDag& g, std::uint64_t seed, const DsepQuery& q);

// Largest CI gap found over `restarts` seeded parameterizations.
double search_ci_violation(const CausalDag& g, const DsepQuery& q, int restarts,
                           std::uint64_t seed);

struct ClaimResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct CausalClaimsReport {
    std::vector<ClaimResult> claims;
    bool all_pass = false;
};

// Fixed claims battery: graphical factorization queries on the two- and
// three-party diagrams (including both directed readings of the confounder
// edges), the X_1 -- Lambda connection given the detection nodes with a
// validated witness, CI-oracle soundness spot checks, and the functional
// restoration of setting independence under conservation plus no-signaling.
// With negative_control the conservation step uses setting-dependent losses
// and is expected to fail.
CausalClaimsReport verify_causal_claims(std::uint64_t seed, bool negative_control = false);

}  // namespace bellpost
