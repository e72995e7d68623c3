#pragma once

#include <cstdint>
#include <vector>

#include "bellpost/inequalities.hpp"
#include "bellpost/scenario.hpp"

namespace bellpost {

// Per-party deterministic response maps x_k -> outcome index.
struct DeterministicStrategy {
    std::vector<std::vector<int>> response;  // [party][setting]
};

Behavior strategy_behavior(const BellScenario& s, const DeterministicStrategy& strat);

struct LhvBoundResult {
    double bound = 0.0;
    DeterministicStrategy witness;
    std::uint64_t strategies_checked = 0;
};

// Exact LHV bound by exhaustive enumeration of deterministic strategies.
// Throws if the joint strategy count exceeds 1e7.
LhvBoundResult lhv_bound(const BellFunctional& f);

// Extreme point of the 2-party/2-setting/2-outcome no-signaling polytope.
// Table layout matches Behavior for BellScenario::dichotomic(2, 2).
struct NSVertex {
    std::vector<double> table;  // 16 entries, x * 4 + a
    bool deterministic = false;
};

// All 24 vertices (16 deterministic + 8 PR-box type), by brute force over
// the half-integer grid with an exact active-constraint rank test.
const std::vector<NSVertex>& enumerate_ns_vertices();

struct HlnhvBoundResult {
    double bound = 0.0;
    int single_party = -1;          // the party split off from the pair
    std::vector<int> single_map;    // x_k -> outcome index for that party
    int vertex_index = -1;          // index into enumerate_ns_vertices()
};

// Exact HLNHV (Svetlichny-type) bound for N=3, two settings, dichotomic
// outcomes: max over bipartitions, deterministic single-party strategies,
// and no-signaling vertices for the remaining pair.
HlnhvBoundResult hlnhv_bound(const BellFunctional& f);

// Product behavior used by hlnhv_bound: party `single` plays the map,
// the other two share the vertex.
Behavior hlnhv_product_behavior(const BellScenario& s, int single, const std::vector<int>& map,
                                const NSVertex& v);

}  // namespace bellpost
