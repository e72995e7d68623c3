#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "bellpost/inequalities.hpp"
#include "bellpost/scenario.hpp"

namespace bellpost {

using PureState = std::vector<std::complex<double>>;

// (|0...0> + |1...1>)/sqrt(2), 1 <= N <= 12. Qubit k is bit k-1 of the
// amplitude index (party 1 least significant).
PureState ghz_state(int num_parties);

// Unit Bloch vector defining the dichotomic observable n.sigma.
struct BlochAngles {
    double theta = 0.0;
    double phi = 0.0;
};

// settings[party][setting] -> observable for that choice.
using MeasurementSettings = std::vector<std::vector<BlochAngles>>;

// Born-rule behavior p(a|x) from per-party rank-1 projective measurements.
// Outcome index 0 is eigenvalue -1, index 1 is eigenvalue +1.
Behavior quantum_behavior(const PureState& state, const MeasurementSettings& settings);

struct OptimizeResult {
    double value = 0.0;
    MeasurementSettings settings;
    int restarts = 0;
    std::uint64_t seed = 0;
    int evaluations = 0;
};

// Multi-start coordinate descent with step halving over the measurement
// angles, maximizing evaluate(f, quantum_behavior(state, .)).
OptimizeResult optimize_settings(const BellFunctional& f, const PureState& state,
                                 int restarts = 32, std::uint64_t seed = 0);

}  // namespace bellpost
