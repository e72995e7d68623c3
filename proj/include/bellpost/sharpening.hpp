#pragma once

#include "bellpost/inequalities.hpp"

namespace bellpost {

struct SharpenedBound {
    double bound = 0.0;
    double eta_c = 1.0;
    bool use_c_opt = false;
    ModelClass model_class = ModelClass::Lhv;
    bool vacuous = false;  // bound exceeds C, no behavior can violate it
};

// LHV sharpening: C + (I - C)[1 - ((1-eta)/eta)(sum_k M_k - N)].
SharpenedBound sharpened_bound_lhv(const BellFunctional& f, double eta_c);

// HLNHV sharpening: I + 4 * Ctilde * N * (1-eta)/eta, with Ctilde = C_opt
// when use_c_opt (default) else C.
SharpenedBound sharpened_bound_hlnhv(const BellFunctional& f, double eta_c, bool use_c_opt = true);

struct ThresholdResult {
    double eta_c_star = 1.0;
    double bisection_root = 1.0;  // independent cross-check of the closed form
    ModelClass model_class = ModelClass::Lhv;
    bool use_c_opt = false;
};

// Efficiency at which the sharpened bound equals I_Q. Closed form
// eta* = 1/(1+t), cross-validated by bisection to 1e-12. Throws if
// I_Q <= I (the inequality is never violated).
ThresholdResult threshold_eta_c(const BellFunctional& f, double quantum_value,
                                ModelClass model_class, bool use_c_opt = true);

// N/(N+1) for the odd-N Mermin family in the standard one-particle-per-party
// scenario with eta_tra = 1.
double mermin_family_threshold(int num_parties);

}  // namespace bellpost
