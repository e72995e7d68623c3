#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bellpost/scenario.hpp"

namespace bellpost {

enum class ModelClass { Lhv, Hlnhv };

std::string to_string(ModelClass mc);

// Linear Bell functional sum_{a,x} c_{a,x} p(a|x) <= classical_bound.
struct BellFunctional {
    BellScenario scenario;
    std::vector<double> coefficients;  // same layout as Behavior::table
    double classical_bound = 0.0;
    ModelClass model_class = ModelClass::Lhv;
    std::string name;
    std::optional<double> quantum_value;

    double coeff(int x, int a) const {
        return coefficients[static_cast<size_t>(x) * scenario.num_joint_outcomes() + a];
    }
    // Validates dimensions and C >= classical_bound.
    void check() const;
};

// Full-correlator functional with per-setting coefficients ctilde_x,
// expanded to c_{a,x} = (prod_k a_k) ctilde_x on dichotomic alphabets.
BellFunctional correlator_functional(const BellScenario& s, const std::vector<double>& ctilde,
                                     double classical_bound, ModelClass mc, std::string name,
                                     std::optional<double> quantum_value = std::nullopt);

double evaluate(const BellFunctional& f, const Behavior& b);

// C = sum_x max_a |c_{a,x}|.
double constant_C(const BellFunctional& f);

// Hamming distance between two joint settings (number of differing entries).
int setting_distance(const SettingVector& x, const SettingVector& y);

struct COptResult {
    double value = 0.0;
    SettingVector argmin;
};

// C_opt = min_y sum_x max_a |c_{a,x}| D(x,y) / N over reference settings y.
COptResult constant_C_opt(const BellFunctional& f);

// Named inequalities: "chsh" (N=2), "mermin" (odd N>=3), "svetlichny" (N=3).
BellFunctional catalog(const std::string& name, int num_parties);

// Names accepted by catalog().
std::vector<std::string> catalog_names();

}  // namespace bellpost
