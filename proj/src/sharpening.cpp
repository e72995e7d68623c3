#include "bellpost/sharpening.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace bellpost {

namespace {

void check_eta(double eta_c) {
    if (!(eta_c > 0.0 && eta_c <= 1.0))
        throw std::domain_error("eta_c must lie in (0, 1]");
}

int settings_minus_parties(const BellScenario& s) {
    int sum = std::accumulate(s.settings_per_party.begin(), s.settings_per_party.end(), 0);
    return sum - s.num_parties;
}

double bisect_eta(const std::function<double(double)>& bound_minus_iq) {
    // bound is strictly decreasing in eta on (0, 1]
    double lo = 1e-9, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (bound_minus_iq(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

SharpenedBound sharpened_bound_lhv(const BellFunctional& f, double eta_c) {
    check_eta(eta_c);
    const double c = constant_C(f);
    const double i = f.classical_bound;
    const int sm = settings_minus_parties(f.scenario);
    SharpenedBound r;
    r.eta_c = eta_c;
    r.model_class = ModelClass::Lhv;
    r.bound = c + (i - c) * (1.0 - (1.0 - eta_c) / eta_c * sm);
    r.vacuous = r.bound > c;
    return r;
}

SharpenedBound sharpened_bound_hlnhv(const BellFunctional& f, double eta_c, bool use_c_opt) {
    check_eta(eta_c);
    const double ctilde = use_c_opt ? constant_C_opt(f).value : constant_C(f);
    SharpenedBound r;
    r.eta_c = eta_c;
    r.use_c_opt = use_c_opt;
    r.model_class = ModelClass::Hlnhv;
    r.bound = f.classical_bound +
              4.0 * ctilde * f.scenario.num_parties * (1.0 - eta_c) / eta_c;
    r.vacuous = r.bound > constant_C(f);
    return r;
}

ThresholdResult threshold_eta_c(const BellFunctional& f, double quantum_value,
                                ModelClass model_class, bool use_c_opt) {
    const double i = f.classical_bound;
    if (quantum_value <= i)
        throw std::domain_error("threshold_eta_c: quantum value does not exceed the classical bound");

    ThresholdResult r;
    r.model_class = model_class;
    if (model_class == ModelClass::Lhv) {
        const double c = constant_C(f);
        const int sm = settings_minus_parties(f.scenario);
        if (sm <= 0 || c <= i)
            throw std::domain_error("threshold_eta_c: degenerate scenario, bound never inflates");
        const double t = (quantum_value - i) / ((c - i) * sm);
        r.eta_c_star = 1.0 / (1.0 + t);
        r.bisection_root = bisect_eta(
            [&](double eta) { return sharpened_bound_lhv(f, eta).bound - quantum_value; });
    } else {
        r.use_c_opt = use_c_opt;
        const double ctilde = use_c_opt ? constant_C_opt(f).value : constant_C(f);
        const double t = (quantum_value - i) / (4.0 * ctilde * f.scenario.num_parties);
        r.eta_c_star = 1.0 / (1.0 + t);
        r.bisection_root = bisect_eta([&](double eta) {
            return sharpened_bound_hlnhv(f, eta, use_c_opt).bound - quantum_value;
        });
    }
    return r;
}

double mermin_family_threshold(int num_parties) {
    if (num_parties < 3 || num_parties % 2 == 0)
        throw std::invalid_argument("mermin family requires odd N >= 3");
    const double c = std::pow(2.0, num_parties - 1);
    const double i = std::pow(2.0, (num_parties - 1) / 2);
    const double iq = c;
    BellFunctional f = catalog("mermin", num_parties);
    // sanity: the catalog constants are the ones used in the closed form
    if (std::abs(constant_C(f) - c) > 1e-9 || std::abs(f.classical_bound - i) > 1e-9 ||
        std::abs(*f.quantum_value - iq) > 1e-9)
        throw std::logic_error("mermin catalog constants drifted");
    return threshold_eta_c(f, iq, ModelClass::Lhv).eta_c_star;
}

}  // namespace bellpost
