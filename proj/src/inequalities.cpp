#include "bellpost/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bellpost {

std::string to_string(ModelClass mc) {
    return mc == ModelClass::Lhv ? "lhv" : "hlnhv";
}

void BellFunctional::check() const {
    scenario.check();
    const size_t expected =
        static_cast<size_t>(scenario.num_joint_settings()) * scenario.num_joint_outcomes();
    if (coefficients.size() != expected)
        throw std::invalid_argument("functional coefficient table does not match scenario");
    if (constant_C(*this) < classical_bound - 1e-12)
        throw std::invalid_argument("functional: C < classical bound, bound cannot dominate");
}

BellFunctional correlator_functional(const BellScenario& s, const std::vector<double>& ctilde,
                                     double classical_bound, ModelClass mc, std::string name,
                                     std::optional<double> quantum_value) {
    if (!s.all_dichotomic())
        throw std::invalid_argument("correlator functional requires dichotomic alphabets");
    if (static_cast<int>(ctilde.size()) != s.num_joint_settings())
        throw std::invalid_argument("correlator coefficients must cover every joint setting");
    BellFunctional f;
    f.scenario = s;
    f.classical_bound = classical_bound;
    f.model_class = mc;
    f.name = std::move(name);
    f.quantum_value = quantum_value;
    const int nx = s.num_joint_settings();
    const int na = s.num_joint_outcomes();
    f.coefficients.assign(static_cast<size_t>(nx) * na, 0.0);
    for (int x = 0; x < nx; ++x) {
        for (int a = 0; a < na; ++a) {
            OutcomeVector av = outcome_from_index(s, a);
            int parity = 1;
            for (int k = 0; k < s.num_parties; ++k) parity *= s.outcomes_per_party[k][av[k]];
            f.coefficients[static_cast<size_t>(x) * na + a] = parity * ctilde[x];
        }
    }
    f.check();
    return f;
}

double evaluate(const BellFunctional& f, const Behavior& b) {
    if (!(f.scenario == b.scenario))
        throw std::invalid_argument("functional/behavior scenario mismatch");
    double v = 0.0;
    for (size_t i = 0; i < f.coefficients.size(); ++i) v += f.coefficients[i] * b.table[i];
    return v;
}

double constant_C(const BellFunctional& f) {
    const int nx = f.scenario.num_joint_settings();
    const int na = f.scenario.num_joint_outcomes();
    double c = 0.0;
    for (int x = 0; x < nx; ++x) {
        double mx = 0.0;
        for (int a = 0; a < na; ++a) mx = std::max(mx, std::abs(f.coeff(x, a)));
        c += mx;
    }
    return c;
}

int setting_distance(const SettingVector& x, const SettingVector& y) {
    if (x.size() != y.size()) throw std::invalid_argument("setting vectors of unequal length");
    int d = 0;
    for (size_t k = 0; k < x.size(); ++k) d += (x[k] != y[k]) ? 1 : 0;
    return d;
}

COptResult constant_C_opt(const BellFunctional& f) {
    const auto& s = f.scenario;
    const int nx = s.num_joint_settings();
    const int na = s.num_joint_outcomes();
    std::vector<double> maxabs(nx, 0.0);
    for (int x = 0; x < nx; ++x)
        for (int a = 0; a < na; ++a) maxabs[x] = std::max(maxabs[x], std::abs(f.coeff(x, a)));

    COptResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (int y = 0; y < nx; ++y) {
        SettingVector yv = setting_from_index(s, y);
        double sum = 0.0;
        for (int x = 0; x < nx; ++x)
            sum += maxabs[x] * setting_distance(setting_from_index(s, x), yv);
        sum /= s.num_parties;
        if (sum < best.value) {
            best.value = sum;
            best.argmin = yv;
        }
    }
    return best;
}

namespace {

// Mermin polynomial as correlator coefficients over 2^n joint settings
// (setting 0 unprimed, 1 primed; party 1 fastest). The standard recursion
// M_n = (1/2)[M_{n-1}(A_n + A_n') + M'_{n-1}(A_n - A_n')], where M' swaps
// primed and unprimed observables everywhere.
std::vector<double> mermin_ctilde(int n) {
    std::vector<double> m = {1.0, 0.0};  // M_1 = A_1
    for (int level = 2; level <= n; ++level) {
        const int prev = 1 << (level - 1);
        std::vector<double> next(prev * 2, 0.0);
        for (int x = 0; x < prev; ++x) {
            const double mv = m[x];
            const double mswap = m[(prev - 1) ^ x];  // all settings flipped
            next[x] = 0.5 * (mv + mswap);            // x_n = 0
            next[x + prev] = 0.5 * (mv - mswap);     // x_n = 1
        }
        m = std::move(next);
    }
    return m;
}

std::vector<double> flipped(const std::vector<double>& c) {
    std::vector<double> out(c.size());
    for (size_t x = 0; x < c.size(); ++x) out[x] = c[(c.size() - 1) ^ x];
    return out;
}

}  // namespace

BellFunctional catalog(const std::string& name, int num_parties) {
    if (name == "chsh") {
        if (num_parties != 2) throw std::invalid_argument("chsh requires N=2");
        auto s = BellScenario::dichotomic(2, 2);
        // <A1B1> + <A2B1> + <A1B2> - <A2B2>, party-1 setting fastest
        return correlator_functional(s, {1.0, 1.0, 1.0, -1.0}, 2.0, ModelClass::Lhv, "chsh",
                                     2.0 * std::sqrt(2.0));
    }
    if (name == "mermin") {
        if (num_parties < 3 || num_parties % 2 == 0)
            throw std::invalid_argument("mermin requires odd N >= 3");
        auto s = BellScenario::dichotomic(num_parties, 2);
        auto ctilde = mermin_ctilde(num_parties);
        // Scale so all nonzero coefficients are +-1; then I = 2^((N-1)/2),
        // C = 2^(N-1), I_Q = 2^(N-1).
        const double scale = std::pow(2.0, (num_parties - 1) / 2);
        for (double& c : ctilde) c *= scale;
        return correlator_functional(s, ctilde, scale, ModelClass::Lhv, "mermin",
                                     std::pow(2.0, num_parties - 1));
    }
    if (name == "svetlichny") {
        if (num_parties != 3) throw std::invalid_argument("svetlichny requires N=3");
        auto s = BellScenario::dichotomic(3, 2);
        auto m = mermin_ctilde(3);
        auto mp = flipped(m);
        std::vector<double> ctilde(m.size());
        for (size_t x = 0; x < m.size(); ++x) ctilde[x] = 2.0 * (m[x] + mp[x]);
        return correlator_functional(s, ctilde, 4.0, ModelClass::Hlnhv, "svetlichny",
                                     4.0 * std::sqrt(2.0));
    }
    throw std::invalid_argument("unknown inequality: " + name);
}

std::vector<std::string> catalog_names() { return {"chsh", "mermin", "svetlichny"}; }

}  // namespace bellpost
