#include "bellpost/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace bellpost {

BellScenario BellScenario::dichotomic(int parties, int settings_each) {
    BellScenario s;
    s.num_parties = parties;
    s.settings_per_party.assign(parties, settings_each);
    s.outcomes_per_party.assign(parties, {-1, +1});
    s.check();
    return s;
}

int BellScenario::num_joint_settings() const {
    int n = 1;
    for (int m : settings_per_party) n *= m;
    return n;
}

int BellScenario::num_joint_outcomes() const {
    int n = 1;
    for (const auto& alph : outcomes_per_party) n *= static_cast<int>(alph.size());
    return n;
}

bool BellScenario::all_dichotomic() const {
    for (const auto& alph : outcomes_per_party)
        if (alph != std::vector<int>{-1, +1}) return false;
    return true;
}

void BellScenario::check() const {
    if (num_parties < 1) throw std::invalid_argument("scenario: need at least one party");
    if (static_cast<int>(settings_per_party.size()) != num_parties ||
        static_cast<int>(outcomes_per_party.size()) != num_parties)
        throw std::invalid_argument("scenario: per-party lists must have num_parties entries");
    for (int m : settings_per_party)
        if (m < 1) throw std::invalid_argument("scenario: every party needs at least one setting");
    for (const auto& alph : outcomes_per_party)
        if (alph.empty()) throw std::invalid_argument("scenario: empty outcome alphabet");
}

int setting_index(const BellScenario& s, const SettingVector& x) {
    if (static_cast<int>(x.size()) != s.num_parties)
        throw std::invalid_argument("setting vector length mismatch");
    int idx = 0;
    for (int k = s.num_parties - 1; k >= 0; --k) {
        if (x[k] < 0 || x[k] >= s.settings_per_party[k])
            throw std::out_of_range("setting index out of range");
        idx = idx * s.settings_per_party[k] + x[k];
    }
    return idx;
}

SettingVector setting_from_index(const BellScenario& s, int index) {
    SettingVector x(s.num_parties);
    for (int k = 0; k < s.num_parties; ++k) {
        x[k] = index % s.settings_per_party[k];
        index /= s.settings_per_party[k];
    }
    return x;
}

int outcome_index(const BellScenario& s, const OutcomeVector& a) {
    if (static_cast<int>(a.size()) != s.num_parties)
        throw std::invalid_argument("outcome vector length mismatch");
    int idx = 0;
    for (int k = s.num_parties - 1; k >= 0; --k) {
        int sz = static_cast<int>(s.outcomes_per_party[k].size());
        if (a[k] < 0 || a[k] >= sz) throw std::out_of_range("outcome index out of range");
        idx = idx * sz + a[k];
    }
    return idx;
}

OutcomeVector outcome_from_index(const BellScenario& s, int index) {
    OutcomeVector a(s.num_parties);
    for (int k = 0; k < s.num_parties; ++k) {
        int sz = static_cast<int>(s.outcomes_per_party[k].size());
        a[k] = index % sz;
        index /= sz;
    }
    return a;
}

Behavior Behavior::zeros(const BellScenario& s) {
    Behavior b;
    b.scenario = s;
    b.table.assign(static_cast<size_t>(s.num_joint_settings()) * s.num_joint_outcomes(), 0.0);
    return b;
}

Behavior Behavior::uniform(const BellScenario& s) {
    Behavior b = zeros(s);
    const double p = 1.0 / s.num_joint_outcomes();
    for (double& v : b.table) v = p;
    return b;
}

ValidationReport validate_behavior(const Behavior& b, double tol) {
    const int nx = b.scenario.num_joint_settings();
    const int na = b.scenario.num_joint_outcomes();
    if (b.table.size() != static_cast<size_t>(nx) * na)
        throw std::invalid_argument("behavior table size does not match scenario");
    ValidationReport r;
    for (int x = 0; x < nx; ++x) {
        double sum = 0.0;
        for (int a = 0; a < na; ++a) {
            double p = b.at(x, a);
            if (p < -tol) {
                std::ostringstream os;
                os << "negative probability p(a=" << a << "|x=" << x << ") = " << p;
                r.violations.push_back(os.str());
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > tol) {
            std::ostringstream os;
            os << "normalization violated at x=" << x << ": sum = " << sum;
            r.violations.push_back(os.str());
        }
    }
    return r;
}

NoSignalingReport check_no_signaling(const Behavior& b, double tol) {
    const auto& s = b.scenario;
    const int nx = s.num_joint_settings();
    const int na = s.num_joint_outcomes();
    NoSignalingReport r;
    for (int k = 0; k < s.num_parties; ++k) {
        const int mk = s.settings_per_party[k];
        if (mk < 2) continue;
        // marginal over a_k, indexed by (x, a with a_k fixed to 0)
        for (int x = 0; x < nx; ++x) {
            SettingVector xs = setting_from_index(s, x);
            if (xs[k] != 0) continue;  // enumerate the x_k = 0 representative
            for (int a = 0; a < na; ++a) {
                OutcomeVector as = outcome_from_index(s, a);
                if (as[k] != 0) continue;
                // marginal of all outcomes except party k
                auto marginal = [&](int xk) {
                    SettingVector xv = xs;
                    xv[k] = xk;
                    int xi = setting_index(s, xv);
                    double m = 0.0;
                    OutcomeVector av = as;
                    for (int ak = 0; ak < static_cast<int>(s.outcomes_per_party[k].size()); ++ak) {
                        av[k] = ak;
                        m += b.at(xi, outcome_index(s, av));
                    }
                    return m;
                };
                double ref = marginal(0);
                for (int xk = 1; xk < mk; ++xk) {
                    double dev = std::abs(marginal(xk) - ref);
                    if (dev > r.worst_violation) {
                        r.worst_violation = dev;
                        r.worst_party = k;
                    }
                }
            }
        }
    }
    r.no_signaling = r.worst_violation <= tol;
    return r;
}

double full_correlator(const Behavior& b, const SettingVector& x) {
    const auto& s = b.scenario;
    if (!s.all_dichotomic())
        throw std::invalid_argument("full_correlator requires dichotomic {-1,+1} alphabets");
    const int xi = setting_index(s, x);
    const int na = s.num_joint_outcomes();
    double corr = 0.0;
    for (int a = 0; a < na; ++a) {
        OutcomeVector av = outcome_from_index(s, a);
        int parity = 1;
        for (int k = 0; k < s.num_parties; ++k) parity *= s.outcomes_per_party[k][av[k]];
        corr += parity * b.at(xi, a);
    }
    return corr;
}

}  // namespace bellpost
