#include "bellpost/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bellpost {

int DetectionBehavior::num_joint_counts() const {
    int n = 1;
    for (int k = 0; k < scenario.num_parties; ++k) n *= max_count + 1;
    return n;
}

int DetectionBehavior::num_joint_ext_outcomes() const {
    int n = 1;
    for (int k = 0; k < scenario.num_parties; ++k)
        n *= static_cast<int>(scenario.outcomes_per_party[k].size()) + 1;
    return n;
}

int DetectionBehavior::count_index(const std::vector<int>& d) const {
    int idx = 0;
    for (int k = scenario.num_parties - 1; k >= 0; --k) {
        if (d[k] < 0 || d[k] > max_count) throw std::out_of_range("count out of range");
        idx = idx * (max_count + 1) + d[k];
    }
    return idx;
}

std::vector<int> DetectionBehavior::count_from_index(int index) const {
    std::vector<int> d(scenario.num_parties);
    for (int k = 0; k < scenario.num_parties; ++k) {
        d[k] = index % (max_count + 1);
        index /= (max_count + 1);
    }
    return d;
}

int DetectionBehavior::ext_outcome_index(const std::vector<int>& a) const {
    int idx = 0;
    for (int k = scenario.num_parties - 1; k >= 0; --k) {
        int sz = static_cast<int>(scenario.outcomes_per_party[k].size()) + 1;
        if (a[k] < 0 || a[k] >= sz) throw std::out_of_range("extended outcome out of range");
        idx = idx * sz + a[k];
    }
    return idx;
}

std::vector<int> DetectionBehavior::ext_outcome_from_index(int index) const {
    std::vector<int> a(scenario.num_parties);
    for (int k = 0; k < scenario.num_parties; ++k) {
        int sz = static_cast<int>(scenario.outcomes_per_party[k].size()) + 1;
        a[k] = index % sz;
        index /= sz;
    }
    return a;
}

double& DetectionBehavior::at(int x, int d, int a) {
    const size_t nd = num_joint_counts();
    const size_t na = num_joint_ext_outcomes();
    return table[(static_cast<size_t>(x) * nd + d) * na + a];
}

double DetectionBehavior::at(int x, int d, int a) const {
    const size_t nd = num_joint_counts();
    const size_t na = num_joint_ext_outcomes();
    return table[(static_cast<size_t>(x) * nd + d) * na + a];
}

DetectionBehavior DetectionBehavior::zeros(const BellScenario& s, int max_count) {
    DetectionBehavior db;
    db.scenario = s;
    db.max_count = max_count;
    db.table.assign(static_cast<size_t>(s.num_joint_settings()) * db.num_joint_counts() *
                        db.num_joint_ext_outcomes(),
                    0.0);
    return db;
}

int DetectionBehavior::all_single_index() const {
    return count_index(std::vector<int>(scenario.num_parties, 1));
}

ValidationReport DetectionBehavior::validate(double tol) const {
    ValidationReport r;
    const int nx = scenario.num_joint_settings();
    const int nd = num_joint_counts();
    const int na = num_joint_ext_outcomes();
    for (int x = 0; x < nx; ++x) {
        double sum = 0.0;
        for (int d = 0; d < nd; ++d) {
            std::vector<int> dv = count_from_index(d);
            for (int a = 0; a < na; ++a) {
                const double p = at(x, d, a);
                sum += p;
                if (p < -tol) {
                    std::ostringstream os;
                    os << "negative probability at (x=" << x << ", d=" << d << ", a=" << a << ")";
                    r.violations.push_back(os.str());
                }
                if (p > tol) {
                    std::vector<int> av = ext_outcome_from_index(a);
                    for (int k = 0; k < scenario.num_parties; ++k) {
                        const bool is_null = av[k] == null_symbol(k);
                        if ((dv[k] == 0) != is_null) {
                            std::ostringstream os;
                            os << "null-symbol invariant violated at (x=" << x << ", d=" << d
                               << ", a=" << a << ", party=" << k << ")";
                            r.violations.push_back(os.str());
                        }
                    }
                }
            }
        }
        if (std::abs(sum - 1.0) > tol) {
            std::ostringstream os;
            os << "normalization violated at x=" << x << ": sum = " << sum;
            r.violations.push_back(os.str());
        }
    }
    return r;
}

DetectionBehavior DetectionBehavior::ideal(const Behavior& b) {
    DetectionBehavior db = zeros(b.scenario, 1);
    const int nx = b.scenario.num_joint_settings();
    const int na = b.scenario.num_joint_outcomes();
    const int ds = db.all_single_index();
    for (int x = 0; x < nx; ++x) {
        for (int a = 0; a < na; ++a) {
            OutcomeVector av = outcome_from_index(b.scenario, a);
            db.at(x, ds, db.ext_outcome_index(av)) = b.at(x, a);
        }
    }
    return db;
}

void DetectorModel::check() const {
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in01(eta_det) || !in01(eta_tra) || !in01(eta_1of2))
        throw std::invalid_argument("detector rates must lie in [0, 1]");
    if (number_resolving && eta_1of2 + eta_det * eta_det > 1.0 + 1e-12)
        throw std::invalid_argument("detector: eta_1of2 + eta_det^2 exceeds 1");
}

DetectorModel DetectorModel::independent(double eta_det, double eta_tra) {
    DetectorModel dm;
    dm.eta_det = eta_det;
    dm.eta_tra = eta_tra;
    dm.eta_1of2 = 2.0 * eta_det * (1.0 - eta_det);
    dm.number_resolving = true;
    dm.check();
    return dm;
}

DetectorModel DetectorModel::on_off(double eta_det, double eta_tra, double eta_1of2) {
    DetectorModel dm;
    dm.eta_det = eta_det;
    dm.eta_tra = eta_tra;
    dm.eta_1of2 = eta_1of2;
    dm.number_resolving = false;
    dm.check();
    return dm;
}

std::vector<double> DetectorModel::registered_distribution(int arrived) const {
    check();
    switch (arrived) {
        case 0:
            return {1.0, 0.0, 0.0};
        case 1:
            return {1.0 - eta_det, eta_det, 0.0};
        case 2: {
            // on-off detectors clamp to one registered count
            const double two = number_resolving ? eta_det * eta_det : 0.0;
            return {1.0 - eta_1of2 - two, eta_1of2, two};
        }
        default:
            throw std::domain_error("detector: more than two particles at one detector");
    }
}

std::vector<double> DetectorModel::detected_distribution(int allocated) const {
    if (allocated < 0 || allocated > 2)
        throw std::domain_error("detector: allocation multiplicity above 2 is unsupported");
    std::vector<double> out(3, 0.0);
    // binomial transmission, then the registered-count channel
    for (int survive = 0; survive <= allocated; ++survive) {
        double pt = 1.0;
        if (allocated == 1) pt = survive ? eta_tra : 1.0 - eta_tra;
        if (allocated == 2) {
            if (survive == 2) pt = eta_tra * eta_tra;
            if (survive == 1) pt = 2.0 * eta_tra * (1.0 - eta_tra);
            if (survive == 0) pt = (1.0 - eta_tra) * (1.0 - eta_tra);
        }
        auto reg = registered_distribution(survive);
        for (int r = 0; r < 3; ++r) out[r] += pt * reg[r];
    }
    return out;
}

DetectionBehavior coarse_grain(const DetectionBehavior& db) {
    DetectionBehavior out = DetectionBehavior::zeros(db.scenario, 1);
    const int nx = db.scenario.num_joint_settings();
    const int nd = db.num_joint_counts();
    const int na = db.num_joint_ext_outcomes();
    const int n = db.scenario.num_parties;
    for (int x = 0; x < nx; ++x) {
        for (int d = 0; d < nd; ++d) {
            std::vector<int> dv = db.count_from_index(d);
            std::vector<int> cg(n);
            for (int k = 0; k < n; ++k) cg[k] = dv[k] == 1 ? 1 : 0;
            const int dout = out.count_index(cg);
            for (int a = 0; a < na; ++a) {
                const double p = db.at(x, d, a);
                if (p == 0.0) continue;
                std::vector<int> av = db.ext_outcome_from_index(a);
                for (int k = 0; k < n; ++k)
                    if (cg[k] == 0) av[k] = db.null_symbol(k);  // merged events lose the outcome
                out.at(x, dout, out.ext_outcome_index(av)) += p;
            }
        }
    }
    return out;
}

Behavior postselect_coincidence(const DetectionBehavior& db) {
    const auto& s = db.scenario;
    Behavior b = Behavior::zeros(s);
    const int nx = s.num_joint_settings();
    const int na = s.num_joint_outcomes();
    const int ds = db.all_single_index();
    for (int x = 0; x < nx; ++x) {
        double coin = 0.0;
        for (int a = 0; a < db.num_joint_ext_outcomes(); ++a) coin += db.at(x, ds, a);
        if (coin <= 0.0) {
            std::ostringstream os;
            os << "degenerate postselection: zero coincidence probability at joint setting " << x;
            throw std::domain_error(os.str());
        }
        for (int a = 0; a < na; ++a) {
            OutcomeVector av = outcome_from_index(s, a);
            b.at(x, a) = db.at(x, ds, db.ext_outcome_index(av)) / coin;
        }
    }
    return b;
}

ConditionalEfficiency conditional_efficiency(const DetectionBehavior& db) {
    const auto& s = db.scenario;
    const int nx = s.num_joint_settings();
    const int nd = db.num_joint_counts();
    const int na = db.num_joint_ext_outcomes();
    const int n = s.num_parties;

    ConditionalEfficiency result;
    result.eta_c = std::numeric_limits<double>::infinity();
    for (int x = 0; x < nx; ++x) {
        // detection marginals p(d|x)
        std::vector<double> pd(nd, 0.0);
        for (int d = 0; d < nd; ++d)
            for (int a = 0; a < na; ++a) pd[d] += db.at(x, d, a);
        const double coin = pd[db.all_single_index()];
        for (int k = 0; k < n; ++k) {
            double den = 0.0;  // p(all-single except k | x), d_k marginalized
            for (int d = 0; d < nd; ++d) {
                std::vector<int> dv = db.count_from_index(d);
                bool rest_single = true;
                for (int j = 0; j < n; ++j)
                    if (j != k && dv[j] != 1) rest_single = false;
                if (rest_single) den += pd[d];
            }
            if (den <= 0.0)
                throw std::domain_error(
                    "degenerate scenario: zero probability for all-single excluding a party");
            const double eta = coin / den;
            if (eta < result.eta_c) {
                result.eta_c = eta;
                result.argmin_party = k;
                result.argmin_setting = x;
            }
        }
    }
    return result;
}

DetectionBehavior apply_detector_model(const Behavior& b, const AllocationDistribution& allocation,
                                       const std::vector<DetectorModel>& detectors) {
    const auto& s = b.scenario;
    const int n = s.num_parties;
    if (static_cast<int>(detectors.size()) != n)
        throw std::invalid_argument("apply_detector_model: one detector model per party required");

    int total = -1;
    for (const auto& [counts, prob] : allocation) {
        if (static_cast<int>(counts.size()) != n)
            throw std::invalid_argument("allocation count vector length mismatch");
        int sum = std::accumulate(counts.begin(), counts.end(), 0);
        if (total < 0) total = sum;
        if (sum != total)
            throw std::invalid_argument("allocation distribution must conserve the particle count");
        (void)prob;
    }
    if (total < 0) throw std::invalid_argument("empty allocation distribution");

    // Detected counts cap at 2 (no geometry here places >2 at a detector).
    DetectionBehavior db = DetectionBehavior::zeros(s, std::min(total, 2));
    const int nx = s.num_joint_settings();
    const int ds = db.all_single_index();

    // p(detected count vector) is setting independent
    std::map<std::vector<int>, double> pdet;
    for (const auto& [counts, prob] : allocation) {
        std::vector<std::vector<double>> per_party(n);
        for (int k = 0; k < n; ++k) per_party[k] = detectors[k].detected_distribution(counts[k]);
        std::vector<int> d(n, 0);
        // enumerate detected-count combinations
        while (true) {
            double p = prob;
            for (int k = 0; k < n; ++k) p *= per_party[k][d[k]];
            if (p > 0.0) pdet[d] += p;
            int k = 0;
            while (k < n && ++d[k] > 2) d[k++] = 0;
            if (k == n) break;
        }
    }

    for (int x = 0; x < nx; ++x) {
        for (const auto& [dv, pd] : pdet) {
            std::vector<int> capped(n);
            for (int k = 0; k < n; ++k) capped[k] = std::min(dv[k], db.max_count);
            const int di = db.count_index(capped);
            if (di == ds) {
                // coincidence events carry the ideal outcome statistics
                for (int a = 0; a < s.num_joint_outcomes(); ++a) {
                    OutcomeVector av = outcome_from_index(s, a);
                    db.at(x, di, db.ext_outcome_index(av)) += pd * b.at(x, a);
                }
            } else {
                // non-coincidence events: null for undetected parties,
                // first alphabet symbol for detected ones (never postselected)
                std::vector<int> av(n);
                for (int k = 0; k < n; ++k) av[k] = capped[k] == 0 ? db.null_symbol(k) : 0;
                db.at(x, di, db.ext_outcome_index(av)) += pd;
            }
        }
    }
    return db;
}

}  // namespace bellpost
