#include "bellpost/quantum.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace bellpost {

namespace {

constexpr double kPi = std::numbers::pi;

// Applies a 2x2 matrix to qubit `k` (0-based) of the state in place.
void apply_single_qubit(PureState& psi, int k, const std::complex<double> u[2][2]) {
    const size_t stride = size_t{1} << k;
    const size_t n = psi.size();
    for (size_t base = 0; base < n; base += 2 * stride) {
        for (size_t off = 0; off < stride; ++off) {
            const size_t i0 = base + off;
            const size_t i1 = i0 + stride;
            const auto a0 = psi[i0];
            const auto a1 = psi[i1];
            psi[i0] = u[0][0] * a0 + u[0][1] * a1;
            psi[i1] = u[1][0] * a0 + u[1][1] * a1;
        }
    }
}

}  // namespace

PureState ghz_state(int num_parties) {
    if (num_parties < 1 || num_parties > 12)
        throw std::invalid_argument("ghz_state: N must be in [1, 12]");
    PureState psi(size_t{1} << num_parties, 0.0);
    const double amp = 1.0 / std::sqrt(2.0);
    psi.front() = amp;
    psi.back() = amp;
    return psi;
}

Behavior quantum_behavior(const PureState& state, const MeasurementSettings& settings) {
    const int n = static_cast<int>(settings.size());
    if (state.size() != (size_t{1} << n))
        throw std::invalid_argument("quantum_behavior: state dimension does not match party count");

    BellScenario s;
    s.num_parties = n;
    for (const auto& per_party : settings) {
        if (per_party.empty()) throw std::invalid_argument("quantum_behavior: party without settings");
        s.settings_per_party.push_back(static_cast<int>(per_party.size()));
        s.outcomes_per_party.push_back({-1, +1});
    }
    s.check();

    Behavior b = Behavior::zeros(s);
    const int nx = s.num_joint_settings();
    for (int x = 0; x < nx; ++x) {
        SettingVector xv = setting_from_index(s, x);
        PureState psi = state;
        for (int k = 0; k < n; ++k) {
            const auto& ang = settings[k][xv[k]];
            const double c = std::cos(ang.theta / 2.0);
            const double sn = std::sin(ang.theta / 2.0);
            const std::complex<double> eip(std::cos(ang.phi), std::sin(ang.phi));
            const std::complex<double> eim = std::conj(eip);
            // Row 0: eigenvalue -1 eigenvector dagger; row 1: eigenvalue +1.
            // |+n> = (cos(t/2), e^{i phi} sin(t/2)), |-n> = (sin(t/2), -e^{i phi} cos(t/2)).
            const std::complex<double> u[2][2] = {{sn, -eim * c}, {c, eim * sn}};
            apply_single_qubit(psi, k, u);
        }
        for (size_t a = 0; a < psi.size(); ++a)
            b.at(x, static_cast<int>(a)) = std::norm(psi[a]);
    }
    return b;
}

OptimizeResult optimize_settings(const BellFunctional& f, const PureState& state, int restarts,
                                 std::uint64_t seed) {
    const auto& s = f.scenario;
    if (!s.all_dichotomic())
        throw std::invalid_argument("optimize_settings: dichotomic scenarios only");
    if (state.size() != (size_t{1} << s.num_parties))
        throw std::invalid_argument("optimize_settings: state dimension mismatch");

    int num_params = 0;
    for (int m : s.settings_per_party) num_params += 2 * m;

    OptimizeResult best;
    best.value = -std::numeric_limits<double>::infinity();
    best.seed = seed;
    best.restarts = restarts;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> utheta(0.0, kPi);
    std::uniform_real_distribution<double> uphi(0.0, 2.0 * kPi);

    auto to_settings = [&](const std::vector<double>& p) {
        MeasurementSettings ms(s.num_parties);
        int i = 0;
        for (int k = 0; k < s.num_parties; ++k) {
            ms[k].resize(s.settings_per_party[k]);
            for (int m = 0; m < s.settings_per_party[k]; ++m) {
                ms[k][m].theta = p[i++];
                ms[k][m].phi = p[i++];
            }
        }
        return ms;
    };

    int evals = 0;
    auto objective = [&](const std::vector<double>& p) {
        ++evals;
        return evaluate(f, quantum_behavior(state, to_settings(p)));
    };

    for (int r = 0; r < restarts; ++r) {
        std::vector<double> p(num_params);
        for (int i = 0; i < num_params; i += 2) {
            p[i] = utheta(rng);
            p[i + 1] = uphi(rng);
        }
        double val = objective(p);
        double step = kPi / 8.0;
        for (int halving = 0; halving < 14; ++halving) {
            bool improved = true;
            while (improved) {
                improved = false;
                for (int i = 0; i < num_params; ++i) {
                    for (double dir : {+1.0, -1.0}) {
                        std::vector<double> q = p;
                        q[i] += dir * step;
                        double v = objective(q);
                        if (v > val + 1e-15) {
                            val = v;
                            p = std::move(q);
                            improved = true;
                        }
                    }
                }
            }
            step *= 0.5;
        }
        if (val > best.value) {
            best.value = val;
            best.settings = to_settings(p);
        }
    }
    best.evaluations = evals;
    return best;
}

}  // namespace bellpost
