#include "bellpost/classical_bounds.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace bellpost {

Behavior strategy_behavior(const BellScenario& s, const DeterministicStrategy& strat) {
    Behavior b = Behavior::zeros(s);
    const int nx = s.num_joint_settings();
    for (int x = 0; x < nx; ++x) {
        SettingVector xv = setting_from_index(s, x);
        OutcomeVector av(s.num_parties);
        for (int k = 0; k < s.num_parties; ++k) av[k] = strat.response[k][xv[k]];
        b.at(x, outcome_index(s, av)) = 1.0;
    }
    return b;
}

LhvBoundResult lhv_bound(const BellFunctional& f) {
    const auto& s = f.scenario;
    const int nx = s.num_joint_settings();

    // per-party strategy counts |A_k|^{M_k}
    std::vector<std::uint64_t> party_count(s.num_parties);
    unsigned __int128 wide_total = 1;
    for (int k = 0; k < s.num_parties; ++k) {
        std::uint64_t c = 1;
        for (int m = 0; m < s.settings_per_party[k]; ++m)
            c *= s.outcomes_per_party[k].size();
        party_count[k] = c;
        wide_total *= c;
        if (wide_total > 10'000'000) break;
    }
    if (wide_total > 10'000'000)
        throw std::length_error("lhv_bound: strategy space exceeds 1e7 joint strategies");
    const std::uint64_t total = static_cast<std::uint64_t>(wide_total);

    // precompute joint-setting decompositions
    std::vector<SettingVector> xs(nx);
    for (int x = 0; x < nx; ++x) xs[x] = setting_from_index(s, x);

    LhvBoundResult best;
    best.bound = -std::numeric_limits<double>::infinity();
    best.strategies_checked = total;

    DeterministicStrategy strat;
    strat.response.resize(s.num_parties);
    for (int k = 0; k < s.num_parties; ++k) strat.response[k].resize(s.settings_per_party[k]);

    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t rem = idx;
        for (int k = 0; k < s.num_parties; ++k) {
            std::uint64_t pk = rem % party_count[k];
            rem /= party_count[k];
            const int sz = static_cast<int>(s.outcomes_per_party[k].size());
            for (int m = 0; m < s.settings_per_party[k]; ++m) {
                strat.response[k][m] = static_cast<int>(pk % sz);
                pk /= sz;
            }
        }
        double v = 0.0;
        OutcomeVector av(s.num_parties);
        for (int x = 0; x < nx; ++x) {
            for (int k = 0; k < s.num_parties; ++k) av[k] = strat.response[k][xs[x][k]];
            v += f.coeff(x, outcome_index(s, av));
        }
        if (v > best.bound) {
            best.bound = v;
            best.witness = strat;
        }
    }
    return best;
}

namespace {

// Rank of an integer matrix (given as doubles with small integer entries).
int matrix_rank(std::vector<std::array<double, 16>> rows) {
    int rank = 0;
    for (int col = 0; col < 16 && rank < static_cast<int>(rows.size()); ++col) {
        int pivot = -1;
        double best = 1e-9;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
            if (std::abs(rows[r][col]) > best) {
                best = std::abs(rows[r][col]);
                pivot = r;
            }
        }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            if (r == rank) continue;
            double factor = rows[r][col] / rows[rank][col];
            if (factor == 0.0) continue;
            for (int c = 0; c < 16; ++c) rows[r][c] -= factor * rows[rank][c];
        }
        ++rank;
    }
    return rank;
}

std::vector<NSVertex> compute_ns_vertices() {
    // Distributions over 4 outcomes with entries in {0, 1/2, 1}, in units
    // of 1/2 (compositions of 2 into 4 parts): 10 options per setting.
    std::vector<std::array<int, 4>> options;
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2 - a; ++b)
            for (int c = 0; c <= 2 - a - b; ++c)
                options.push_back({a, b, c, 2 - a - b - c});

    // Equality constraints of the 2-2-2 NS polytope.
    std::vector<std::array<double, 16>> equalities;
    auto idx = [](int x1, int x2, int a1, int a2) { return (x1 + 2 * x2) * 4 + (a1 + 2 * a2); };
    for (int x = 0; x < 4; ++x) {
        std::array<double, 16> row{};
        for (int a = 0; a < 4; ++a) row[x * 4 + a] = 1.0;
        equalities.push_back(row);
    }
    for (int a1 = 0; a1 < 2; ++a1)
        for (int x1 = 0; x1 < 2; ++x1) {
            std::array<double, 16> row{};
            for (int a2 = 0; a2 < 2; ++a2) {
                row[idx(x1, 0, a1, a2)] += 1.0;
                row[idx(x1, 1, a1, a2)] -= 1.0;
            }
            equalities.push_back(row);
        }
    for (int a2 = 0; a2 < 2; ++a2)
        for (int x2 = 0; x2 < 2; ++x2) {
            std::array<double, 16> row{};
            for (int a1 = 0; a1 < 2; ++a1) {
                row[idx(0, x2, a1, a2)] += 1.0;
                row[idx(1, x2, a1, a2)] -= 1.0;
            }
            equalities.push_back(row);
        }

    std::vector<NSVertex> vertices;
    std::array<int, 16> t{};  // half-units
    for (size_t o0 = 0; o0 < options.size(); ++o0)
        for (size_t o1 = 0; o1 < options.size(); ++o1)
            for (size_t o2 = 0; o2 < options.size(); ++o2)
                for (size_t o3 = 0; o3 < options.size(); ++o3) {
                    const std::array<size_t, 4> pick = {o0, o1, o2, o3};
                    for (int x = 0; x < 4; ++x)
                        for (int a = 0; a < 4; ++a) t[x * 4 + a] = options[pick[x]][a];

                    // exact no-signaling check in half-units
                    bool ns = true;
                    for (int a1 = 0; a1 < 2 && ns; ++a1)
                        for (int x1 = 0; x1 < 2 && ns; ++x1) {
                            int m0 = t[idx(x1, 0, a1, 0)] + t[idx(x1, 0, a1, 1)];
                            int m1 = t[idx(x1, 1, a1, 0)] + t[idx(x1, 1, a1, 1)];
                            if (m0 != m1) ns = false;
                        }
                    for (int a2 = 0; a2 < 2 && ns; ++a2)
                        for (int x2 = 0; x2 < 2 && ns; ++x2) {
                            int m0 = t[idx(0, x2, 0, a2)] + t[idx(0, x2, 1, a2)];
                            int m1 = t[idx(1, x2, 0, a2)] + t[idx(1, x2, 1, a2)];
                            if (m0 != m1) ns = false;
                        }
                    if (!ns) continue;

                    // vertex test: active constraints must pin the point
                    auto rows = equalities;
                    int zeros = 0;
                    for (int i = 0; i < 16; ++i)
                        if (t[i] == 0) {
                            std::array<double, 16> row{};
                            row[i] = 1.0;
                            rows.push_back(row);
                            ++zeros;
                        }
                    if (zeros < 8) continue;  // cannot reach rank 16 otherwise
                    if (matrix_rank(std::move(rows)) != 16) continue;

                    NSVertex v;
                    v.table.resize(16);
                    bool det = true;
                    for (int i = 0; i < 16; ++i) {
                        v.table[i] = t[i] / 2.0;
                        if (t[i] == 1) det = false;
                    }
                    v.deterministic = det;
                    vertices.push_back(std::move(v));
                }
    return vertices;
}

}  // namespace

const std::vector<NSVertex>& enumerate_ns_vertices() {
    static const std::vector<NSVertex> vertices = compute_ns_vertices();
    return vertices;
}

Behavior hlnhv_product_behavior(const BellScenario& s, int single, const std::vector<int>& map,
                                const NSVertex& v) {
    if (s.num_parties != 3) throw std::invalid_argument("hlnhv product requires N=3");
    int i = -1, j = -1;
    for (int k = 0; k < 3; ++k) {
        if (k == single) continue;
        (i < 0 ? i : j) = k;
    }
    Behavior b = Behavior::zeros(s);
    const int nx = s.num_joint_settings();
    const int na = s.num_joint_outcomes();
    for (int x = 0; x < nx; ++x) {
        SettingVector xv = setting_from_index(s, x);
        for (int a = 0; a < na; ++a) {
            OutcomeVector av = outcome_from_index(s, a);
            if (av[single] != map[xv[single]]) continue;
            b.at(x, a) = v.table[(xv[i] + 2 * xv[j]) * 4 + (av[i] + 2 * av[j])];
        }
    }
    return b;
}

HlnhvBoundResult hlnhv_bound(const BellFunctional& f) {
    const auto& s = f.scenario;
    if (s.num_parties != 3 || !s.all_dichotomic() || s.settings_per_party != std::vector<int>{2, 2, 2})
        throw std::invalid_argument("hlnhv_bound supports only the 3-party/2-setting dichotomic scenario");

    const auto& vertices = enumerate_ns_vertices();
    HlnhvBoundResult best;
    best.bound = -std::numeric_limits<double>::infinity();
    for (int single = 0; single < 3; ++single) {
        for (int m = 0; m < 4; ++m) {
            std::vector<int> map = {m & 1, (m >> 1) & 1};
            for (size_t vi = 0; vi < vertices.size(); ++vi) {
                Behavior b = hlnhv_product_behavior(s, single, map, vertices[vi]);
                double val = evaluate(f, b);
                if (val > best.bound) {
                    best.bound = val;
                    best.single_party = single;
                    best.single_map = map;
                    best.vertex_index = static_cast<int>(vi);
                }
            }
        }
    }
    return best;
}

}  // namespace bellpost
