// Acceptance gate: one line per criterion, exit code = number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "bellpost/causal.hpp"
#include "bellpost/classical_bounds.hpp"
#include "bellpost/hvmodels.hpp"
#include "bellpost/quantum.hpp"
#include "bellpost/sharpening.hpp"
#include "bellpost/yurke_stoler.hpp"

using namespace bellpost;

namespace {

int failures = 0;

void criterion(int number, const std::string& label, double time_budget_s,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > time_budget_s) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    if (!ok) ++failures;
    std::printf("%s criterion %d: %s (%.2fs%s%s)\n", ok ? "PASS" : "FAIL", number, label.c_str(),
                secs, detail.empty() ? "" : " - ", detail.c_str());
    std::fflush(stdout);
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

int main() {
    const double r2 = std::sqrt(2.0);

    criterion(1, "threshold efficiencies match the closed forms", 1.0, [&](std::string& d) {
        const auto chsh = catalog("chsh", 2);
        const auto mermin = catalog("mermin", 3);
        const auto sv = catalog("svetlichny", 3);
        const double c1 = threshold_eta_c(chsh, *chsh.quantum_value, ModelClass::Lhv).eta_c_star;
        const double c2 = threshold_eta_c(mermin, *mermin.quantum_value, ModelClass::Lhv).eta_c_star;
        const double c3 =
            threshold_eta_c(sv, *sv.quantum_value, ModelClass::Hlnhv, true).eta_c_star;
        YSConfig ys;
        ys.detector = DetectorModel::independent(1.0);
        ys.num_parties = 2;
        const double d1 = ys_threshold_eta_det(ys, c1).value_or(-1.0);
        ys.num_parties = 3;
        const double d2 = ys_threshold_eta_det(ys, c2).value_or(-1.0);
        const double d3 = ys_threshold_eta_det(ys, c3).value_or(-1.0);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "eta_c*=(%.10f, %.10f, %.10f) eta_det*=(%.10f, %.10f, %.10f)",
                      c1, c2, c3, d1, d2, d3);
        d = buf;
        return close(c1, 2.0 * (r2 - 1.0), 1e-9) && close(c2, 0.75, 1e-9) &&
               close(c3, 12.0 / (11.0 + r2), 1e-9) && close(d1, 4.0 / (3.0 + r2), 1e-9) &&
               close(d2, 0.9, 1e-9) && close(d3, 36.0 / (35.0 + r2), 1e-9);
    });

    criterion(2, "optimizer reaches the known quantum values", 30.0, [&](std::string& d) {
        const double v1 = optimize_settings(catalog("chsh", 2), ghz_state(2), 32, 0).value;
        const double v2 = optimize_settings(catalog("mermin", 3), ghz_state(3), 32, 0).value;
        const double v3 = optimize_settings(catalog("svetlichny", 3), ghz_state(3), 32, 0).value;
        char buf[120];
        std::snprintf(buf, sizeof(buf), "values (%.9f, %.9f, %.9f)", v1, v2, v3);
        d = buf;
        return close(v1, 2.0 * r2, 1e-6) && close(v2, 4.0, 1e-6) && close(v3, 4.0 * r2, 1e-6);
    });

    criterion(3, "enumeration bounds and vertex count are exact", 10.0, [&](std::string& d) {
        const double b1 = lhv_bound(catalog("chsh", 2)).bound;
        const double b2 = lhv_bound(catalog("mermin", 3)).bound;
        const double b3 = hlnhv_bound(catalog("svetlichny", 3)).bound;
        const auto vertices = enumerate_ns_vertices().size();
        char buf[120];
        std::snprintf(buf, sizeof(buf), "bounds (%g, %g, %g), %zu vertices", b1, b2, b3, vertices);
        d = buf;
        return b1 == 2.0 && b2 == 2.0 && b3 == 4.0 && vertices == 24;
    });

    criterion(4, "sharpened bounds hold on 1000 random models per class", 120.0,
              [&](std::string& d) {
                  const auto lhv = run_lhv_chain_suite(catalog("chsh", 2), 1000, 1);
                  const auto hln = run_hlnhv_chain_suite(catalog("svetlichny", 3), 1000, 2);
                  char buf[120];
                  std::snprintf(buf, sizeof(buf), "worst margins %.3e (lhv), %.3e (hlnhv)",
                                lhv.worst_margin, hln.worst_margin);
                  d = buf;
                  return lhv.pass && hln.pass;
              });

    criterion(5, "selective detection fakes a violation yet obeys the sharpened bound", 60.0,
              [&](std::string& d) {
                  const auto chsh = catalog("chsh", 2);
                  const auto res = loophole_search(chsh, 2.0, 12, 100000);
                  char buf[140];
                  std::snprintf(buf, sizeof(buf),
                                "postselected %.6f at eta_c %.6f, sharpened bound %.6f",
                                res.postselected_value, res.eta_c, res.sharpened_bound);
                  d = buf;
                  return res.found && res.postselected_value > 2.0 &&
                         res.sharpened_bound >= res.postselected_value - 1e-9;
              });

    criterion(6, "Monte Carlo agrees with the closed-form efficiency", 60.0, [&](std::string& d) {
        struct Point {
            int n;
            DetectorModel dm;
        };
        const Point grid[5] = {
            {2, DetectorModel::independent(0.9)},
            {3, DetectorModel::independent(0.75, 0.9)},
            {3, DetectorModel::independent(1.0)},
            {4, DetectorModel::independent(0.85, 0.8)},
            {2, DetectorModel::on_off(1.0)},  // exact 2/3 in the noiseless limit
        };
        bool ok = true;
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            YSConfig cfg;
            cfg.num_parties = grid[i].n;
            cfg.detector = grid[i].dm;
            const double truth = ys_eta_c_analytic(cfg);
            const auto est = ys_eta_c_monte_carlo(cfg, 1000000, 100 + i);
            const double err = std::abs(est.estimate - truth);
            worst = std::max(worst, err);
            ok = ok && err <= std::max(3.0 * est.std_error, 1e-3);
            if (i == 4) ok = ok && close(truth, 2.0 / 3.0, 1e-15);
        }
        char buf[80];
        std::snprintf(buf, sizeof(buf), "worst absolute deviation %.2e", worst);
        d = buf;
        return ok;
    });

    criterion(7, "causal claims battery passes and the negative control fails", 60.0,
              [&](std::string& d) {
                  const auto rep = verify_causal_claims(900);
                  const auto neg = verify_causal_claims(900, true);
                  bool connected_witnessed = false, conservation_failed = false;
                  for (const auto& c : rep.claims)
                      if (c.pass && c.name.find("d-connected") != std::string::npos)
                          connected_witnessed = true;
                  for (const auto& c : neg.claims)
                      if (!c.pass && c.name.find("conservation") != std::string::npos)
                          conservation_failed = true;
                  d = std::to_string(rep.claims.size()) + " claims";
                  return rep.all_pass && connected_witnessed && !neg.all_pass &&
                         conservation_failed;
              });

    criterion(8, "fair-sampling models never fake a violation", 30.0, [&](std::string& d) {
        const auto suite = run_fair_sampling_suite(catalog("chsh", 2), 1000, 3);
        char buf[80];
        std::snprintf(buf, sizeof(buf), "worst margin %.3e", suite.worst_margin);
        d = buf;
        return suite.pass;
    });

    return failures;
}
