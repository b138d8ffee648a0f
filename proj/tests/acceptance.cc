// Acceptance run: one PASS/FAIL line per criterion. With an argument, runs
// only the listed criterion numbers.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bellsim/analysis.h"
#include "bellsim/born_rule.h"
#include "bellsim/experiment.h"
#include "bellsim/group_structures.h"
#include "bellsim/lhv.h"
#include "bellsim/quantum_spin.h"

using namespace bellsim;

namespace {

const double kTwoSqrt2 = 2 * std::sqrt(2.0);

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char *format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char *format, ...) {
    char buf[1024];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

ExperimentConfig quantum_config(uint64_t n, uint64_t seed) {
    ExperimentConfig cfg;
    cfg.n = n;
    cfg.seed = seed;
    cfg.settings = AngleSettings::from_degrees(0, 90, 225, 135);
    return cfg;
}

Outcome theory_chsh() {
    double s = chsh_theory(AngleSettings::from_degrees(0, 90, 225, 135));
    double err = std::abs(s - kTwoSqrt2);
    return {err <= 1e-12, fmt("S = %.15f, |S - 2 sqrt 2| = %.2e (tol 1e-12)", s, err)};
}

Outcome monte_carlo_violation() {
    auto t0 = std::chrono::steady_clock::now();
    auto trials = run_experiment(quantum_config(1000000, 20151021));
    auto stat = chsh_statistic(estimate_correlations(trials));
    double z = z_against_two(stat);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = stat.s >= 2.818 && stat.s <= 2.838 && z > 50 && secs < 10;
    return {pass, fmt("n = 1e6, S = %.5f (want [2.818, 2.838]), se = %.5f, z = %.1f (want > 50), %.2f s (want < 10)",
                      stat.s, stat.standard_error, z, secs)};
}

Outcome classical_bound() {
    auto bound = enumerate_strategy_bound();
    bool all_pm2 = std::all_of(bound.values.begin(), bound.values.end(), [](int v) {
        return v == 2 || v == -2;
    });
    bool enumeration_ok = bound.all.size() == 16 && bound.max_value == 2 && all_pm2;

    std::mt19937_64 rng(25);
    std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi);
    std::vector<AngleSettings> sets{AngleSettings::from_degrees(0, 90, 225, 135)};
    while (sets.size() < 25) {
        sets.emplace_back(angle(rng), angle(rng), angle(rng), angle(rng));
    }
    int violations = 0;
    double worst = -1e9;
    auto model = default_lhv_model();
    for (size_t i = 0; i < sets.size(); i++) {
        auto est = lhv_chsh_mc(model, sets[i], 1000000, 1000 + i);
        double margin = est.standard_error > 0 ? (est.s - 2) / est.standard_error : (est.s > 2 ? 1e9 : -1e9);
        worst = std::max(worst, margin);
        if (est.s > 2 + 3 * est.standard_error) {
            violations++;
        }
    }
    return {enumeration_ok && violations == 0,
            fmt("16 strategies, max %d, min %d, all +-2: %s; LHV MC 25 settings at n = 1e6: %d above 2 + 3 se, "
                "largest (S - 2)/se = %.2f",
                bound.max_value, bound.min_value, all_pm2 ? "yes" : "no", violations, worst)};
}

Outcome spin_dot_spectrum() {
    auto e = hermitian_eigen(spin_dot_operator());
    const std::array<double, 4> expected{-3, -1, -1, -1};
    double err = 0;
    for (size_t i = 0; i < 4; i++) {
        err = std::max(err, std::abs(e.eigenvalues[i] - expected[i]));
    }
    double overlap = std::abs(inner(e.eigenvectors[0], singlet_state().amplitudes()));
    bool pass = err <= 1e-10 && overlap >= 1 - 1e-10;
    return {pass,
            fmt("eigenvalues (%.12f, %.12f, %.12f, %.12f) vs (-3, -1, -1, -1): max dev %.3g (tol 1e-10); "
                "singlet overlap %.15f (want >= 1 - 1e-10); trace %.1f. The operator has trace 0, so "
                "(-3, -1, -1, -1) is impossible; the triplet eigenvalue is +1",
                e.eigenvalues[0], e.eigenvalues[1], e.eigenvalues[2], e.eigenvalues[3], err, overlap,
                spin_dot_operator().trace().real())};
}

Outcome no_signalling() {
    int bad = 0;
    double worst = 0;
    for (uint64_t seed = 0; seed < 20; seed++) {
        auto ns = no_signalling_check(run_experiment(quantum_config(1000000, 7000 + seed)));
        for (const auto &entry : ns) {
            double z = entry.z ? std::abs(*entry.z) : INFINITY;
            worst = std::max(worst, z);
            if (z > 4) {
                bad++;
            }
        }
    }
    return {bad == 0, fmt("20 seeds x 4 marginals at n = 1e6: %d with |z| > 4, max |z| = %.2f", bad, worst)};
}

Outcome resolution_of_identity() {
    double d4 = resolution_of_identity_defect(10000);
    double d5 = resolution_of_identity_defect(100000);
    return {d4 < 1e-3 && d5 < d4, fmt("defect N = 1e4: %.3e (want < 1e-3), N = 1e5: %.3e (want smaller)", d4, d5)};
}

Outcome conjugation() {
    std::mt19937_64 rng(2016);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    auto a = Direction::normalized({0.36, -0.48, 0.8});
    SphereFunction theta = [a](const Direction &n) {
        return n.dot(a);
    };
    const ValueRange unit{-1, 1};
    double worst = 0;
    for (int i = 0; i < 20; i++) {
        auto axis = Direction::normalized({g(rng), g(rng), g(rng)});
        auto r = rotation_about(axis, angle(rng));
        worst = std::max(worst, conjugation_defect(theta, r, 100000, unit));
    }
    // The half turn about the bisector of the z and x axes exchanges them.
    auto k = rotation_about(Direction::normalized({1, 0, 1}), std::numbers::pi);
    SphereFunction theta_z = [](const Direction &n) {
        return n.z();
    };
    double bisector = conjugation_defect(theta_z, k, 100000, unit);
    return {worst < 1e-6 && bisector < 1e-6,
            fmt("theta = n.a, N = 1e5: max defect over 20 rotations %.3e, bisector half turn %.3e (tol 1e-6)", worst,
                bisector)};
}

Outcome two_valued_operator() {
    struct Case {
        Direction axis;
        double low;
        double high;
    };
    const std::vector<Case> cases{
        {Direction::z_axis(), -1, 1},
        {Direction::x_axis(), -1, 1},
        {Direction::y_axis(), -1, 1},
        {Direction::z_axis(), 2, 5},
    };
    const size_t grid = 10000000;
    double value_err = 0;
    double vector_err = 0;
    for (const auto &c : cases) {
        auto op = operator_from_coherent(
            [&](const Direction &n) {
                return n.dot(c.axis) < 0 ? c.low : c.high;
            },
            grid);
        auto e = hermitian_eigen(op.matrix);
        auto s = hermitian_eigen(spin_operator(c.axis));
        value_err = std::max({value_err, std::abs(e.eigenvalues[0] - c.low), std::abs(e.eigenvalues[1] - c.high)});
        for (size_t i = 0; i < 2; i++) {
            double ov = std::abs(inner(e.eigenvectors[i], s.eigenvectors[i]));
            vector_err = std::max(vector_err, std::sqrt(std::max(0.0, 1 - ov * ov)));
        }
    }
    return {value_err <= 1e-6 && vector_err <= 1e-6,
            fmt("hemisphere functions on the x, y, z axes, N = 1e7: eigenvalue dev %.3e, eigenvector sin-angle %.3e "
                "(tol 1e-6)",
                value_err, vector_err)};
}

// Restricted-growth labelings: canonical up to renaming labels.
void canonical_labelings(size_t n, std::vector<size_t> &cur, size_t used, std::vector<std::vector<size_t>> &out) {
    if (cur.size() == n) {
        out.push_back(cur);
        return;
    }
    for (size_t l = 0; l <= used; l++) {
        cur.push_back(l);
        canonical_labelings(n, cur, std::max(used, l + 1), out);
        cur.pop_back();
    }
}

bool brute_force_related(const std::vector<size_t> &theta, const std::vector<size_t> &eta) {
    std::vector<size_t> k(theta.size());
    for (size_t i = 0; i < k.size(); i++) {
        k[i] = i;
    }
    do {
        bool ok = true;
        for (size_t p = 0; p < k.size() && ok; p++) {
            ok = eta[p] == theta[k[p]];
        }
        if (ok) {
            return true;
        }
    } while (std::next_permutation(k.begin(), k.end()));
    return false;
}

LabeledVariable to_variable(const std::vector<size_t> &v) {
    std::vector<std::string> labels;
    for (size_t x : v) {
        labels.push_back(std::to_string(x));
    }
    return LabeledVariable("v", std::move(labels));
}

Outcome relatedness_oracle() {
    auto t0 = std::chrono::steady_clock::now();
    uint64_t pairs = 0;
    uint64_t mismatches = 0;
    uint64_t bad_witnesses = 0;
    for (size_t n = 1; n <= 6; n++) {
        std::vector<std::vector<size_t>> thetas;
        std::vector<size_t> cur;
        canonical_labelings(n, cur, 0, thetas);
        for (const auto &theta : thetas) {
            size_t alphabet = *std::max_element(theta.begin(), theta.end()) + 2;  // theta's labels plus one foreign
            auto theta_var = to_variable(theta);
            std::vector<size_t> eta(n, 0);
            while (true) {
                auto fast = are_related(theta_var, to_variable(eta));
                pairs++;
                if (fast.related != brute_force_related(theta, eta)) {
                    mismatches++;
                }
                if (fast.related) {
                    for (size_t p = 0; p < n; p++) {
                        if (eta[p] != theta[(*fast.witness)[p]]) {
                            bad_witnesses++;
                            break;
                        }
                    }
                }
                size_t i = 0;
                while (i < n && ++eta[i] == alphabet) {
                    eta[i++] = 0;
                }
                if (i == n) {
                    break;
                }
            }
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {mismatches == 0 && bad_witnesses == 0 && secs < 60,
            fmt("|points| <= 6: %llu (theta, eta) pairs, %llu decision mismatches, %llu bad witnesses, %.1f s "
                "(want < 60)",
                static_cast<unsigned long long>(pairs), static_cast<unsigned long long>(mismatches),
                static_cast<unsigned long long>(bad_witnesses), secs)};
}

Outcome conditioning_consistency() {
    int unequal = 0;
    for (uint64_t seed = 0; seed < 50; seed++) {
        auto trials = run_experiment(quantum_config(10000, 9000 + seed));
        auto full = estimate_correlations(trials);
        for (size_t c = 0; c < 4; c++) {
            std::vector<TrialRecord> subset;
            for (const auto &t : trials) {
                if (t.alice_setting == full[c].alice && t.bob_setting == full[c].bob) {
                    subset.push_back(t);
                }
            }
            if (estimate_correlations(subset)[c] != full[c]) {
                unequal++;
            }
        }
    }
    return {unequal == 0, fmt("50 datasets x 4 cells at n = 1e4: %d cells differ from the single-cell subset", unequal)};
}

struct Criterion {
    int number;
    const char *name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char **argv) {
    const std::vector<Criterion> criteria{
        {1, "theory CHSH at 0/90/225/135 deg", theory_chsh},
        {2, "Monte-Carlo violation", monte_carlo_violation},
        {3, "classical bound", classical_bound},
        {4, "spin-dot spectrum", spin_dot_spectrum},
        {5, "no-signalling", no_signalling},
        {6, "resolution of identity", resolution_of_identity},
        {7, "rotation conjugation", conjugation},
        {8, "two-valued operator spectrum", two_valued_operator},
        {9, "relatedness oracle equivalence", relatedness_oracle},
        {10, "conditioning consistency", conditioning_consistency},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; i++) {
        selected.insert(std::atoi(argv[i]));
    }
    int failures = 0;
    for (const auto &c : criteria) {
        if (!selected.empty() && !selected.contains(c.number)) {
            continue;
        }
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("error: ") + e.what()};
        }
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.number, c.name, o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
