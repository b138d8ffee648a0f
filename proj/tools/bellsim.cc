#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "bellsim/analysis.h"
#include "bellsim/born_rule.h"
#include "bellsim/error.h"
#include "bellsim/experiment.h"
#include "bellsim/group_structures.h"
#include "bellsim/lhv.h"
#include "bellsim/quantum_spin.h"

using namespace bellsim;

namespace {

// FNV-1a over the resolved config text.
std::string config_hash(const std::string &text) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

ExperimentConfig resolve_config(const std::string &path) {
    auto cfg = load_config(path);
    if (const char *env = std::getenv("BELLSIM_SEED")) {
        std::string text(env);
        size_t used = 0;
        uint64_t seed = 0;
        try {
            seed = std::stoull(text, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != text.size() || text.front() == '-') {
            throw BellError(ErrorKind::InvalidConfig, "BELLSIM_SEED='" + text + "' is not an unsigned integer");
        }
        cfg.seed = seed;
    }
    return cfg;
}

void echo_config(const ExperimentConfig &cfg) {
    std::string text = cfg.to_text();
    std::cout << "bellsim " << BELLSIM_VERSION << "\n";
    std::cout << "seed: " << cfg.seed << (std::getenv("BELLSIM_SEED") ? " (from BELLSIM_SEED)" : "") << "\n";
    std::cout << "config hash: " << config_hash(text) << "\n";
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::cout << "  " << line << "\n";
    }
}

int cmd_simulate(const std::string &config_path, const std::string &out_path, unsigned threads) {
    auto cfg = resolve_config(config_path);
    echo_config(cfg);
    auto trials = run_experiment(cfg, threads);
    size_t bytes = write_trials(trials, out_path);
    auto est = estimate_correlations(trials);
    std::cout << "wrote " << trials.size() << " trials (" << bytes << " bytes) to " << out_path << "\n";
    std::cout << "cell counts:";
    for (const auto &c : est) {
        std::cout << " " << c.name() << "=" << c.count;
    }
    std::cout << "\n";
    return 0;
}

int cmd_analyze(const std::string &trials_path, const std::string &format, const std::string &config_path) {
    auto trials = read_trials(trials_path);
    ReportMetadata meta;
    meta.tool_version = BELLSIM_VERSION;
    if (!config_path.empty()) {
        auto cfg = resolve_config(config_path);
        meta.source = source_tag(cfg.source);
        meta.seed = cfg.seed;
        meta.settings = cfg.settings;
        meta.config_hash = config_hash(cfg.to_text());
    }
    auto report = evaluate_report(trials, meta);
    std::cout << (format == "kv" ? report.to_kv() : report.to_text());
    return 0;
}

int cmd_theory(const std::vector<double> &degrees) {
    auto s = AngleSettings::from_degrees(degrees[0], degrees[1], degrees[2], degrees[3]);
    std::cout << std::setprecision(10);
    std::cout << "settings (deg): a=" << degrees[0] << " a'=" << degrees[1] << " b=" << degrees[2]
              << " b'=" << degrees[3] << "\n";
    std::cout << "sign convention: " << kSignConvention << "\n";
    std::cout << "E(a,b)   = " << correlation_theory(s.a() - s.b()) << "\n";
    std::cout << "E(a',b)  = " << correlation_theory(s.a_prime() - s.b()) << "\n";
    std::cout << "E(a,b')  = " << correlation_theory(s.a() - s.b_prime()) << "\n";
    std::cout << "E(a',b') = " << correlation_theory(s.a_prime() - s.b_prime()) << "\n";
    std::cout << "S = " << std::setprecision(12) << chsh_theory(s) << "\n";
    std::cout << "local bound 2, quantum bound 2 sqrt 2 = " << 2 * std::numbers::sqrt2 << "\n";
    return 0;
}

int cmd_lhv_bound() {
    auto bound = enumerate_strategy_bound();
    std::cout << "strategy (A,A',B,B')  S\n";
    for (size_t i = 0; i < bound.all.size(); i++) {
        std::cout << "  " << bound.all[i].str() << "   " << std::showpos << bound.values[i] << std::noshowpos << "\n";
    }
    std::cout << "max " << bound.max_value << ", min " << bound.min_value << "\n";
    std::cout << bound.argmax.size() << " strategies reach the max:\n";
    for (const auto &s : bound.argmax) {
        std::cout << "  " << s.str() << "\n";
    }
    return 0;
}

int cmd_spectrum() {
    auto op = spin_dot_operator();
    auto e = hermitian_eigen(op);
    std::cout << "operator: sx(x)sx + sy(x)sy + sz(x)sz\n";
    std::cout << std::fixed << std::setprecision(6);
    std::cout << "eigenvalues:";
    for (double v : e.eigenvalues) {
        std::cout << " " << v;
    }
    std::cout << "\n";
    for (const auto &g : e.groups()) {
        std::cout << "  " << g.value << " (x" << g.multiplicity << ")\n";
    }
    std::cout << "trace: " << op.trace().real() << "\n";
    double overlap = std::abs(inner(e.eigenvectors[0], singlet_state().amplitudes()));
    std::cout << "singlet overlap with the " << e.eigenvalues[0] << " eigenvector: " << overlap << "\n";
    return 0;
}

int cmd_coherent(size_t grid) {
    std::cout << "grid: " << grid << " points (Fibonacci lattice)\n";
    std::cout << std::scientific << std::setprecision(3);
    std::cout << "resolution of identity defect ||2 mean |n><n| - I||_F: " << resolution_of_identity_defect(grid)
              << "\n";
    if (grid < kMinOperatorGrid) {
        std::cout << "operator checks need at least " << kMinOperatorGrid << " points\n";
        return 0;
    }
    auto a = Direction::z_axis();
    auto op = operator_from_coherent(
        [&](const Direction &n) {
            return n.dot(a);
        },
        grid,
        ValueRange{-1, 1});
    std::cout << std::fixed << std::setprecision(8);
    std::cout << "theta(n) = n.z: raw = c * sz with c = " << proportionality_constant(op.raw, spin_operator(a))
              << " (1/6 = " << 1.0 / 6 << ")\n";
    std::cout << std::scientific << std::setprecision(3);
    std::cout << "  rescaled operator vs sz, max entry deviation: " << max_abs_distance(op.matrix, spin_operator(a))
              << "\n";
    auto k = rotation_about(Direction::normalized({1, 0, 1}), std::numbers::pi);
    std::cout << "  conjugation defect, half turn about the x-z bisector: "
              << conjugation_defect(
                     [&](const Direction &n) {
                         return n.dot(a);
                     },
                     k,
                     grid,
                     ValueRange{-1, 1})
              << "\n";
    auto sign_op = operator_from_coherent(
        [&](const Direction &n) {
            return n.dot(a) < 0 ? -1.0 : 1.0;
        },
        grid);
    auto e = hermitian_eigen(sign_op.matrix);
    std::cout << std::fixed << std::setprecision(8);
    std::cout << "theta(n) = sign(n.z): eigenvalues " << e.eigenvalues[0] << ", " << e.eigenvalues[1] << "\n";
    return 0;
}

std::string permutation_text(const Permutation &p) {
    std::string out = "[";
    for (size_t i = 0; i < p.size(); i++) {
        out += (i ? " " : "") + std::to_string(p[i]);
    }
    return out + "]";
}

int cmd_relate(const std::string &model_path, bool within_group) {
    auto model = load_model(model_path);
    auto act = model.action();
    std::cout << "model: " << model_path << "\n";
    std::cout << "points: " << model.points << ", generators: " << model.generators.size()
              << ", group order: " << act.elements().size() << (act.is_transitive() ? " (transitive)" : "") << "\n";
    for (const auto &v : model.variables) {
        auto p = is_permissible(act, v);
        std::cout << "variable " << v.name() << ": " << v.label_set().size() << " labels"
                  << (v.is_injective() ? ", injective" : "");
        if (p.permissible) {
            auto induced = induced_group(act, v);
            std::cout << ", permissible, induced group order " << induced.image.size()
                      << (induced.homomorphism_verified ? ", homomorphism verified" : ", HOMOMORPHISM FAILED") << "\n";
        } else {
            const auto &w = *p.counterexample;
            std::cout << ", not permissible: points " << w.point1 << " and " << w.point2 << " share a label, k = "
                      << permutation_text(w.k) << " separates them\n";
        }
    }
    if (model.variables.size() < 2) {
        return 0;
    }
    auto m = classify_pairs(model.variables, within_group ? &act : nullptr);
    std::cout << "relatedness (" << (within_group ? "within the generated group" : "any bijection")
              << "), eta = theta o k:\n";
    for (size_t i = 0; i < m.names.size(); i++) {
        for (size_t j = i + 1; j < m.names.size(); j++) {
            std::cout << "  " << m.names[i] << " ~ " << m.names[j] << ": ";
            if (m.related[i][j]) {
                std::cout << "related, k = " << permutation_text(*m.witnesses[i][j]) << "\n";
            } else {
                std::cout << "essentially different\n";
            }
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Bell-test simulation and analysis"};
    app.set_version_flag("--version", BELLSIM_VERSION);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    unsigned threads = 0;
    auto *simulate = app.add_subcommand("simulate", "Generate trial records from a config file");
    simulate->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    simulate->add_option("--out", out_path, "Output CSV path")->required();
    simulate->add_option("--threads", threads, "Worker threads (0 = hardware count)");

    std::string trials_path;
    std::string format = "text";
    std::string analyze_config;
    auto *analyze = app.add_subcommand("analyze", "Analyze a trial CSV");
    analyze->add_option("--trials", trials_path, "Trial CSV")->required()->check(CLI::ExistingFile);
    analyze->add_option("--format", format, "text or kv")->check(CLI::IsMember({"text", "kv"}));
    analyze->add_option("--config", analyze_config, "Config used for the run, echoed as metadata")
        ->check(CLI::ExistingFile);

    std::vector<double> angles;
    auto *theory = app.add_subcommand("theory", "Quantum CHSH value for four angles in degrees");
    theory->add_option("angles", angles, "a a' b b' in degrees")->required()->expected(4);

    auto *lhv_bound = app.add_subcommand("lhv-bound", "Enumerate the 16 deterministic strategies");
    auto *spectrum = app.add_subcommand("spectrum", "Spectrum of the two-particle spin-dot operator");

    size_t grid = 100000;
    auto *coherent = app.add_subcommand("coherent", "Coherent-state operator checks on a sphere grid");
    coherent->add_option("--grid", grid, "Grid points")->required();

    std::string model_path;
    bool within_group = false;
    auto *relate = app.add_subcommand("relate", "Permissibility and relatedness in a finite model");
    relate->add_option("--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
    relate->add_flag("--within-group", within_group, "Only accept witnesses from the generated group");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) {
            return cmd_simulate(config_path, out_path, threads);
        }
        if (*analyze) {
            return cmd_analyze(trials_path, format, analyze_config);
        }
        if (*theory) {
            return cmd_theory(angles);
        }
        if (*lhv_bound) {
            return cmd_lhv_bound();
        }
        if (*spectrum) {
            return cmd_spectrum();
        }
        if (*coherent) {
            return cmd_coherent(grid);
        }
        if (*relate) {
            return cmd_relate(model_path, within_group);
        }
    } catch (const BellError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
