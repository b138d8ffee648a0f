#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bellsim/analysis.h"
#include "bellsim/born_rule.h"
#include "bellsim/error.h"
#include "bellsim/experiment.h"
#include "bellsim/group_structures.h"
#include "bellsim/lhv.h"
#include "bellsim/quantum_spin.h"

namespace py = pybind11;
using namespace bellsim;

namespace {

ComplexMatrix to_matrix(const std::vector<std::vector<Complex>> &rows) {
    ComplexMatrix m(rows.size());
    for (size_t i = 0; i < rows.size(); i++) {
        if (rows[i].size() != rows.size()) {
            throw BellError(ErrorKind::DimensionMismatch, "matrix must be square");
        }
        for (size_t j = 0; j < rows.size(); j++) {
            m(i, j) = rows[i][j];
        }
    }
    return m;
}

std::vector<std::vector<Complex>> to_rows(const ComplexMatrix &m) {
    std::vector<std::vector<Complex>> rows(m.dim(), std::vector<Complex>(m.dim()));
    for (size_t i = 0; i < m.dim(); i++) {
        for (size_t j = 0; j < m.dim(); j++) {
            rows[i][j] = m(i, j);
        }
    }
    return rows;
}

py::dict report_dict(const AnalysisReport &r) {
    py::dict out;
    out["n"] = r.n;
    py::list cells;
    for (const auto &c : r.estimates) {
        py::dict cell;
        cell["name"] = c.name();
        cell["alice"] = std::string(label(c.alice));
        cell["bob"] = std::string(label(c.bob));
        cell["count"] = c.count;
        cell["mean"] = c.mean;
        cell["se"] = c.standard_error;
        cells.append(cell);
    }
    out["cells"] = cells;
    out["S"] = r.chsh ? py::cast(r.chsh->s) : py::none();
    out["S_se"] = r.chsh ? py::cast(r.chsh->standard_error) : py::none();
    out["z2"] = r.z_against_2;
    out["undefined_reason"] = r.undefined_reason;
    py::list ns;
    for (const auto &e : r.no_signalling) {
        py::dict entry;
        entry["party"] = e.party;
        entry["local"] = e.local_setting;
        entry["diff"] = e.difference;
        entry["z"] = e.z;
        ns.append(entry);
    }
    out["no_signalling"] = ns;
    out["kv"] = r.to_kv();
    return out;
}

std::vector<TrialRecord> records_from_tuples(const std::vector<std::tuple<uint64_t, std::string, std::string, int, int>> &rows) {
    std::vector<TrialRecord> out;
    out.reserve(rows.size());
    for (const auto &[trial, alice, bob, x, y] : rows) {
        if (alice != "a" && alice != "a'") {
            throw BellError(ErrorKind::ParseError, "alice setting must be a or a'");
        }
        if (bob != "b" && bob != "b'") {
            throw BellError(ErrorKind::ParseError, "bob setting must be b or b'");
        }
        if ((x != 1 && x != -1) || (y != 1 && y != -1)) {
            throw BellError(ErrorKind::BadOutcome, "outcomes must be -1 or 1");
        }
        out.push_back({trial, alice == "a" ? AliceSetting::A : AliceSetting::APrime,
                       bob == "b" ? BobSetting::B : BobSetting::BPrime, static_cast<int8_t>(x), static_cast<int8_t>(y)});
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bell-test simulation, analysis and finite-model checks.";
    m.attr("__version__") = BELLSIM_VERSION;
    m.attr("sign_convention") = std::string(kSignConvention);

    static py::exception<BellError> bell_error(m, "BellError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const BellError &e) {
            py::set_error(bell_error, e.what());
        }
    });

    m.def(
        "chsh_theory",
        [](double a, double a_prime, double b, double b_prime) {
            return chsh_theory(AngleSettings::from_degrees(a, a_prime, b, b_prime));
        },
        py::arg("a"), py::arg("a_prime"), py::arg("b"), py::arg("b_prime"),
        "Quantum CHSH value for four coplanar angles in degrees.");
    m.def("correlation_theory", &correlation_theory, py::arg("angle"), "-cos(angle), angle in radians.");
    m.def("conditional_outcome_probability", &conditional_outcome_probability, py::arg("u"), py::arg("v"),
          py::arg("angle"));
    m.def("joint_outcome_probability", &joint_outcome_probability, py::arg("u"), py::arg("v"), py::arg("angle"));

    m.def("strategy_bound", []() {
        auto b = enumerate_strategy_bound();
        std::vector<std::pair<std::array<int, 4>, int>> all;
        for (size_t i = 0; i < b.all.size(); i++) {
            const auto &s = b.all[i];
            all.push_back({{s.a, s.a_prime, s.b, s.b_prime}, b.values[i]});
        }
        return py::make_tuple(b.max_value, b.min_value, all);
    }, "(max, min, [(strategy, S), ...]) over the 16 deterministic strategies.");
    m.def(
        "lhv_chsh",
        [](double a, double a_prime, double b, double b_prime, uint64_t n, uint64_t seed, const std::string &model) {
            auto est = lhv_chsh_mc(lhv_model_by_name(model), AngleSettings::from_degrees(a, a_prime, b, b_prime), n, seed);
            return py::make_tuple(est.s, est.standard_error);
        },
        py::arg("a"), py::arg("a_prime"), py::arg("b"), py::arg("b_prime"), py::arg("n"), py::arg("seed"),
        py::arg("model") = "default", "(S, se) from the named hidden-variable model.");

    m.def(
        "eigh",
        [](const std::vector<std::vector<Complex>> &rows) {
            auto e = hermitian_eigen(to_matrix(rows));
            return py::make_tuple(e.eigenvalues, e.eigenvectors);
        },
        py::arg("matrix"), "Ascending eigenvalues and unit eigenvectors of a Hermitian matrix.");
    m.def("spin_operator", [](double x, double y, double z) {
        return to_rows(spin_operator(Direction::normalized({x, y, z})));
    });
    m.def("spin_dot_operator", []() {
        return to_rows(spin_dot_operator());
    });
    m.def("singlet_state", []() {
        auto s = singlet_state().amplitudes();
        return std::vector<Complex>(s.begin(), s.end());
    });
    m.def("resolution_of_identity_defect", py::overload_cast<size_t>(&resolution_of_identity_defect),
          py::arg("grid_points"));
    m.def(
        "coherent_operator",
        [](const std::function<double(double, double, double)> &theta, size_t grid_points,
           std::optional<std::pair<double, double>> range) {
            std::optional<ValueRange> r;
            if (range) {
                r = ValueRange{range->first, range->second};
            }
            auto op = operator_from_coherent(
                [&](const Direction &n) {
                    return theta(n.x(), n.y(), n.z());
                },
                grid_points, r);
            return to_rows(op.matrix);
        },
        py::arg("theta"), py::arg("grid_points"), py::arg("value_range") = py::none(),
        "Operator of a sphere function theta(x, y, z) from coherent-state projectors.");

    m.def(
        "simulate",
        [](uint64_t n, uint64_t seed, const std::string &source, std::array<double, 4> angles, double p_a, double p_b) {
            ExperimentConfig cfg;
            cfg.n = n;
            cfg.seed = seed;
            cfg.source = parse_source(source);
            cfg.settings = AngleSettings::from_degrees(angles[0], angles[1], angles[2], angles[3]);
            cfg.p_a = p_a;
            cfg.p_b = p_b;
            std::vector<std::tuple<uint64_t, std::string, std::string, int, int>> rows;
            {
                py::gil_scoped_release release;
                auto trials = run_experiment(cfg);
                rows.reserve(trials.size());
                for (const auto &t : trials) {
                    rows.emplace_back(t.trial, std::string(label(t.alice_setting)), std::string(label(t.bob_setting)),
                                      t.alice_outcome, t.bob_outcome);
                }
            }
            return rows;
        },
        py::arg("n"), py::arg("seed"), py::arg("source") = "quantum",
        py::arg("angles") = std::array<double, 4>{0, 90, 225, 135}, py::arg("p_a") = 0.5, py::arg("p_b") = 0.5,
        "Trial records as (trial, alice_setting, bob_setting, alice_outcome, bob_outcome) tuples.");
    m.def(
        "analyze",
        [](const std::vector<std::tuple<uint64_t, std::string, std::string, int, int>> &rows) {
            return report_dict(evaluate_report(records_from_tuples(rows)));
        },
        py::arg("records"));
    m.def(
        "analyze_file",
        [](const std::string &path) {
            return report_dict(evaluate_report(read_trials(std::filesystem::path(path))));
        },
        py::arg("path"));

    m.def(
        "are_related",
        [](const std::vector<std::string> &theta, const std::vector<std::string> &eta) {
            auto r = are_related(LabeledVariable("theta", theta), LabeledVariable("eta", eta));
            return py::make_tuple(r.related, r.witness);
        },
        py::arg("theta"), py::arg("eta"), "(related, k) with eta[p] == theta[k[p]].");
    m.def(
        "is_permissible",
        [](size_t points, const std::vector<Permutation> &generators, const std::vector<std::string> &theta) {
            return is_permissible(FiniteAction(points, generators), LabeledVariable("theta", theta)).permissible;
        },
        py::arg("points"), py::arg("generators"), py::arg("theta"));
    m.def(
        "relate_model",
        [](const std::string &path, bool within_group) {
            auto model = load_model(path);
            auto act = model.action();
            auto rel = classify_pairs(model.variables, within_group ? &act : nullptr);
            return py::make_tuple(rel.names, rel.related);
        },
        py::arg("path"), py::arg("within_group") = false);
}
