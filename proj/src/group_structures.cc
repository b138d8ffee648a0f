#include "bellsim/group_structures.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "bellsim/error.h"

namespace bellsim {

namespace {

// Full pairwise homomorphism check up to this group order; above it the
// generator-times-element check (equivalent by induction) is used.
constexpr size_t kExhaustiveHomomorphismLimit = 1000;

std::vector<std::string_view> tokens(std::string_view line) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            i++;
        }
        size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
            i++;
        }
        if (i > start) {
            out.push_back(line.substr(start, i - start));
        }
    }
    return out;
}

bool parse_index(std::string_view s, size_t &out) {
    if (s.empty()) {
        return false;
    }
    size_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') {
            return false;
        }
        v = v * 10 + static_cast<size_t>(c - '0');
        if (v > (size_t{1} << 40)) {
            return false;
        }
    }
    out = v;
    return true;
}

bool orbit_covers(const std::vector<Permutation> &group, size_t n) {
    if (n == 0) {
        return true;
    }
    std::vector<bool> seen(n, false);
    for (const auto &g : group) {
        seen[g[0]] = true;
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) {
        return b;
    });
}

std::string sign_label(double x) {
    return x < 0 ? "-1" : "+1";
}

}  // namespace

Permutation identity_permutation(size_t n) {
    Permutation p(n);
    for (size_t i = 0; i < n; i++) {
        p[i] = i;
    }
    return p;
}

Permutation compose(const Permutation &a, const Permutation &b) {
    Permutation r(b.size());
    for (size_t i = 0; i < b.size(); i++) {
        r[i] = a[b[i]];
    }
    return r;
}

Permutation inverse(const Permutation &p) {
    Permutation r(p.size());
    for (size_t i = 0; i < p.size(); i++) {
        r[p[i]] = i;
    }
    return r;
}

bool is_bijection(const Permutation &p, size_t n) {
    if (p.size() != n) {
        return false;
    }
    std::vector<bool> hit(n, false);
    for (size_t x : p) {
        if (x >= n || hit[x]) {
            return false;
        }
        hit[x] = true;
    }
    return true;
}

FiniteAction::FiniteAction(size_t points, std::vector<Permutation> generators, size_t cap)
    : points_(points), generators_(std::move(generators)) {
    for (size_t g = 0; g < generators_.size(); g++) {
        if (!is_bijection(generators_[g], points_)) {
            throw BellError(
                ErrorKind::InvalidConfig,
                "generator " + std::to_string(g) + " is not a bijection of " + std::to_string(points_) + " points");
        }
    }
    // Finite: the generated monoid is already the group.
    std::deque<size_t> frontier;
    auto add = [&](Permutation p) {
        if (index_.contains(p)) {
            return;
        }
        if (elements_.size() >= cap) {
            throw BellError(
                ErrorKind::GroupTooLarge, "group closure exceeds the cap of " + std::to_string(cap) + " elements");
        }
        index_.emplace(p, elements_.size());
        frontier.push_back(elements_.size());
        elements_.push_back(std::move(p));
    };
    add(identity_permutation(points_));
    while (!frontier.empty()) {
        size_t current = frontier.front();
        frontier.pop_front();
        for (const auto &g : generators_) {
            add(compose(g, elements_[current]));
        }
    }
}

std::optional<size_t> FiniteAction::index_of(const Permutation &p) const {
    auto it = index_.find(p);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

bool FiniteAction::is_transitive() const {
    return orbit_covers(elements_, points_);
}

LabeledVariable::LabeledVariable(std::string name, std::vector<std::string> labels)
    : name_(std::move(name)), labels_(std::move(labels)) {
}

std::vector<std::string> LabeledVariable::label_set() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto &l : labels_) {
        if (seen.insert(l).second) {
            out.push_back(l);
        }
    }
    return out;
}

std::map<std::string, std::vector<size_t>> LabeledVariable::fibers() const {
    std::map<std::string, std::vector<size_t>> out;
    for (size_t p = 0; p < labels_.size(); p++) {
        out[labels_[p]].push_back(p);
    }
    return out;
}

bool LabeledVariable::is_injective() const {
    return label_set().size() == labels_.size();
}

PermissibilityResult is_permissible(const FiniteAction &act, const LabeledVariable &theta) {
    if (theta.points() != act.points()) {
        throw BellError(ErrorKind::DimensionMismatch, "variable '" + theta.name() + "' is not defined on the action's points");
    }
    auto fibers = theta.fibers();
    for (const auto &k : act.elements()) {
        for (const auto &[label, pts] : fibers) {
            const auto &first = theta[k[pts[0]]];
            for (size_t i = 1; i < pts.size(); i++) {
                if (theta[k[pts[i]]] != first) {
                    return {false, PermissibilityWitness{pts[0], pts[i], k}};
                }
            }
        }
    }
    return {true, std::nullopt};
}

InducedGroup induced_group(const FiniteAction &act, const LabeledVariable &theta) {
    auto check = is_permissible(act, theta);
    if (!check.permissible) {
        const auto &w = *check.counterexample;
        throw BellError(
            ErrorKind::NotPermissible,
            "variable '" + theta.name() + "' is not permissible: points " + std::to_string(w.point1) + " and " +
                std::to_string(w.point2) + " share a label that a group element separates");
    }
    InducedGroup out;
    out.labels = theta.label_set();
    std::map<std::string, size_t> label_index;
    for (size_t i = 0; i < out.labels.size(); i++) {
        label_index[out.labels[i]] = i;
    }
    std::set<Permutation> image;
    for (const auto &k : act.elements()) {
        Permutation g(out.labels.size());
        for (size_t p = 0; p < theta.points(); p++) {
            g[label_index[theta[p]]] = label_index[theta[k[p]]];
        }
        out.label_maps.push_back(g);
        if (image.insert(g).second) {
            out.image.push_back(g);
        }
    }

    const auto &elems = act.elements();
    out.homomorphism_verified = true;
    auto verify = [&](size_t i, size_t j) {
        auto product = act.index_of(compose(elems[i], elems[j]));
        if (!product || out.label_maps[*product] != compose(out.label_maps[i], out.label_maps[j])) {
            out.homomorphism_verified = false;
        }
    };
    if (elems.size() <= kExhaustiveHomomorphismLimit) {
        for (size_t i = 0; i < elems.size() && out.homomorphism_verified; i++) {
            for (size_t j = 0; j < elems.size(); j++) {
                verify(i, j);
            }
        }
    } else {
        for (const auto &g : act.generators()) {
            size_t gi = *act.index_of(g);
            for (size_t j = 0; j < elems.size() && out.homomorphism_verified; j++) {
                verify(gi, j);
            }
        }
    }
    out.source_transitive = act.is_transitive();
    out.image_transitive = orbit_covers(out.image, out.labels.size());
    return out;
}

RelatedResult are_related(const LabeledVariable &theta, const LabeledVariable &eta, const FiniteAction *within) {
    if (theta.points() != eta.points()) {
        throw BellError(
            ErrorKind::DimensionMismatch,
            "variables '" + theta.name() + "' and '" + eta.name() + "' live on different point sets");
    }
    const size_t n = theta.points();
    if (within != nullptr) {
        if (within->points() != n) {
            throw BellError(ErrorKind::DimensionMismatch, "group acts on a different point set");
        }
        for (const auto &k : within->elements()) {
            bool ok = true;
            for (size_t p = 0; p < n && ok; p++) {
                ok = eta[p] == theta[k[p]];
            }
            if (ok) {
                return {true, k};
            }
        }
        return {false, std::nullopt};
    }

    auto theta_fibers = theta.fibers();
    auto eta_fibers = eta.fibers();
    if (theta_fibers.size() != eta_fibers.size()) {
        return {false, std::nullopt};
    }
    Permutation k(n);
    for (const auto &[label, eta_points] : eta_fibers) {
        auto it = theta_fibers.find(label);
        if (it == theta_fibers.end() || it->second.size() != eta_points.size()) {
            return {false, std::nullopt};
        }
        for (size_t i = 0; i < eta_points.size(); i++) {
            k[eta_points[i]] = it->second[i];
        }
    }
    return {true, k};
}

RelatedResult are_related_brute_force(const LabeledVariable &theta, const LabeledVariable &eta) {
    if (theta.points() != eta.points()) {
        throw BellError(ErrorKind::DimensionMismatch, "variables live on different point sets");
    }
    const size_t n = theta.points();
    auto k = identity_permutation(n);
    do {
        bool ok = true;
        for (size_t p = 0; p < n && ok; p++) {
            ok = eta[p] == theta[k[p]];
        }
        if (ok) {
            return {true, k};
        }
    } while (std::next_permutation(k.begin(), k.end()));
    return {false, std::nullopt};
}

RelationMatrix classify_pairs(const std::vector<LabeledVariable> &variables, const FiniteAction *within) {
    if (variables.size() < 2) {
        throw BellError(ErrorKind::InvalidConfig, "classify_pairs needs at least two variables");
    }
    RelationMatrix out;
    const size_t m = variables.size();
    out.related.assign(m, std::vector<bool>(m, false));
    out.witnesses.assign(m, std::vector<std::optional<Permutation>>(m));
    for (size_t i = 0; i < m; i++) {
        out.names.push_back(variables[i].name());
        for (size_t j = 0; j < m; j++) {
            auto r = are_related(variables[i], variables[j], within);
            out.related[i][j] = r.related;
            out.witnesses[i][j] = std::move(r.witness);
        }
    }
    return out;
}

FiniteAction FiniteModel::action(size_t cap) const {
    return FiniteAction(points, generators, cap);
}

FiniteModel parse_model(std::string_view text) {
    FiniteModel model;
    bool have_points = false;
    std::optional<std::string> open_variable;
    std::vector<std::optional<std::string>> pending;
    size_t open_line = 0;
    size_t line_no = 0;
    std::set<std::string> names;

    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto line = text.substr(start, end - start);
        start = end + 1;
        line_no++;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        auto tok = tokens(line);
        if (tok.empty()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }

        if (open_variable) {
            if (tok[0] == "end") {
                std::vector<std::string> labels;
                for (size_t p = 0; p < pending.size(); p++) {
                    if (!pending[p]) {
                        throw ParseFailure(
                            ErrorKind::ParseError,
                            line_no,
                            "variable '" + *open_variable + "' has no label for point " + std::to_string(p));
                    }
                    labels.push_back(*pending[p]);
                }
                model.variables.emplace_back(*open_variable, std::move(labels));
                open_variable.reset();
                continue;
            }
            size_t point = 0;
            if (tok.size() != 2 || !parse_index(tok[0], point)) {
                throw ParseFailure(ErrorKind::ParseError, line_no, "expected '<point> <label>' or 'end'");
            }
            if (point >= model.points) {
                throw ParseFailure(ErrorKind::ParseError, line_no, "point " + std::to_string(point) + " out of range");
            }
            if (pending[point]) {
                throw ParseFailure(ErrorKind::ParseError, line_no, "point " + std::to_string(point) + " labeled twice");
            }
            pending[point] = std::string(tok[1]);
            continue;
        }

        if (tok[0] == "points") {
            if (have_points) {
                throw ParseFailure(ErrorKind::ParseError, line_no, "duplicate 'points' directive");
            }
            if (tok.size() != 2 || !parse_index(tok[1], model.points) || model.points == 0) {
                throw ParseFailure(ErrorKind::ParseError, line_no, "expected 'points <N>' with N >= 1");
            }
            have_points = true;
        } else if (tok[0] == "generator") {
            if (!have_points) {
                throw ParseFailure(ErrorKind::ParseError, line_no, "'generator' before 'points'");
            }
            if (tok.size() != model.points + 2) {
                throw ParseFailure(
                    ErrorKind::ParseError,
                    line_no,
                    "generator needs a name and " + std::to_string(model.points) + " images");
            }
            Permutation p(model.points);
            for (size_t i = 0; i < model.points; i++) {
                if (!parse_index(tok[i + 2], p[i])) {
                    throw ParseFailure(ErrorKind::ParseError, line_no, "bad image '" + std::string(tok[i + 2]) + "'");
                }
            }
            if (!is_bijection(p, model.points)) {
                throw ParseFailure(ErrorKind::ParseError, line_no, "generator is not a bijection");
            }
            model.generator_names.emplace_back(tok[1]);
            model.generators.push_back(std::move(p));
        } else if (tok[0] == "variable") {
            if (!have_points) {
                throw ParseFailure(ErrorKind::ParseError, line_no, "'variable' before 'points'");
            }
            if (tok.size() != 2) {
                throw ParseFailure(ErrorKind::ParseError, line_no, "expected 'variable <name>'");
            }
            if (!names.insert(std::string(tok[1])).second) {
                throw ParseFailure(ErrorKind::ParseError, line_no, "duplicate variable '" + std::string(tok[1]) + "'");
            }
            open_variable = std::string(tok[1]);
            open_line = line_no;
            pending.assign(model.points, std::nullopt);
        } else {
            throw ParseFailure(ErrorKind::ParseError, line_no, "unknown directive '" + std::string(tok[0]) + "'");
        }
        if (end == text.size()) {
            break;
        }
    }
    if (open_variable) {
        throw ParseFailure(ErrorKind::ParseError, open_line, "variable '" + *open_variable + "' is missing 'end'");
    }
    if (!have_points) {
        throw ParseFailure(ErrorKind::ParseError, 1, "missing 'points' directive");
    }
    return model;
}

FiniteModel load_model(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw BellError(ErrorKind::Io, "cannot open model " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

std::string model_to_text(const FiniteModel &model) {
    std::ostringstream out;
    out << "points " << model.points << "\n";
    for (size_t g = 0; g < model.generators.size(); g++) {
        out << "generator " << model.generator_names[g];
        for (size_t x : model.generators[g]) {
            out << " " << x;
        }
        out << "\n";
    }
    for (const auto &v : model.variables) {
        out << "variable " << v.name() << "\n";
        for (size_t p = 0; p < v.points(); p++) {
            out << p << " " << v[p] << "\n";
        }
        out << "end\n";
    }
    return out.str();
}

FiniteModel spin_plane_model(size_t half_points) {
    const size_t n = 2 * half_points;
    FiniteModel model;
    model.points = n;
    Permutation step(n);
    for (size_t j = 0; j < n; j++) {
        step[j] = (j + 1) % n;
    }
    model.generator_names.push_back("rotate");
    model.generators.push_back(std::move(step));
    // phi_j = j pi / N. Signs from exact integer comparisons so that the
    // ties at the axes land on +1 without rounding noise.
    std::vector<std::string> theta(n);
    std::vector<std::string> eta(n);
    for (size_t j = 0; j < n; j++) {
        bool cos_nonneg = 2 * j <= half_points || 2 * j >= 3 * half_points;
        bool sin_nonneg = j <= half_points;
        theta[j] = cos_nonneg ? "+1" : "-1";
        eta[j] = sin_nonneg ? "+1" : "-1";
    }
    model.variables.emplace_back("theta", std::move(theta));
    model.variables.emplace_back("eta", std::move(eta));
    return model;
}

FiniteModel chsh_pairs_model(double step_degrees, double a, double a_prime, double b, double b_prime) {
    double count = 360.0 / step_degrees;
    if (!(step_degrees > 0) || std::abs(count - std::round(count)) > 1e-9 || count < 2) {
        throw BellError(ErrorKind::InvalidConfig, "step must divide 360 degrees");
    }
    const size_t m = static_cast<size_t>(std::llround(count));
    FiniteModel model;
    model.points = m;
    Permutation rotate(m);
    Permutation reflect(m);
    for (size_t j = 0; j < m; j++) {
        rotate[j] = (j + 1) % m;
        reflect[j] = m - 1 - j;
    }
    model.generator_names = {"rotate", "reflect"};
    model.generators = {rotate, reflect};

    auto response = [](double phi_deg, double setting_deg) {
        return std::cos((phi_deg - setting_deg) * std::numbers::pi / 180.0);
    };
    auto pair_variable = [&](const std::string &name, double alice_deg, double bob_deg) {
        std::vector<std::string> labels(m);
        for (size_t j = 0; j < m; j++) {
            double phi = (static_cast<double>(j) + 0.5) * step_degrees;
            labels[j] = "(" + sign_label(response(phi, alice_deg)) + "," + sign_label(-response(phi, bob_deg)) + ")";
        }
        return LabeledVariable(name, std::move(labels));
    };
    model.variables.push_back(pair_variable("C", a, b));
    model.variables.push_back(pair_variable("D", a, b_prime));
    model.variables.push_back(pair_variable("E", a_prime, b));
    model.variables.push_back(pair_variable("F", a_prime, b_prime));
    return model;
}

}  // namespace bellsim
