#include "bellsim/group_structures.h"

#include <algorithm>
#include <random>
#include <set>

#include "bellsim/error.h"
#include "gtest/gtest.h"

using namespace bellsim;

namespace {

LabeledVariable var(std::vector<std::string> labels, std::string name = "v") {
    return LabeledVariable(std::move(name), std::move(labels));
}

Permutation shift(size_t n, size_t by = 1) {
    Permutation p(n);
    for (size_t i = 0; i < n; i++) {
        p[i] = (i + by) % n;
    }
    return p;
}

bool witness_holds(const LabeledVariable &theta, const LabeledVariable &eta, const Permutation &k) {
    for (size_t p = 0; p < theta.points(); p++) {
        if (eta[p] != theta[k[p]]) {
            return false;
        }
    }
    return true;
}

// Every labeling of n points with labels "0".."L-1", in lexicographic order.
std::vector<LabeledVariable> all_labelings(size_t n, size_t alphabet) {
    std::vector<LabeledVariable> out;
    std::vector<size_t> digits(n, 0);
    while (true) {
        std::vector<std::string> labels;
        for (size_t d : digits) {
            labels.push_back(std::to_string(d));
        }
        out.emplace_back("v", std::move(labels));
        size_t i = 0;
        while (i < n && ++digits[i] == alphabet) {
            digits[i++] = 0;
        }
        if (i == n) {
            return out;
        }
    }
}

template <typename F>
ErrorKind kind_of(F &&f) {
    try {
        f();
    } catch (const BellError &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no BellError thrown";
    return ErrorKind::Io;
}

}  // namespace

TEST(group_structures, permutation_algebra) {
    Permutation a{1, 2, 0};
    Permutation b{0, 2, 1};
    // (a o b)(i) = a(b(i)).
    EXPECT_EQ(compose(a, b), (Permutation{1, 0, 2}));
    EXPECT_EQ(compose(a, inverse(a)), identity_permutation(3));
    EXPECT_TRUE(is_bijection(a, 3));
    EXPECT_FALSE(is_bijection({0, 0, 1}, 3));
    EXPECT_FALSE(is_bijection({0, 1}, 3));
}

TEST(group_structures, closure_orders) {
    EXPECT_EQ(FiniteAction(5, {shift(5)}).elements().size(), 5u);
    EXPECT_EQ(FiniteAction(4, {}).elements().size(), 1u);
    FiniteAction s4(4, {shift(4), {1, 0, 2, 3}});
    EXPECT_EQ(s4.elements().size(), 24u);
    EXPECT_EQ(s4.elements().front(), identity_permutation(4));
    EXPECT_TRUE(s4.is_transitive());
    EXPECT_FALSE(FiniteAction(4, {{1, 0, 2, 3}}).is_transitive());
}

TEST(group_structures, closure_errors) {
    EXPECT_EQ(kind_of([] { FiniteAction(3, {{0, 0, 1}}); }), ErrorKind::InvalidConfig);
    EXPECT_EQ(kind_of([] { FiniteAction(8, {shift(8), {1, 0, 2, 3, 4, 5, 6, 7}}, 1000); }), ErrorKind::GroupTooLarge);
}

TEST(group_structures, permissible_examples) {
    FiniteAction s3(3, {shift(3), {1, 0, 2}});
    EXPECT_TRUE(is_permissible(s3, var({"x", "y", "z"})).permissible);
    EXPECT_TRUE(is_permissible(s3, var({"c", "c", "c"})).permissible);

    FiniteAction cyclic(3, {shift(3)});
    auto r = is_permissible(cyclic, var({"alpha", "alpha", "beta"}));
    ASSERT_FALSE(r.permissible);
    const auto &w = *r.counterexample;
    EXPECT_EQ(w.point1, 0u);
    EXPECT_EQ(w.point2, 1u);
    EXPECT_EQ(w.k, shift(3));
}

TEST(group_structures, permissible_trivial_group_and_injective) {
    std::mt19937_64 rng(3);
    for (const auto &theta : all_labelings(4, 3)) {
        EXPECT_TRUE(is_permissible(FiniteAction(4, {}), theta).permissible);
    }
    for (int i = 0; i < 20; i++) {
        Permutation g = identity_permutation(5);
        std::shuffle(g.begin(), g.end(), rng);
        EXPECT_TRUE(is_permissible(FiniteAction(5, {g, shift(5)}), var({"a", "b", "c", "d", "e"})).permissible);
    }
}

TEST(group_structures, permissible_iff_generators_preserve_fibers) {
    // Permissibility under the closure equals the generator-level check, and
    // adding a generator can only keep or remove permissibility.
    std::mt19937_64 rng(6);
    auto labelings = all_labelings(5, 3);
    for (int trial = 0; trial < 30; trial++) {
        Permutation g1 = identity_permutation(5);
        Permutation g2 = identity_permutation(5);
        std::shuffle(g1.begin(), g1.end(), rng);
        std::shuffle(g2.begin(), g2.end(), rng);
        FiniteAction small(5, {g1});
        FiniteAction big(5, {g1, g2});
        for (const auto &theta : labelings) {
            bool generators_ok = true;
            for (const auto &g : {g1, g2}) {
                for (size_t p = 0; p < 5; p++) {
                    for (size_t q = 0; q < 5; q++) {
                        if (theta[p] == theta[q] && theta[g[p]] != theta[g[q]]) {
                            generators_ok = false;
                        }
                    }
                }
            }
            bool in_big = is_permissible(big, theta).permissible;
            EXPECT_EQ(in_big, generators_ok);
            if (in_big) {
                EXPECT_TRUE(is_permissible(small, theta).permissible);
            }
        }
    }
}

TEST(group_structures, induced_group_injective_s3) {
    FiniteAction s3(3, {shift(3), {1, 0, 2}});
    auto g = induced_group(s3, var({"x", "y", "z"}));
    EXPECT_EQ(g.image.size(), 6u);
    EXPECT_EQ(g.label_maps.size(), 6u);
    EXPECT_TRUE(g.homomorphism_verified);
    EXPECT_TRUE(g.source_transitive);
    EXPECT_TRUE(g.image_transitive);
}

TEST(group_structures, induced_group_constant_is_trivial) {
    FiniteAction s3(3, {shift(3), {1, 0, 2}});
    auto g = induced_group(s3, var({"c", "c", "c"}));
    ASSERT_EQ(g.image.size(), 1u);
    EXPECT_EQ(g.image[0], identity_permutation(1));
    EXPECT_TRUE(g.homomorphism_verified);
}

TEST(group_structures, induced_group_square_diagonals) {
    FiniteAction square(4, {shift(4)});
    auto g = induced_group(square, var({"p", "q", "p", "q"}));
    EXPECT_EQ(g.labels, (std::vector<std::string>{"p", "q"}));
    ASSERT_EQ(g.image.size(), 2u);
    EXPECT_EQ(g.image[1], (Permutation{1, 0}));
    EXPECT_TRUE(g.homomorphism_verified);
    EXPECT_TRUE(g.image_transitive);
}

TEST(group_structures, induced_group_requires_permissible) {
    FiniteAction cyclic(3, {shift(3)});
    EXPECT_EQ(kind_of([&] { induced_group(cyclic, var({"a", "a", "b"})); }), ErrorKind::NotPermissible);
}

TEST(group_structures, induced_group_transitivity_carries_over) {
    std::mt19937_64 rng(10);
    auto labelings = all_labelings(6, 3);
    for (int trial = 0; trial < 10; trial++) {
        Permutation g = identity_permutation(6);
        std::shuffle(g.begin(), g.end(), rng);
        FiniteAction act(6, {shift(6), g});
        for (const auto &theta : labelings) {
            if (!is_permissible(act, theta).permissible) {
                continue;
            }
            auto induced = induced_group(act, theta);
            EXPECT_TRUE(induced.homomorphism_verified);
            if (induced.source_transitive) {
                EXPECT_TRUE(induced.image_transitive);
            }
        }
    }
}

TEST(group_structures, related_examples) {
    auto theta = var({"x", "x", "y"});
    auto same = are_related(theta, theta);
    ASSERT_TRUE(same.related);
    EXPECT_EQ(*same.witness, identity_permutation(3));

    auto eta = var({"x", "y", "y"});
    EXPECT_FALSE(are_related(theta, eta).related);
    EXPECT_FALSE(are_related_brute_force(theta, eta).related);

    auto moved = var({"y", "x", "x"});
    auto r = are_related(theta, moved);
    ASSERT_TRUE(r.related);
    EXPECT_TRUE(witness_holds(theta, moved, *r.witness));

    EXPECT_FALSE(are_related(theta, var({"x", "x", "z"})).related);
    EXPECT_EQ(kind_of([&] { are_related(theta, var({"x"})); }), ErrorKind::DimensionMismatch);
}

TEST(group_structures, related_within_group) {
    FiniteAction cyclic(4, {shift(4)});
    auto theta = var({"a", "b", "b", "b"});
    auto eta = var({"b", "a", "b", "b"});
    auto r = are_related(theta, eta, &cyclic);
    ASSERT_TRUE(r.related);
    EXPECT_TRUE(witness_holds(theta, eta, *r.witness));
    EXPECT_EQ(*r.witness, shift(4, 3));

    // Related by a bijection, but not by any rotation of the square.
    FiniteAction square(4, {shift(4)});
    auto adjacent = var({"p", "p", "q", "q"});
    auto diagonal = var({"p", "q", "p", "q"});
    EXPECT_TRUE(are_related(adjacent, diagonal).related);
    EXPECT_FALSE(are_related(adjacent, diagonal, &square).related);
}

TEST(group_structures, fiber_decision_matches_brute_force) {
    for (size_t n = 1; n <= 5; n++) {
        auto labelings = all_labelings(n, 3);
        for (const auto &theta : labelings) {
            for (const auto &eta : labelings) {
                auto fast = are_related(theta, eta);
                ASSERT_EQ(fast.related, are_related_brute_force(theta, eta).related);
                if (fast.related) {
                    ASSERT_TRUE(is_bijection(*fast.witness, n));
                    ASSERT_TRUE(witness_holds(theta, eta, *fast.witness));
                }
            }
        }
    }
}

TEST(group_structures, relatedness_is_equivalence) {
    auto labelings = all_labelings(4, 3);
    for (const auto &x : labelings) {
        auto self = are_related(x, x);
        ASSERT_TRUE(self.related);
        for (const auto &y : labelings) {
            auto xy = are_related(x, y);
            auto yx = are_related(y, x);
            ASSERT_EQ(xy.related, yx.related);
            if (!xy.related) {
                continue;
            }
            ASSERT_TRUE(witness_holds(y, x, inverse(*xy.witness)));
            for (const auto &z : labelings) {
                auto yz = are_related(y, z);
                if (yz.related) {
                    ASSERT_TRUE(are_related(x, z).related);
                    ASSERT_TRUE(witness_holds(x, z, compose(*xy.witness, *yz.witness)));
                }
            }
        }
    }
}

TEST(group_structures, classify_pairs_examples) {
    std::vector<LabeledVariable> same{var({"a", "b"}, "p"), var({"a", "b"}, "q"), var({"a", "b"}, "r")};
    auto m = classify_pairs(same);
    for (const auto &row : m.related) {
        for (bool r : row) {
            EXPECT_TRUE(r);
        }
    }
    std::vector<LabeledVariable> different{
        var({"a", "a", "a"}, "p"), var({"b", "c", "c"}, "q"), var({"d", "e", "f"}, "r")};
    auto d = classify_pairs(different);
    for (size_t i = 0; i < 3; i++) {
        for (size_t j = 0; j < 3; j++) {
            EXPECT_EQ(d.related[i][j], i == j);
        }
    }
    EXPECT_EQ(kind_of([] { classify_pairs({var({"a"})}); }), ErrorKind::InvalidConfig);
}

TEST(group_structures, spin_plane_model_witness) {
    for (size_t half : {2u, 4u, 6u, 18u}) {
        auto model = spin_plane_model(half);
        auto act = model.action();
        EXPECT_EQ(act.elements().size(), 2 * half);
        const auto &theta = model.variables[0];
        const auto &eta = model.variables[1];
        EXPECT_EQ(theta.name(), "theta");
        EXPECT_EQ(eta.name(), "eta");
        auto r = are_related(theta, eta, &act);
        ASSERT_TRUE(r.related) << half;
        // eta(phi) = theta(phi - pi/2): a quarter turn of the plane.
        EXPECT_EQ(*r.witness, shift(2 * half, 2 * half - half / 2)) << half;
        EXPECT_TRUE(witness_holds(theta, eta, *r.witness));
        // Sign-of-component variables are not permissible under the rotations.
        EXPECT_FALSE(is_permissible(act, theta).permissible);
    }
}

TEST(group_structures, chsh_pairs_model_classification) {
    auto model = chsh_pairs_model();
    ASSERT_EQ(model.points, 72u);
    ASSERT_EQ(model.variables.size(), 4u);
    auto act = model.action();
    EXPECT_EQ(act.elements().size(), 144u);

    auto free = classify_pairs(model.variables);
    auto restricted = classify_pairs(model.variables, &act);
    // Names C, D, E, F in order.
    for (size_t i = 0; i < 4; i++) {
        for (size_t j = 0; j < 4; j++) {
            EXPECT_EQ(free.related[i][j], free.related[j][i]);
            if (restricted.related[i][j]) {
                EXPECT_TRUE(free.related[i][j]);
                EXPECT_TRUE(witness_holds(model.variables[i], model.variables[j], *restricted.witnesses[i][j]));
            }
        }
    }
    EXPECT_TRUE(restricted.related[0][1]);
    EXPECT_TRUE(restricted.related[0][2]);
    EXPECT_TRUE(restricted.related[1][2]);
    EXPECT_FALSE(free.related[0][3]);
    EXPECT_FALSE(free.related[1][3]);
    EXPECT_FALSE(free.related[2][3]);
}

TEST(group_structures, model_text_round_trip) {
    auto model = chsh_pairs_model(30);
    auto back = parse_model(model_to_text(model));
    EXPECT_EQ(back.points, model.points);
    EXPECT_EQ(back.generators, model.generators);
    EXPECT_EQ(back.generator_names, model.generator_names);
    ASSERT_EQ(back.variables.size(), model.variables.size());
    for (size_t i = 0; i < back.variables.size(); i++) {
        EXPECT_EQ(back.variables[i].labels(), model.variables[i].labels());
        EXPECT_EQ(back.variables[i].name(), model.variables[i].name());
    }
}

TEST(group_structures, parse_model_comments_and_order) {
    auto model = parse_model(
        "# three points\n"
        "points 3\n"
        "generator shift 1 2 0   # cyclic\n"
        "variable theta\n"
        "2 beta\n"
        "0 alpha\n"
        "1 alpha\n"
        "end\n");
    EXPECT_EQ(model.points, 3u);
    EXPECT_EQ(model.generators[0], shift(3));
    EXPECT_EQ(model.variables[0].labels(), (std::vector<std::string>{"alpha", "alpha", "beta"}));
}

TEST(group_structures, parse_model_errors) {
    auto line_of = [](std::string_view text) -> size_t {
        try {
            parse_model(text);
        } catch (const ParseFailure &e) {
            EXPECT_EQ(e.kind(), ErrorKind::ParseError);
            return e.line();
        }
        ADD_FAILURE() << "accepted: " << text;
        return 0;
    };
    EXPECT_EQ(line_of("generator g 0\n"), 1u);
    EXPECT_EQ(line_of("points 2\ngenerator g 0 0\n"), 2u);
    EXPECT_EQ(line_of("points 2\ngenerator g 0\n"), 2u);
    EXPECT_EQ(line_of("points 2\nvariable v\n0 a\nend\n"), 4u);
    EXPECT_EQ(line_of("points 2\nvariable v\n0 a\n0 b\n"), 4u);
    EXPECT_EQ(line_of("points 2\nvariable v\n5 a\n"), 3u);
    EXPECT_EQ(line_of("points 2\nvariable v\n0 a\n1 b\n"), 2u);
    EXPECT_EQ(line_of("points 2\nvariable v\n0 a\n1 b\nend\nvariable v\n0 a\n1 b\nend\n"), 6u);
    EXPECT_EQ(line_of("points 2\nfrobnicate\n"), 2u);
    EXPECT_EQ(line_of("# nothing\n"), 1u);
}

TEST(group_structures, bundled_models_parse) {
    for (const char *name : {"permissibility.model", "square.model", "spin_plane.model", "chsh_pairs.model"}) {
        auto model = load_model(std::string(BELLSIM_MODELS_DIR) + "/" + name);
        EXPECT_GE(model.variables.size(), 1u) << name;
        EXPECT_NO_THROW(model.action()) << name;
    }
}
