#include "bellsim/lhv.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bellsim/error.h"

namespace bellsim {

void DeterministicStrategy::validate() const {
    for (int v : {a, a_prime, b, b_prime}) {
        if (v != 1 && v != -1) {
            throw BellError(ErrorKind::BadOutcome, "strategy value " + std::to_string(v) + " is not +1 or -1");
        }
    }
}

std::string DeterministicStrategy::str() const {
    auto s = [](int v) {
        return v > 0 ? std::string("+1") : std::string("-1");
    };
    return s(a) + "," + s(a_prime) + "," + s(b) + "," + s(b_prime);
}

int chsh_of_strategy(const DeterministicStrategy &s) {
    return s.a * s.b + s.a_prime * s.b + s.a * s.b_prime - s.a_prime * s.b_prime;
}

StrategyBound enumerate_strategy_bound() {
    StrategyBound out{};
    out.max_value = -5;
    out.min_value = 5;
    for (int mask = 0; mask < 16; mask++) {
        auto bit = [&](int k) {
            return (mask >> (3 - k)) & 1 ? -1 : +1;
        };
        DeterministicStrategy s{bit(0), bit(1), bit(2), bit(3)};
        int v = chsh_of_strategy(s);
        out.all.push_back(s);
        out.values.push_back(v);
        out.max_value = std::max(out.max_value, v);
        out.min_value = std::min(out.min_value, v);
    }
    for (size_t k = 0; k < out.all.size(); k++) {
        if (out.values[k] == out.max_value) {
            out.argmax.push_back(out.all[k]);
        }
    }
    return out;
}

Vec3 uniform_unit_vector(CounterRng &rng) {
    double z = 2 * rng.uniform() - 1;
    double phi = 2 * std::numbers::pi * rng.uniform();
    double r = std::sqrt(std::max(0.0, 1 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

int sign_with_tie(double x) {
    return x < 0 ? -1 : +1;
}

LhvModel default_lhv_model() {
    return LhvModel{
        "default",
        uniform_unit_vector,
        [](const Direction &d, const Vec3 &lambda) {
            return sign_with_tie(dot(d.vec(), lambda));
        },
        [](const Direction &d, const Vec3 &lambda) {
            return -sign_with_tie(dot(d.vec(), lambda));
        },
    };
}

LhvModel constant_lhv_model(int alice, int bob) {
    DeterministicStrategy{alice, alice, bob, bob}.validate();
    return LhvModel{
        "constant",
        uniform_unit_vector,
        [alice](const Direction &, const Vec3 &) {
            return alice;
        },
        [bob](const Direction &, const Vec3 &) {
            return bob;
        },
    };
}

LhvModel lhv_model_by_name(const std::string &name) {
    if (name == "default") {
        return default_lhv_model();
    }
    if (name == "constant") {
        return constant_lhv_model(+1, +1);
    }
    throw BellError(ErrorKind::UnknownSource, "unknown LHV model '" + name + "' (known: default, constant)");
}

OutcomePair lhv_sample(const LhvModel &m, const Direction &a, const Direction &b, uint64_t seed, uint64_t trial_index) {
    CounterRng rng(seed, trial_index, kOutcomeStream);
    Vec3 lambda = m.lambda_sampler(rng);
    return {m.response_a(a, lambda), m.response_b(b, lambda)};
}

ChshEstimate lhv_chsh_mc(const LhvModel &m, const AngleSettings &s, uint64_t n, uint64_t seed) {
    if (n < kMinChshSamples) {
        throw BellError(
            ErrorKind::TooFewSamples,
            "n = " + std::to_string(n) + " is below the minimum of " + std::to_string(kMinChshSamples));
    }
    const uint64_t per_cell = n / 4;
    const std::array<Direction, 2> alice{Direction::planar(s.a()), Direction::planar(s.a_prime())};
    const std::array<Direction, 2> bob{Direction::planar(s.b()), Direction::planar(s.b_prime())};
    // Cell order l1..l4: (a,b), (a',b), (a,b'), (a',b').
    constexpr std::array<std::array<int, 2>, 4> cells{{{0, 0}, {1, 0}, {0, 1}, {1, 1}}};

    ChshEstimate out{};
    double variance = 0;
    for (size_t c = 0; c < 4; c++) {
        int64_t sum = 0;
        for (uint64_t j = 0; j < per_cell; j++) {
            auto o = lhv_sample(m, alice[cells[c][0]], bob[cells[c][1]], seed, c * per_cell + j);
            sum += o.alice * o.bob;
        }
        double mean = static_cast<double>(sum) / static_cast<double>(per_cell);
        out.correlations[c] = mean;
        out.counts[c] = per_cell;
        variance += (1 - mean * mean) / static_cast<double>(per_cell);
    }
    out.s = out.correlations[0] + out.correlations[1] + out.correlations[2] - out.correlations[3];
    out.standard_error = std::sqrt(variance);
    return out;
}

}  // namespace bellsim
