#ifndef BELLSIM_LHV_H
#define BELLSIM_LHV_H

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bellsim/born_rule.h"
#include "bellsim/quantum_spin.h"
#include "bellsim/rng.h"

namespace bellsim {

/// Predetermined outcomes for all four settings.
struct DeterministicStrategy {
    int a;
    int a_prime;
    int b;
    int b_prime;

    /// Throws BadOutcome unless every value is +-1.
    void validate() const;
    std::string str() const;
    bool operator==(const DeterministicStrategy &) const = default;
};

/// A B + A' B + A B' - A' B'; always +-2.
int chsh_of_strategy(const DeterministicStrategy &s);

struct StrategyBound {
    int max_value;
    int min_value;
    std::vector<DeterministicStrategy> argmax;
    /// All 16 strategies in enumeration order.
    std::vector<DeterministicStrategy> all;
    std::vector<int> values;
};

/// Exhaustive evaluation of all 16 deterministic strategies.
StrategyBound enumerate_strategy_bound();

/// Local hidden-variable model. Responses see only their own setting and
/// lambda; that signature is the locality constraint.
struct LhvModel {
    std::string name;
    std::function<Vec3(CounterRng &)> lambda_sampler;
    std::function<int(const Direction &, const Vec3 &)> response_a;
    std::function<int(const Direction &, const Vec3 &)> response_b;
};

/// Uniform point on the unit sphere.
Vec3 uniform_unit_vector(CounterRng &rng);

/// sign(x) with sign(0) = +1.
int sign_with_tie(double x);

/// lambda uniform on the sphere; A = sign(a.lambda), B = -sign(b.lambda).
LhvModel default_lhv_model();
/// Responses ignore lambda and the setting.
LhvModel constant_lhv_model(int alice, int bob);
/// Known model names: "default", "constant" (both responses +1).
LhvModel lhv_model_by_name(const std::string &name);

struct OutcomePair {
    int alice;
    int bob;
    bool operator==(const OutcomePair &) const = default;
};

/// Draws lambda from the (seed, trial_index) outcome stream and evaluates
/// both responses.
OutcomePair lhv_sample(const LhvModel &m, const Direction &a, const Direction &b, uint64_t seed, uint64_t trial_index);

struct ChshEstimate {
    double s;
    double standard_error;
    /// l1..l4 = E(a,b), E(a',b), E(a,b'), E(a',b').
    std::array<double, 4> correlations;
    std::array<uint64_t, 4> counts;
};

inline constexpr uint64_t kMinChshSamples = 1000;

/// n/4 samples per setting pair; SE = sqrt(sum (1 - m_i^2) / n_i).
/// Throws TooFewSamples for n < kMinChshSamples.
ChshEstimate lhv_chsh_mc(const LhvModel &m, const AngleSettings &s, uint64_t n, uint64_t seed);

}  // namespace bellsim

#endif
