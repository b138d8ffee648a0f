#ifndef BELLSIM_EXPERIMENT_H
#define BELLSIM_EXPERIMENT_H

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bellsim/born_rule.h"
#include "bellsim/lhv.h"

namespace bellsim {

enum class AliceSetting : uint8_t { A, APrime };
enum class BobSetting : uint8_t { B, BPrime };

std::string_view label(AliceSetting s);
std::string_view label(BobSetting s);

struct TrialRecord {
    uint64_t trial;
    AliceSetting alice_setting;
    BobSetting bob_setting;
    int8_t alice_outcome;
    int8_t bob_outcome;

    bool operator==(const TrialRecord &) const = default;
};

struct QuantumSource {
    bool operator==(const QuantumSource &) const = default;
};
struct LhvSource {
    std::string model;
    bool operator==(const LhvSource &) const = default;
};
struct StrategySource {
    DeterministicStrategy strategy;
    bool operator==(const StrategySource &) const = default;
};
using Source = std::variant<QuantumSource, LhvSource, StrategySource>;

/// Parses "quantum", "lhv:<model>" or "strategy:<A>,<A'>,<B>,<B'>" (signs +1/-1).
/// Throws UnknownSource.
Source parse_source(std::string_view text);
std::string source_tag(const Source &source);

struct ExperimentConfig {
    uint64_t n = 0;
    AngleSettings settings = AngleSettings::tsirelson();
    Source source = QuantumSource{};
    uint64_t seed = 0;
    /// Probability that Alice measures a (rather than a').
    double p_a = 0.5;
    /// Probability that Bob measures b (rather than b').
    double p_b = 0.5;

    /// Throws InvalidConfig on n = 0 or probabilities outside (0, 1).
    void validate() const;
    /// Flat key/value text accepted by parse_config (angles in degrees).
    std::string to_text() const;
};

/// Flat `key = value` lines, `#` comments. Keys: n, seed, source, a,
/// a_prime, b, b_prime (degrees), p_a, p_b. Throws ParseFailure.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path &path);

/// n records in trial order. Settings come from each trial's setting
/// stream, outcomes from its outcome stream, so any partition of the index
/// range gives the same records. `threads` = 0 picks the hardware count.
std::vector<TrialRecord> run_experiment(const ExperimentConfig &cfg, unsigned threads = 0);

inline constexpr std::string_view kTrialHeader = "trial,alice_setting,bob_setting,alice_outcome,bob_outcome";

/// Writes the CSV trial format; returns the number of bytes written.
size_t write_trials(const std::vector<TrialRecord> &records, std::ostream &out);
size_t write_trials(const std::vector<TrialRecord> &records, const std::filesystem::path &path);
/// Throws ParseFailure with kind ParseError or BadOutcome.
std::vector<TrialRecord> read_trials(std::istream &in);
std::vector<TrialRecord> read_trials(const std::filesystem::path &path);

}  // namespace bellsim

#endif
