#ifndef BELLSIM_ANALYSIS_H
#define BELLSIM_ANALYSIS_H

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bellsim/experiment.h"

namespace bellsim {

/// Correlation estimate for one (Alice setting, Bob setting) cell.
/// `mean` and `standard_error` are empty when the cell has no trials.
struct ConditionalEstimate {
    AliceSetting alice = AliceSetting::A;
    BobSetting bob = BobSetting::B;
    uint64_t count = 0;
    /// Exact integer sum of alice_outcome * bob_outcome over the cell.
    int64_t product_sum = 0;
    std::optional<double> mean;
    /// sqrt((1 - mean^2) / count).
    std::optional<double> standard_error;

    bool defined() const {
        return count > 0;
    }
    /// "l1".."l4".
    std::string name() const;

    bool operator==(const ConditionalEstimate &) const = default;
};

/// l1..l4 = cells (a,b), (a',b), (a,b'), (a',b').
using CellEstimates = std::array<ConditionalEstimate, 4>;

/// Per-cell means of A*B, conditioned on the setting labels.
CellEstimates estimate_correlations(std::span<const TrialRecord> trials);

struct ChshStatistic {
    double s;
    double standard_error;
};

/// S = l1 + l2 + l3 - l4; SE = sqrt(sum SE_i^2) (cells independent because
/// settings are independent per trial). Throws UndefinedCell.
ChshStatistic chsh_statistic(const CellEstimates &estimates);

/// (S - 2) / SE; 0 when S == 2 and SE == 0, +-inf when SE == 0 otherwise.
double z_against_two(const ChshStatistic &stat);

/// Marginal difference for one party at one fixed local setting across the
/// two remote settings: mean(first remote) - mean(second remote).
struct NoSignallingEntry {
    std::string party;
    std::string local_setting;
    std::string remote_first;
    std::string remote_second;
    uint64_t count_first = 0;
    uint64_t count_second = 0;
    std::optional<double> difference;
    /// Two-sample z with the pooled variance 1 - m^2 under equal means.
    std::optional<double> z;
};

/// Four entries, in order alice/a, alice/a', bob/b, bob/b'.
std::vector<NoSignallingEntry> no_signalling_check(std::span<const TrialRecord> trials);

struct ReportMetadata {
    std::optional<std::string> source;
    std::optional<uint64_t> seed;
    std::optional<AngleSettings> settings;
    std::optional<std::string> config_hash;
    std::optional<std::string> tool_version;
};

struct AnalysisReport {
    uint64_t n = 0;
    CellEstimates estimates;
    /// Empty when any cell is undefined; `undefined_reason` says which.
    std::optional<ChshStatistic> chsh;
    std::optional<double> z_against_2;
    std::string undefined_reason;
    std::vector<NoSignallingEntry> no_signalling;
    ReportMetadata metadata;

    /// Aligned human-readable table.
    std::string to_text() const;
    /// Flat `key=value` lines: l1.mean, l1.count, l1.se, ..., S, S.se, z2,
    /// ns.alice.a.diff, ns.alice.a.z, ...
    std::string to_kv() const;
};

AnalysisReport evaluate_report(std::span<const TrialRecord> trials, const ReportMetadata &metadata = {});

}  // namespace bellsim

#endif
