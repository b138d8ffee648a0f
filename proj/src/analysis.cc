#include "bellsim/analysis.h"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "bellsim/error.h"

namespace bellsim {

namespace {

size_t cell_index(AliceSetting a, BobSetting b) {
    return static_cast<size_t>(a) + 2 * static_cast<size_t>(b);
}

std::string kv_number(double x) {
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    std::ostringstream out;
    out << std::setprecision(17) << x;
    return out.str();
}

std::string kv_optional(const std::optional<double> &x) {
    return x ? kv_number(*x) : "undefined";
}

std::string text_number(const std::optional<double> &x, int precision = 6) {
    if (!x) {
        return "undefined";
    }
    if (std::isinf(*x)) {
        return *x > 0 ? "inf" : "-inf";
    }
    std::ostringstream out;
    out << std::fixed << std::setprecision(precision) << *x;
    return out.str();
}

struct MarginalAccumulator {
    uint64_t count = 0;
    int64_t sum = 0;
};

}  // namespace

std::string ConditionalEstimate::name() const {
    return "l" + std::to_string(cell_index(alice, bob) + 1);
}

CellEstimates estimate_correlations(std::span<const TrialRecord> trials) {
    CellEstimates out;
    for (size_t c = 0; c < 4; c++) {
        out[c].alice = c % 2 == 0 ? AliceSetting::A : AliceSetting::APrime;
        out[c].bob = c < 2 ? BobSetting::B : BobSetting::BPrime;
    }
    for (const auto &t : trials) {
        auto &cell = out[cell_index(t.alice_setting, t.bob_setting)];
        cell.count++;
        cell.product_sum += t.alice_outcome * t.bob_outcome;
    }
    for (auto &cell : out) {
        if (cell.count == 0) {
            continue;
        }
        double mean = static_cast<double>(cell.product_sum) / static_cast<double>(cell.count);
        cell.mean = mean;
        cell.standard_error = std::sqrt(std::max(0.0, 1 - mean * mean) / static_cast<double>(cell.count));
    }
    return out;
}

ChshStatistic chsh_statistic(const CellEstimates &e) {
    for (const auto &cell : e) {
        if (!cell.defined()) {
            throw BellError(
                ErrorKind::UndefinedCell,
                "cell " + cell.name() + " (" + std::string(label(cell.alice)) + "," + std::string(label(cell.bob)) +
                    ") has no trials");
        }
    }
    double s = *e[0].mean + *e[1].mean + *e[2].mean - *e[3].mean;
    double var = 0;
    for (const auto &cell : e) {
        var += *cell.standard_error * *cell.standard_error;
    }
    return {s, std::sqrt(var)};
}

double z_against_two(const ChshStatistic &stat) {
    double diff = stat.s - 2;
    if (stat.standard_error == 0) {
        if (diff == 0) {
            return 0;
        }
        return diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    }
    return diff / stat.standard_error;
}

std::vector<NoSignallingEntry> no_signalling_check(std::span<const TrialRecord> trials) {
    // alice[local][remote], bob[local][remote]
    MarginalAccumulator alice[2][2];
    MarginalAccumulator bob[2][2];
    for (const auto &t : trials) {
        auto a = static_cast<size_t>(t.alice_setting);
        auto b = static_cast<size_t>(t.bob_setting);
        alice[a][b].count++;
        alice[a][b].sum += t.alice_outcome;
        bob[b][a].count++;
        bob[b][a].sum += t.bob_outcome;
    }
    auto entry = [](std::string party,
                    std::string local,
                    std::string remote_first,
                    std::string remote_second,
                    const MarginalAccumulator &first,
                    const MarginalAccumulator &second) {
        NoSignallingEntry e;
        e.party = std::move(party);
        e.local_setting = std::move(local);
        e.remote_first = std::move(remote_first);
        e.remote_second = std::move(remote_second);
        e.count_first = first.count;
        e.count_second = second.count;
        if (first.count == 0 || second.count == 0) {
            return e;
        }
        double n1 = static_cast<double>(first.count);
        double n2 = static_cast<double>(second.count);
        double m1 = static_cast<double>(first.sum) / n1;
        double m2 = static_cast<double>(second.sum) / n2;
        double pooled = static_cast<double>(first.sum + second.sum) / (n1 + n2);
        double se = std::sqrt(std::max(0.0, 1 - pooled * pooled) * (1 / n1 + 1 / n2));
        e.difference = m1 - m2;
        if (se > 0) {
            e.z = (m1 - m2) / se;
        } else {
            // Both groups constant and equal.
            e.z = 0.0;
        }
        return e;
    };
    return {
        entry("alice", "a", "b", "b'", alice[0][0], alice[0][1]),
        entry("alice", "a'", "b", "b'", alice[1][0], alice[1][1]),
        entry("bob", "b", "a", "a'", bob[0][0], bob[0][1]),
        entry("bob", "b'", "a", "a'", bob[1][0], bob[1][1]),
    };
}

AnalysisReport evaluate_report(std::span<const TrialRecord> trials, const ReportMetadata &metadata) {
    AnalysisReport r;
    r.n = trials.size();
    r.metadata = metadata;
    r.estimates = estimate_correlations(trials);
    try {
        r.chsh = chsh_statistic(r.estimates);
        r.z_against_2 = z_against_two(*r.chsh);
    } catch (const BellError &e) {
        if (e.kind() != ErrorKind::UndefinedCell) {
            throw;
        }
        r.undefined_reason = e.what();
    }
    r.no_signalling = no_signalling_check(trials);
    return r;
}

std::string AnalysisReport::to_text() const {
    std::ostringstream out;
    out << "CHSH analysis, conditioned on setting labels\n";
    out << "  trials: " << n << "\n";
    if (metadata.source) {
        out << "  source: " << *metadata.source << "\n";
    }
    if (metadata.seed) {
        out << "  seed: " << *metadata.seed << "\n";
    }
    if (metadata.settings) {
        const auto &s = *metadata.settings;
        out << std::setprecision(6) << "  settings (deg): a=" << radians_to_degrees(s.a())
            << " a'=" << radians_to_degrees(s.a_prime()) << " b=" << radians_to_degrees(s.b())
            << " b'=" << radians_to_degrees(s.b_prime()) << "\n";
    }
    if (metadata.config_hash) {
        out << "  config hash: " << *metadata.config_hash << "\n";
    }
    if (metadata.tool_version) {
        out << "  tool version: " << *metadata.tool_version << "\n";
    }
    out << "\n";
    out << "  cell  alice  bob     count        mean          se\n";
    for (const auto &c : estimates) {
        out << "  " << std::left << std::setw(4) << c.name() << "  " << std::setw(5) << label(c.alice) << "  "
            << std::setw(3) << label(c.bob) << std::right << std::setw(10) << c.count << std::setw(12)
            << text_number(c.mean) << std::setw(12) << text_number(c.standard_error) << "\n";
    }
    out << "\n";
    if (chsh) {
        out << "  S = l1 + l2 + l3 - l4 = " << text_number(chsh->s) << "  (se " << text_number(chsh->standard_error)
            << ")\n";
        out << "  z against S = 2: " << text_number(z_against_2, 3)
            << "  (one-sided z score; se assumes independent cells)\n";
    } else {
        out << "  S undefined: " << undefined_reason << "\n";
    }
    out << "\n  no-signalling (marginal mean difference across remote settings)\n";
    out << "  party  local  remotes        diff           z\n";
    for (const auto &e : no_signalling) {
        out << "  " << std::left << std::setw(5) << e.party << "  " << std::setw(5) << e.local_setting << "  "
            << std::setw(7) << (e.remote_first + "|" + e.remote_second) << std::right << std::setw(12)
            << text_number(e.difference) << std::setw(12) << text_number(e.z, 3) << "\n";
    }
    return out.str();
}

std::string AnalysisReport::to_kv() const {
    std::ostringstream out;
    out << "n=" << n << "\n";
    if (metadata.source) {
        out << "source=" << *metadata.source << "\n";
    }
    if (metadata.seed) {
        out << "seed=" << *metadata.seed << "\n";
    }
    if (metadata.settings) {
        out << "settings.a=" << kv_number(radians_to_degrees(metadata.settings->a())) << "\n";
        out << "settings.a'=" << kv_number(radians_to_degrees(metadata.settings->a_prime())) << "\n";
        out << "settings.b=" << kv_number(radians_to_degrees(metadata.settings->b())) << "\n";
        out << "settings.b'=" << kv_number(radians_to_degrees(metadata.settings->b_prime())) << "\n";
    }
    if (metadata.config_hash) {
        out << "config.hash=" << *metadata.config_hash << "\n";
    }
    if (metadata.tool_version) {
        out << "tool.version=" << *metadata.tool_version << "\n";
    }
    for (const auto &c : estimates) {
        out << c.name() << ".mean=" << kv_optional(c.mean) << "\n";
        out << c.name() << ".count=" << c.count << "\n";
        out << c.name() << ".se=" << kv_optional(c.standard_error) << "\n";
    }
    if (chsh) {
        out << "S=" << kv_number(chsh->s) << "\n";
        out << "S.se=" << kv_number(chsh->standard_error) << "\n";
        out << "z2=" << kv_number(*z_against_2) << "\n";
    } else {
        out << "S.status=undefined\n";
    }
    for (const auto &e : no_signalling) {
        std::string prefix = "ns." + e.party + "." + e.local_setting;
        out << prefix << ".diff=" << kv_optional(e.difference) << "\n";
        out << prefix << ".z=" << kv_optional(e.z) << "\n";
    }
    return out.str();
}

}  // namespace bellsim
