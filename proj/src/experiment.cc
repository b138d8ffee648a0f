#include "bellsim/experiment.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "bellsim/error.h"

namespace bellsim {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

template <typename T>
bool parse_number(std::string_view s, T &out) {
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    size_t start = 0;
    while (true) {
        size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

int parse_sign(std::string_view s) {
    s = trim(s);
    if (s == "+1" || s == "1" || s == "+") {
        return +1;
    }
    if (s == "-1" || s == "-") {
        return -1;
    }
    throw BellError(ErrorKind::UnknownSource, "strategy value '" + std::string(s) + "' is not +1 or -1");
}

TrialRecord sample_trial(
    const ExperimentConfig &cfg,
    const std::array<Direction, 2> &alice_dirs,
    const std::array<Direction, 2> &bob_dirs,
    const std::array<double, 2> &alice_angles,
    const std::array<double, 2> &bob_angles,
    const LhvModel *model,
    uint64_t trial) {
    CounterRng setting_rng(cfg.seed, trial, kSettingStream);
    auto alice = setting_rng.uniform() < cfg.p_a ? AliceSetting::A : AliceSetting::APrime;
    auto bob = setting_rng.uniform() < cfg.p_b ? BobSetting::B : BobSetting::BPrime;
    size_t ai = static_cast<size_t>(alice);
    size_t bi = static_cast<size_t>(bob);

    TrialRecord rec{trial, alice, bob, 0, 0};
    if (std::holds_alternative<QuantumSource>(cfg.source)) {
        double angle = bob_angles[bi] - alice_angles[ai];
        CounterRng outcome_rng(cfg.seed, trial, kOutcomeStream);
        double u = outcome_rng.uniform();
        constexpr std::array<std::array<int, 2>, 4> cells{{{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}}};
        double cumulative = 0;
        rec.alice_outcome = -1;
        rec.bob_outcome = -1;
        for (const auto &c : cells) {
            cumulative += joint_outcome_probability(c[0], c[1], angle);
            if (u < cumulative) {
                rec.alice_outcome = static_cast<int8_t>(c[0]);
                rec.bob_outcome = static_cast<int8_t>(c[1]);
                break;
            }
        }
    } else if (model != nullptr) {
        auto o = lhv_sample(*model, alice_dirs[ai], bob_dirs[bi], cfg.seed, trial);
        rec.alice_outcome = static_cast<int8_t>(o.alice);
        rec.bob_outcome = static_cast<int8_t>(o.bob);
    } else {
        const auto &s = std::get<StrategySource>(cfg.source).strategy;
        rec.alice_outcome = static_cast<int8_t>(alice == AliceSetting::A ? s.a : s.a_prime);
        rec.bob_outcome = static_cast<int8_t>(bob == BobSetting::B ? s.b : s.b_prime);
    }
    return rec;
}

std::string format_double(double x) {
    std::ostringstream out;
    out << std::setprecision(17) << x;
    return out.str();
}

}  // namespace

std::string_view label(AliceSetting s) {
    return s == AliceSetting::A ? "a" : "a'";
}

std::string_view label(BobSetting s) {
    return s == BobSetting::B ? "b" : "b'";
}

Source parse_source(std::string_view text) {
    text = trim(text);
    if (text == "quantum") {
        return QuantumSource{};
    }
    if (text.starts_with("lhv:")) {
        std::string name(trim(text.substr(4)));
        lhv_model_by_name(name);
        return LhvSource{name};
    }
    if (text.starts_with("strategy:")) {
        auto parts = split(text.substr(9), ',');
        if (parts.size() != 4) {
            throw BellError(ErrorKind::UnknownSource, "strategy needs four comma-separated signs");
        }
        return StrategySource{
            DeterministicStrategy{parse_sign(parts[0]), parse_sign(parts[1]), parse_sign(parts[2]), parse_sign(parts[3])}};
    }
    throw BellError(
        ErrorKind::UnknownSource,
        "unknown source '" + std::string(text) + "' (expected quantum, lhv:<model> or strategy:<4 signs>)");
}

std::string source_tag(const Source &source) {
    if (std::holds_alternative<QuantumSource>(source)) {
        return "quantum";
    }
    if (const auto *lhv = std::get_if<LhvSource>(&source)) {
        return "lhv:" + lhv->model;
    }
    return "strategy:" + std::get<StrategySource>(source).strategy.str();
}

void ExperimentConfig::validate() const {
    if (n < 1) {
        throw BellError(ErrorKind::InvalidConfig, "n must be at least 1");
    }
    if (!(p_a > 0 && p_a < 1)) {
        throw BellError(ErrorKind::InvalidConfig, "p_a must lie strictly inside (0, 1)");
    }
    if (!(p_b > 0 && p_b < 1)) {
        throw BellError(ErrorKind::InvalidConfig, "p_b must lie strictly inside (0, 1)");
    }
    if (const auto *lhv = std::get_if<LhvSource>(&source)) {
        lhv_model_by_name(lhv->model);
    }
    if (const auto *strategy = std::get_if<StrategySource>(&source)) {
        strategy->strategy.validate();
    }
}

std::string ExperimentConfig::to_text() const {
    std::ostringstream out;
    out << "n = " << n << "\n";
    out << "seed = " << seed << "\n";
    out << "source = " << source_tag(source) << "\n";
    out << "a = " << format_double(radians_to_degrees(settings.a())) << "\n";
    out << "a_prime = " << format_double(radians_to_degrees(settings.a_prime())) << "\n";
    out << "b = " << format_double(radians_to_degrees(settings.b())) << "\n";
    out << "b_prime = " << format_double(radians_to_degrees(settings.b_prime())) << "\n";
    out << "p_a = " << format_double(p_a) << "\n";
    out << "p_b = " << format_double(p_b) << "\n";
    return out.str();
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    std::array<double, 4> degrees{0, 90, 225, 135};
    bool have_n = false;
    size_t line_no = 0;
    for (auto raw : split(text, '\n')) {
        line_no++;
        auto line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseFailure(ErrorKind::ParseError, line_no, "expected 'key = value'");
        }
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        auto bad_value = [&]() {
            return ParseFailure(
                ErrorKind::ParseError, line_no, "bad value '" + std::string(value) + "' for key '" + std::string(key) + "'");
        };
        auto read_double = [&](double &out) {
            if (!parse_number(value, out) || !std::isfinite(out)) {
                throw bad_value();
            }
        };
        if (key == "n") {
            if (!parse_number(value, cfg.n)) {
                throw bad_value();
            }
            have_n = true;
        } else if (key == "seed") {
            if (!parse_number(value, cfg.seed)) {
                throw bad_value();
            }
        } else if (key == "source") {
            try {
                cfg.source = parse_source(value);
            } catch (const BellError &e) {
                throw ParseFailure(e.kind(), line_no, e.what());
            }
        } else if (key == "a") {
            read_double(degrees[0]);
        } else if (key == "a_prime") {
            read_double(degrees[1]);
        } else if (key == "b") {
            read_double(degrees[2]);
        } else if (key == "b_prime") {
            read_double(degrees[3]);
        } else if (key == "p_a") {
            read_double(cfg.p_a);
        } else if (key == "p_b") {
            read_double(cfg.p_b);
        } else {
            throw ParseFailure(ErrorKind::ParseError, line_no, "unknown key '" + std::string(key) + "'");
        }
    }
    if (!have_n) {
        throw BellError(ErrorKind::InvalidConfig, "missing required key 'n'");
    }
    cfg.settings = AngleSettings::from_degrees(degrees[0], degrees[1], degrees[2], degrees[3]);
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw BellError(ErrorKind::Io, "cannot open config " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig &cfg, unsigned threads) {
    cfg.validate();
    const std::array<double, 2> alice_angles{cfg.settings.a(), cfg.settings.a_prime()};
    const std::array<double, 2> bob_angles{cfg.settings.b(), cfg.settings.b_prime()};
    const std::array<Direction, 2> alice_dirs{Direction::planar(alice_angles[0]), Direction::planar(alice_angles[1])};
    const std::array<Direction, 2> bob_dirs{Direction::planar(bob_angles[0]), Direction::planar(bob_angles[1])};
    std::optional<LhvModel> model;
    if (const auto *lhv = std::get_if<LhvSource>(&cfg.source)) {
        model = lhv_model_by_name(lhv->model);
    }
    const LhvModel *model_ptr = model ? &*model : nullptr;

    std::vector<TrialRecord> out(cfg.n);
    auto fill = [&](uint64_t begin, uint64_t end) {
        for (uint64_t i = begin; i < end; i++) {
            out[i] = sample_trial(cfg, alice_dirs, bob_dirs, alice_angles, bob_angles, model_ptr, i);
        }
    };

    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    uint64_t workers = std::min<uint64_t>(threads, std::max<uint64_t>(1, cfg.n / 65536));
    if (workers <= 1) {
        fill(0, cfg.n);
        return out;
    }
    std::vector<std::thread> pool;
    uint64_t chunk = (cfg.n + workers - 1) / workers;
    for (uint64_t w = 0; w < workers; w++) {
        uint64_t begin = w * chunk;
        uint64_t end = std::min(cfg.n, begin + chunk);
        if (begin < end) {
            pool.emplace_back(fill, begin, end);
        }
    }
    for (auto &t : pool) {
        t.join();
    }
    return out;
}

size_t write_trials(const std::vector<TrialRecord> &records, std::ostream &out) {
    std::string buffer;
    buffer.reserve(32 * records.size() + kTrialHeader.size() + 1);
    buffer += kTrialHeader;
    buffer += '\n';
    for (const auto &r : records) {
        buffer += std::to_string(r.trial);
        buffer += ',';
        buffer += label(r.alice_setting);
        buffer += ',';
        buffer += label(r.bob_setting);
        buffer += ',';
        buffer += r.alice_outcome > 0 ? "1" : "-1";
        buffer += ',';
        buffer += r.bob_outcome > 0 ? "1" : "-1";
        buffer += '\n';
    }
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    if (!out) {
        throw BellError(ErrorKind::Io, "failed writing trial records");
    }
    return buffer.size();
}

size_t write_trials(const std::vector<TrialRecord> &records, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw BellError(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    }
    return write_trials(records, out);
}

std::vector<TrialRecord> read_trials(std::istream &in) {
    std::vector<TrialRecord> out;
    std::string line;
    size_t line_no = 0;
    if (!std::getline(in, line)) {
        throw ParseFailure(ErrorKind::ParseError, 1, "missing header");
    }
    line_no = 1;
    if (trim(line) != kTrialHeader) {
        throw ParseFailure(ErrorKind::ParseError, 1, "header must be '" + std::string(kTrialHeader) + "'");
    }
    while (std::getline(in, line)) {
        line_no++;
        auto view = trim(line);
        auto fields = split(view, ',');
        if (fields.size() != 5) {
            throw ParseFailure(
                ErrorKind::ParseError, line_no, "expected 5 fields, found " + std::to_string(fields.size()));
        }
        TrialRecord rec{};
        if (!parse_number(fields[0], rec.trial) || fields[0].starts_with('+')) {
            throw ParseFailure(ErrorKind::ParseError, line_no, "bad trial index '" + std::string(fields[0]) + "'");
        }
        if (fields[1] == "a") {
            rec.alice_setting = AliceSetting::A;
        } else if (fields[1] == "a'") {
            rec.alice_setting = AliceSetting::APrime;
        } else {
            throw ParseFailure(ErrorKind::ParseError, line_no, "bad alice_setting '" + std::string(fields[1]) + "'");
        }
        if (fields[2] == "b") {
            rec.bob_setting = BobSetting::B;
        } else if (fields[2] == "b'") {
            rec.bob_setting = BobSetting::BPrime;
        } else {
            throw ParseFailure(ErrorKind::ParseError, line_no, "bad bob_setting '" + std::string(fields[2]) + "'");
        }
        for (int k = 0; k < 2; k++) {
            auto field = fields[3 + k];
            int v = 0;
            if (!parse_number(field, v)) {
                throw ParseFailure(ErrorKind::ParseError, line_no, "outcome '" + std::string(field) + "' is not an integer");
            }
            if (v != 1 && v != -1) {
                throw ParseFailure(ErrorKind::BadOutcome, line_no, "outcome " + std::to_string(v) + " is not -1 or 1");
            }
            (k == 0 ? rec.alice_outcome : rec.bob_outcome) = static_cast<int8_t>(v);
        }
        out.push_back(rec);
    }
    return out;
}

std::vector<TrialRecord> read_trials(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw BellError(ErrorKind::Io, "cannot open " + path.string());
    }
    return read_trials(in);
}

}  // namespace bellsim
