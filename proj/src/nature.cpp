#include "calib/nature.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "calib/errors.hpp"

namespace calib {

namespace {

void check_distribution(const Distribution& d, int outcomes, const char* what) {
    if (d.outcomes() != outcomes) throw ConfigError(std::string(what) + ": expected " + std::to_string(outcomes) + " probabilities");
}

// Whole file with comments stripped and commas turned into spaces.
std::string read_tokens(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::string out;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        out += line;
        out += '\n';
    }
    return out;
}

std::vector<double> parse_numbers(const std::string& text, const std::string& context) {
    std::vector<double> values;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size()) throw ConfigError(context + ": not a number: '" + token + "'");
        values.push_back(v);
    }
    return values;
}

int as_outcome(double v, int outcomes, const std::string& context) {
    if (v != std::floor(v) || v < 0 || v >= outcomes)
        throw ConfigError(context + ": outcome index out of range: " + std::to_string(v));
    return static_cast<int>(v);
}

}  // namespace

Nature::Nature(NatureSpec spec, int outcomes, std::uint64_t seed)
    : spec_(std::move(spec)), outcomes_(outcomes), rng_(seed, 2) {
    if (outcomes < 2) throw ConfigError("nature needs at least 2 outcomes");
    if (const auto* iid = std::get_if<IidSpec>(&spec_)) check_distribution(iid->q, outcomes, "iid");
    if (const auto* markov = std::get_if<MarkovSpec>(&spec_)) {
        if (markov->rows.size() != static_cast<std::size_t>(outcomes))
            throw ConfigError("markov: transition matrix must have one row per outcome");
        for (const auto& row : markov->rows) check_distribution(row, outcomes, "markov row");
        if (markov->start < 0 || markov->start >= outcomes) throw ConfigError("markov: start outcome out of range");
    }
    if (const auto* seq = std::get_if<SequenceSpec>(&spec_)) {
        if (seq->outcomes.empty()) throw ConfigError("sequence nature needs at least one outcome");
        for (int a : seq->outcomes)
            if (a < 0 || a >= outcomes) throw ConfigError("sequence: outcome out of range");
    }
}

int Nature::sample(const Distribution& q) {
    const double u = rng_.next_unit();
    double cumulative = 0.0;
    int last_positive = 0;
    for (int a = 0; a < q.outcomes(); ++a) {
        if (q[a] <= 0.0) continue;
        cumulative += q[a];
        last_positive = a;
        if (u < cumulative) return a;
    }
    return last_positive;
}

int Nature::greedy_outcome(std::span<const Observation> history) {
    if (history.size() < absorbed_) {
        bins_.clear();
        absorbed_ = 0;
    }
    for (; absorbed_ < history.size(); ++absorbed_) {
        const auto& obs = history[absorbed_];
        const auto probs = obs.forecast.probs();
        auto [it, inserted] = bins_.try_emplace(std::vector<double>(probs.begin(), probs.end()),
                                                std::vector<double>(probs.size(), 0.0));
        auto& sum = it->second;
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += probs[i];
        sum[static_cast<std::size_t>(obs.outcome)] -= 1.0;
    }
    if (history.empty()) return 0;

    const auto probs = history.back().forecast.probs();
    const auto& sum = bins_.at(std::vector<double>(probs.begin(), probs.end()));
    int best = 0;
    double best_norm = -1.0;
    for (int a = 0; a < outcomes_; ++a) {
        double norm = 0.0;
        for (int i = 0; i < outcomes_; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            norm += std::abs(sum[idx] + probs[idx] - (i == a ? 1.0 : 0.0));
        }
        if (norm > best_norm + 1e-12) {
            best = a;
            best_norm = norm;
        }
    }
    return best;
}

int Nature::next_outcome(std::span<const Observation> history, const Distribution* current_forecast) {
    if (!history.empty()) {
        const auto& last = history.back();
        if (last.outcome < 0 || last.outcome >= outcomes_ || last.forecast.outcomes() != outcomes_)
            throw ParameterError("nature: history does not match the outcome count");
    }

    if (const auto* iid = std::get_if<IidSpec>(&spec_)) return sample(iid->q);
    if (const auto* markov = std::get_if<MarkovSpec>(&spec_)) {
        if (history.empty()) return markov->start;
        return sample(markov->rows[static_cast<std::size_t>(history.back().outcome)]);
    }
    if (const auto* seq = std::get_if<SequenceSpec>(&spec_)) return seq->outcomes[history.size() % seq->outcomes.size()];
    if (std::holds_alternative<ContrarianSpec>(spec_)) {
        if (current_forecast == nullptr)
            throw ConfigError("contrarian nature needs the current forecast; pair it with a deterministic forecaster");
        if (current_forecast->outcomes() != outcomes_) throw ParameterError("contrarian: forecast dimension mismatch");
        const auto probs = current_forecast->probs();
        return static_cast<int>(std::min_element(probs.begin(), probs.end()) - probs.begin());
    }
    return greedy_outcome(history);
}

NatureSpec parse_nature_spec(const std::string& text, int outcomes) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "contrarian" && arg.empty()) return ContrarianSpec{};
    if (kind == "greedy" && arg.empty()) return GreedySpec{};
    if (kind == "iid" && !arg.empty()) {
        std::string spaced = arg;
        std::replace(spaced.begin(), spaced.end(), ',', ' ');
        auto probs = parse_numbers(spaced, "iid");
        if (probs.size() != static_cast<std::size_t>(outcomes))
            throw ConfigError("iid: expected " + std::to_string(outcomes) + " probabilities");
        try {
            return IidSpec{Distribution(std::move(probs))};
        } catch (const ParameterError& e) {
            throw ConfigError(std::string("iid: ") + e.what());
        }
    }
    if (kind == "seq" && !arg.empty()) return SequenceSpec{read_sequence_file(arg, outcomes)};
    if (kind == "markov" && !arg.empty()) return read_markov_file(arg, outcomes);
    throw ConfigError("unrecognized nature spec '" + text + "' (expected iid:<p1,...>, markov:<file>, seq:<file>, contrarian or greedy)");
}

std::vector<int> read_sequence_file(const std::filesystem::path& path, int outcomes) {
    const auto values = parse_numbers(read_tokens(path), path.string());
    std::vector<int> seq;
    seq.reserve(values.size());
    for (double v : values) seq.push_back(as_outcome(v, outcomes, path.string()));
    if (seq.empty()) throw ConfigError(path.string() + ": sequence file is empty");
    return seq;
}

MarkovSpec read_markov_file(const std::filesystem::path& path, int outcomes) {
    const auto values = parse_numbers(read_tokens(path), path.string());
    const auto n = static_cast<std::size_t>(outcomes);
    if (values.size() != 1 + n * n)
        throw ConfigError(path.string() + ": expected a start outcome and " + std::to_string(outcomes) + "x" +
                          std::to_string(outcomes) + " transition probabilities");
    MarkovSpec spec;
    spec.start = as_outcome(values[0], outcomes, path.string());
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<double> row(values.begin() + static_cast<std::ptrdiff_t>(1 + r * n),
                                values.begin() + static_cast<std::ptrdiff_t>(1 + (r + 1) * n));
        try {
            spec.rows.emplace_back(std::move(row));
        } catch (const ParameterError& e) {
            throw ConfigError(path.string() + ": row " + std::to_string(r) + ": " + e.what());
        }
    }
    return spec;
}

}  // namespace calib
