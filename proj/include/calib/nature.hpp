#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "calib/grid.hpp"
#include "calib/rng.hpp"

namespace calib {

// What Nature sees of a past round.
struct Observation {
    Distribution forecast;
    int outcome;
};

struct IidSpec {
    Distribution q;
};

// The first outcome is `start`; afterwards a_t is drawn from rows[a_{t-1}].
struct MarkovSpec {
    std::vector<Distribution> rows;
    int start = 0;
};

// Replayed cyclically.
struct SequenceSpec {
    std::vector<int> outcomes;
};

// Plays the outcome the current forecast deems least likely. Needs to see the
// current forecast, so it may only face a deterministic forecaster.
struct ContrarianSpec {};

// Assumes the forecaster repeats its previous forecast and plays the outcome
// that most increases the l1 calibration score of that forecast's bin.
struct GreedySpec {};

using NatureSpec = std::variant<IidSpec, MarkovSpec, SequenceSpec, ContrarianSpec, GreedySpec>;

class Nature {
public:
    Nature(NatureSpec spec, int outcomes, std::uint64_t seed);

    bool requires_current_forecast() const { return std::holds_alternative<ContrarianSpec>(spec_); }

    // `history` holds rounds 1..t-1. `current_forecast` is only passed when
    // the forecaster is deterministic; the contrarian throws ConfigError
    // without it.
    int next_outcome(std::span<const Observation> history, const Distribution* current_forecast = nullptr);

    int outcomes() const { return outcomes_; }

private:
    int sample(const Distribution& q);
    int greedy_outcome(std::span<const Observation> history);

    NatureSpec spec_;
    int outcomes_;
    CounterRng rng_;
    // greedy bookkeeping: sum of (P_s - delta_{a_s}) per distinct forecast
    std::map<std::vector<double>, std::vector<double>> bins_;
    std::size_t absorbed_ = 0;
};

// Command-line mini-language: iid:<p1,...,pA> | markov:<file> | seq:<file> |
// contrarian | greedy. Throws ConfigError on malformed specs or files.
NatureSpec parse_nature_spec(const std::string& text, int outcomes);

// Newline-separated outcome indices; blank lines and '#' comments are skipped.
std::vector<int> read_sequence_file(const std::filesystem::path& path, int outcomes);

// First entry: start outcome; then A rows of A probabilities, separated by
// whitespace or commas. '#' starts a comment.
MarkovSpec read_markov_file(const std::filesystem::path& path, int outcomes);

}  // namespace calib
