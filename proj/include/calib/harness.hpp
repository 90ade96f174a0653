#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <vector>

#include "calib/forecaster.hpp"
#include "calib/nature.hpp"
#include "calib/oracle.hpp"
#include "calib/scoring.hpp"

namespace calib {

enum class ForecasterKind { eps, meta, deterministic };

struct RunConfig {
    int outcomes = 2;
    double epsilon = 0.1;  // ignored by the meta-forecaster, which follows its own schedule
    std::int64_t rounds = 10000;
    ForecasterKind forecaster = ForecasterKind::eps;
    OracleConfig oracle;
    NatureSpec nature = GreedySpec{};
    std::uint64_t seed = 1;
    std::int64_t checkpoint_every = 0;  // 0: powers of two
    ScoreOptions scoring;
    std::filesystem::path transcript_path;
    std::filesystem::path scores_path;
};

// Throws ConfigError.
void validate(const RunConfig& config);

// Rounds at which scores are recorded: powers of two (or multiples of
// `every`), always including the last round. {0} when rounds == 0.
std::vector<std::int64_t> checkpoint_rounds(std::int64_t rounds, std::int64_t every);

struct Checkpoint {
    std::int64_t rounds = 0;
    double l1_score = 0.0;
    double brier = 0.0;
    double l2_distance = 0.0;
    double bound = 0.0;
};

struct TranscriptRow {
    RoundRecord record;
    Distribution forecast;
};

struct RoundEvent {
    const RoundRecord& record;
    const Distribution& forecast;
    // Null for the deterministic forecaster.
    const BlackwellDiagnostics* diagnostics;
};

struct GameResult {
    std::vector<TranscriptRow> rows;
    std::vector<Checkpoint> checkpoints;
    // One grid for eps/deterministic runs; grids[r - 1] per regime for meta runs.
    std::vector<EpsilonGrid> grids;
};

/**
 * Plays config.rounds rounds. Each round the forecaster commits first; Nature
 * then chooses from the past rounds only, plus the current forecast when the
 * forecaster is deterministic (and may therefore be simulated anyway).
 */
GameResult play(const RunConfig& config, const std::function<void(const RoundEvent&)>& on_round = {});

// t,regime,k,p0..p{A-1},a with 12 significant digits for the forecast.
void write_transcript_csv(std::ostream& out, const GameResult& result, int outcomes);
// T,l1_score,brier,l2_dist_C,bound_U
void write_scores_csv(std::ostream& out, const std::vector<Checkpoint>& checkpoints);
std::vector<Checkpoint> read_scores_csv(std::istream& in);

// Validate, play and write both CSVs. Returns 0 on success, 2 for an invalid
// configuration, 1 for I/O failure; messages go to `log`.
int run(const RunConfig& config, std::ostream& log);

// Log-log SVG chart of l1_score and l2_dist_C against T. Throws ParameterError
// on a malformed or empty score CSV.
void emit_plot(std::istream& scores_csv, std::ostream& svg);

}  // namespace calib
