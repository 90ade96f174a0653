#include "calib/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "calib/errors.hpp"
#include "calib/meta.hpp"

namespace calib {

namespace {

std::string format_number(double v, int digits) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

// Uniform driver over the three forecaster kinds.
class Player {
public:
    virtual ~Player() = default;
    virtual bool randomized() const = 0;
    // Returns the committed forecast; diagnostics may be null.
    virtual std::pair<RoundRecord, Distribution> forecast(const BlackwellDiagnostics** diagnostics) = 0;
    virtual RoundRecord observe(int a) = 0;
    virtual double distance_to_target() const = 0;
    virtual double bound(std::int64_t rounds, const ScoreOptions& options) const = 0;
    virtual std::vector<EpsilonGrid> grids() const = 0;
};

class EpsPlayer final : public Player {
public:
    EpsPlayer(const RunConfig& c) : inner_(EpsilonGrid(c.outcomes, c.epsilon), c.oracle, c.seed) {}
    bool randomized() const override { return true; }
    std::pair<RoundRecord, Distribution> forecast(const BlackwellDiagnostics** diagnostics) override {
        last_ = inner_.forecast();
        *diagnostics = &last_->diagnostics;
        return {RoundRecord{inner_.rounds() + 1, 0, last_->k, 0}, inner_.grid().point(last_->k)};
    }
    RoundRecord observe(int a) override { return inner_.observe(a); }
    double distance_to_target() const override {
        return calib::distance_to_target(inner_.average(), inner_.grid().epsilon());
    }
    double bound(std::int64_t rounds, const ScoreOptions& o) const override {
        const auto& g = inner_.grid();
        return bound_U(g.epsilon(), static_cast<double>(rounds), o.delta, o.gamma, grid_gamma_prime(g), g.outcomes());
    }
    std::vector<EpsilonGrid> grids() const override { return {inner_.grid()}; }

private:
    CalibratedForecaster inner_;
    std::optional<CalibratedForecaster::Forecast> last_;
};

class DeterministicPlayer final : public Player {
public:
    DeterministicPlayer(const RunConfig& c) : inner_(EpsilonGrid(c.outcomes, c.epsilon)) {}
    bool randomized() const override { return false; }
    std::pair<RoundRecord, Distribution> forecast(const BlackwellDiagnostics** diagnostics) override {
        *diagnostics = nullptr;
        const int k = inner_.forecast();
        return {RoundRecord{inner_.rounds() + 1, 0, k, 0}, inner_.grid().point(k)};
    }
    RoundRecord observe(int a) override { return inner_.observe(a); }
    double distance_to_target() const override {
        return calib::distance_to_target(inner_.average(), inner_.grid().epsilon());
    }
    double bound(std::int64_t rounds, const ScoreOptions& o) const override {
        const auto& g = inner_.grid();
        return bound_U(g.epsilon(), static_cast<double>(rounds), o.delta, o.gamma, grid_gamma_prime(g), g.outcomes());
    }
    std::vector<EpsilonGrid> grids() const override { return {inner_.grid()}; }

private:
    DeterministicForecaster inner_;
};

class MetaPlayer final : public Player {
public:
    MetaPlayer(const RunConfig& c) : inner_(c.outcomes, c.oracle, c.seed) {}
    bool randomized() const override { return true; }
    std::pair<RoundRecord, Distribution> forecast(const BlackwellDiagnostics** diagnostics) override {
        auto f = inner_.forecast();
        diagnostics_ = f.diagnostics;
        *diagnostics = &diagnostics_;
        return {RoundRecord{inner_.rounds() + 1, f.regime, f.k, 0}, std::move(f.point)};
    }
    RoundRecord observe(int a) override { return inner_.observe(a); }
    double distance_to_target() const override {
        const auto* current = inner_.current();
        return current ? calib::distance_to_target(current->average(), current->grid().epsilon()) : 0.0;
    }
    double bound(std::int64_t rounds, const ScoreOptions& o) const override {
        std::vector<RegimeScore> regimes;
        for (int r = 1; r <= inner_.regime(); ++r)
            regimes.push_back({r, r < inner_.regime() ? regime_length(r) : inner_.rounds_in_regime(), 0.0});
        return meta_bound(regimes, inner_.grids(), rounds, o.gamma);
    }
    std::vector<EpsilonGrid> grids() const override { return inner_.grids(); }

private:
    MetaForecaster inner_;
    BlackwellDiagnostics diagnostics_;
};

std::unique_ptr<Player> make_player(const RunConfig& c) {
    switch (c.forecaster) {
        case ForecasterKind::eps: return std::make_unique<EpsPlayer>(c);
        case ForecasterKind::deterministic: return std::make_unique<DeterministicPlayer>(c);
        case ForecasterKind::meta: return std::make_unique<MetaPlayer>(c);
    }
    throw ConfigError("unknown forecaster kind");
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

void validate(const RunConfig& c) {
    if (c.outcomes < 2) throw ConfigError("--outcomes must be at least 2");
    if (c.forecaster != ForecasterKind::meta && !(c.epsilon > 0.0 && c.epsilon <= 2.0))
        throw ConfigError("--epsilon must lie in (0, 2]");
    if (c.rounds < 0) throw ConfigError("--rounds must be nonnegative");
    if (c.checkpoint_every < 0) throw ConfigError("--checkpoint-every must be at least 1");
    if (c.oracle.method == MinimaxMethod::multiplicative_weights && !(c.oracle.delta > 0.0 && c.oracle.delta < 1.0))
        throw ConfigError("multiplicative weights delta must lie in (0, 1)");
    if (!(c.oracle.relative_tolerance > 0.0)) throw ConfigError("solver tolerance must be positive");
    if (!(c.scoring.delta > 0.0 && c.scoring.delta < 1.0) || !(c.scoring.gamma > 0.0))
        throw ConfigError("bound constants: delta must lie in (0, 1) and gamma must be positive");
    if (std::holds_alternative<ContrarianSpec>(c.nature) && c.forecaster != ForecasterKind::deterministic)
        throw ConfigError("the contrarian nature can only face the deterministic forecaster");
    // Nature checks its spec against the outcome count.
    Nature(c.nature, c.outcomes, c.seed);
    if (c.forecaster != ForecasterKind::meta) {
        try {
            EpsilonGrid(c.outcomes, c.epsilon);
        } catch (const ParameterError& e) {
            throw ConfigError(e.what());
        }
    }
}

std::vector<std::int64_t> checkpoint_rounds(std::int64_t rounds, std::int64_t every) {
    if (rounds == 0) return {0};
    std::vector<std::int64_t> out;
    if (every > 0) {
        for (std::int64_t t = every; t <= rounds; t += every) out.push_back(t);
    } else {
        for (std::int64_t t = 1; t <= rounds; t *= 2) {
            out.push_back(t);
            if (t > rounds / 2) break;
        }
    }
    if (out.empty() || out.back() != rounds) out.push_back(rounds);
    return out;
}

GameResult play(const RunConfig& config, const std::function<void(const RoundEvent&)>& on_round) {
    validate(config);
    auto player = make_player(config);
    Nature nature(config.nature, config.outcomes, config.seed);
    CalibrationTally counts(config.outcomes);
    std::vector<Observation> history;
    history.reserve(static_cast<std::size_t>(config.rounds));

    GameResult result;
    result.rows.reserve(static_cast<std::size_t>(config.rounds));
    const auto schedule = checkpoint_rounds(config.rounds, config.checkpoint_every);
    std::size_t next_checkpoint = 0;
    if (config.rounds == 0) {
        result.checkpoints.push_back({0, 0.0, 0.0, 0.0, player->bound(0, config.scoring)});
    }

    for (std::int64_t t = 1; t <= config.rounds; ++t) {
        const BlackwellDiagnostics* diagnostics = nullptr;
        auto [pending, forecast] = player->forecast(&diagnostics);
        // Only a deterministic forecaster's current forecast may be shown to Nature.
        const int a = nature.next_outcome(history, player->randomized() ? nullptr : &forecast);
        const RoundRecord record = player->observe(a);
        counts.add(record.regime, record.k, forecast, a);
        if (on_round) on_round(RoundEvent{record, forecast, diagnostics});
        history.push_back({forecast, a});
        result.rows.push_back({record, std::move(forecast)});

        if (next_checkpoint < schedule.size() && schedule[next_checkpoint] == t) {
            ++next_checkpoint;
            result.checkpoints.push_back({t, counts.l1_score(), counts.brier_score(), player->distance_to_target(),
                                          player->bound(t, config.scoring)});
        }
    }
    result.grids = player->grids();
    return result;
}

void write_transcript_csv(std::ostream& out, const GameResult& result, int outcomes) {
    out << "t,regime,k";
    for (int i = 0; i < outcomes; ++i) out << ",p" << i;
    out << ",a\n";
    for (const auto& row : result.rows) {
        out << row.record.t << ',' << row.record.regime << ',' << row.record.k;
        for (double p : row.forecast.probs()) out << ',' << format_number(p, 12);
        out << ',' << row.record.a << '\n';
    }
}

void write_scores_csv(std::ostream& out, const std::vector<Checkpoint>& checkpoints) {
    out << "T,l1_score,brier,l2_dist_C,bound_U\n";
    for (const auto& c : checkpoints)
        out << c.rounds << ',' << format_number(c.l1_score, 15) << ',' << format_number(c.brier, 15) << ','
            << format_number(c.l2_distance, 15) << ',' << format_number(c.bound, 15) << '\n';
}

std::vector<Checkpoint> read_scores_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParameterError("score CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "T,l1_score,brier,l2_dist_C,bound_U") throw ParameterError("score CSV: unexpected header '" + line + "'");
    std::vector<Checkpoint> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 5) throw ParameterError("score CSV line " + std::to_string(line_no) + ": expected 5 fields");
        double values[5];
        for (std::size_t i = 0; i < 5; ++i) {
            std::size_t used = 0;
            try {
                values[i] = std::stod(fields[i], &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != fields[i].size())
                throw ParameterError("score CSV line " + std::to_string(line_no) + ": bad number '" + fields[i] + "'");
        }
        if (values[0] < 0 || values[0] != std::floor(values[0]))
            throw ParameterError("score CSV line " + std::to_string(line_no) + ": T must be a nonnegative integer");
        out.push_back({static_cast<std::int64_t>(values[0]), values[1], values[2], values[3], values[4]});
    }
    if (out.empty()) throw ParameterError("score CSV has no data rows");
    return out;
}

int run(const RunConfig& config, std::ostream& log) {
    GameResult result;
    try {
        result = play(config);
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return 2;
    } catch (const ParameterError& e) {
        log << "error: " << e.what() << '\n';
        return 2;
    }

    auto write = [&](const std::filesystem::path& path, auto&& body) {
        if (path.has_parent_path()) {
            std::error_code ec;
            std::filesystem::create_directories(path.parent_path(), ec);
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            log << "error: cannot write " << path.string() << '\n';
            return false;
        }
        body(out);
        out.flush();
        if (!out) {
            log << "error: failed writing " << path.string() << '\n';
            return false;
        }
        return true;
    };
    if (!write(config.transcript_path, [&](std::ostream& o) { write_transcript_csv(o, result, config.outcomes); }))
        return 1;
    if (!write(config.scores_path, [&](std::ostream& o) { write_scores_csv(o, result.checkpoints); })) return 1;

    const auto& last = result.checkpoints.back();
    log << "T=" << last.rounds << " l1_score=" << format_number(last.l1_score, 6)
        << " brier=" << format_number(last.brier, 6) << " l2_dist_C=" << format_number(last.l2_distance, 6)
        << " bound_U=" << format_number(last.bound, 6) << '\n';
    return 0;
}

}  // namespace calib
