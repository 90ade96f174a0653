#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "calib/forecaster.hpp"

namespace calib {

// Doubling-trick schedule: regime r >= 1 lasts 2^r rounds on a grid of
// radius 2^{-r/(A+1)}, which balances epsilon_r against sqrt(1/(epsilon_r^{A-1} T_r)).
double regime_epsilon(int regime, int outcomes);
std::int64_t regime_length(int regime);

/**
 * Calibrated meta-forecaster. Each regime runs a fresh CalibratedForecaster
 * (new grid, zeroed average); the switch to regime r+1 happens on the first
 * forecast after regime r has used its 2^r rounds. Forecasts are reported as
 * distributions because the grid changes between regimes.
 */
class MetaForecaster {
public:
    static constexpr int kMaxRegime = 40;

    struct Forecast {
        int regime;
        int k;
        Distribution point;
        BlackwellDiagnostics diagnostics;
    };

    MetaForecaster(int outcomes, OracleConfig config, std::uint64_t seed);

    Forecast forecast();
    RoundRecord observe(int a);

    int outcomes() const { return outcomes_; }
    int regime() const { return regime_; }
    std::int64_t rounds() const { return static_cast<std::int64_t>(transcript_.size()); }
    std::int64_t rounds_in_regime() const { return inner_ ? inner_->rounds() : 0; }

    // grids()[r - 1] is the grid of regime r, for every regime started so far.
    const std::vector<EpsilonGrid>& grids() const { return grids_; }
    const std::vector<RoundRecord>& transcript() const { return transcript_; }
    // Inner forecaster of the current regime; null before the first forecast.
    const CalibratedForecaster* current() const { return inner_.get(); }

private:
    void start_next_regime();

    int outcomes_;
    OracleConfig config_;
    std::uint64_t seed_;
    int regime_ = 0;
    std::unique_ptr<CalibratedForecaster> inner_;
    std::vector<EpsilonGrid> grids_;
    std::vector<RoundRecord> transcript_;
    bool pending_ = false;
};

}  // namespace calib
