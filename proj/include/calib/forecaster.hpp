#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "calib/grid.hpp"
#include "calib/oracle.hpp"
#include "calib/payoff.hpp"
#include "calib/projection.hpp"
#include "calib/rng.hpp"

namespace calib {

struct RoundRecord {
    std::int64_t t = 0;  // 1-based round index
    int regime = 0;      // doubling-trick regime, 0 outside the meta-forecaster
    int k = 0;           // grid index K_t
    int a = 0;           // outcome a_t
};

// Inverse-CDF draw from `weights` with a uniform u in [0, 1).
int sample_index(std::span<const double> weights, double u);

/**
 * Approachability-based epsilon-calibrated forecaster.
 *
 * forecast() computes a mixed action satisfying Blackwell's halfspace
 * condition for the current average payoff and samples K_t from it;
 * observe() then folds (K_t, a_t) into the average. The two calls must
 * alternate.
 */
class CalibratedForecaster {
public:
    struct Forecast {
        int k;
        Policy policy;
        BlackwellDiagnostics diagnostics;
    };

    CalibratedForecaster(EpsilonGrid grid, OracleConfig config, std::uint64_t seed, int regime = 0);

    Forecast forecast();
    RoundRecord observe(int a);

    const EpsilonGrid& grid() const { return grid_; }
    const TargetSet& target() const { return target_; }
    const PayoffAverage& average() const { return average_; }
    const std::vector<RoundRecord>& transcript() const { return transcript_; }
    std::int64_t rounds() const { return average_.rounds(); }
    bool awaiting_outcome() const { return pending_.has_value(); }

private:
    EpsilonGrid grid_;
    TargetSet target_;
    OracleConfig config_;
    CounterRng rng_;
    int regime_;
    PayoffAverage average_;
    std::vector<RoundRecord> transcript_;
    std::optional<int> pending_;
};

// Grid point nearest the empirical outcome distribution (uniform when no
// outcome has been seen). Deterministic, hence beatable.
int deterministic_nearest_forecast(const EpsilonGrid& grid, std::span<const std::int64_t> outcome_counts);

// Negative-control forecaster built on deterministic_nearest_forecast, with
// the same forecast/observe protocol as CalibratedForecaster.
class DeterministicForecaster {
public:
    explicit DeterministicForecaster(EpsilonGrid grid);

    int forecast();
    RoundRecord observe(int a);

    const EpsilonGrid& grid() const { return grid_; }
    const PayoffAverage& average() const { return average_; }
    const std::vector<RoundRecord>& transcript() const { return transcript_; }
    std::int64_t rounds() const { return average_.rounds(); }

private:
    EpsilonGrid grid_;
    PayoffAverage average_;
    std::vector<std::int64_t> counts_;
    std::vector<RoundRecord> transcript_;
    std::optional<int> pending_;
};

}  // namespace calib
