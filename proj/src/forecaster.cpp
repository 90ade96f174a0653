#include "calib/forecaster.hpp"

#include "calib/errors.hpp"

namespace calib {

int sample_index(std::span<const double> weights, double u) {
    if (weights.empty()) throw ParameterError("sample_index: empty weights");
    double cumulative = 0.0;
    int last_positive = -1;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        cumulative += weights[i];
        last_positive = static_cast<int>(i);
        if (u < cumulative) return last_positive;
    }
    // u landed in the rounding gap above the cumulative sum
    if (last_positive < 0) throw ParameterError("sample_index: no positive weight");
    return last_positive;
}

CalibratedForecaster::CalibratedForecaster(EpsilonGrid grid, OracleConfig config, std::uint64_t seed, int regime)
    : grid_(std::move(grid)),
      target_(grid_.epsilon(), static_cast<std::size_t>(grid_.outcomes()) * static_cast<std::size_t>(grid_.size())),
      config_(config),
      rng_(seed, 1),
      regime_(regime),
      average_(grid_) {}

CalibratedForecaster::Forecast CalibratedForecaster::forecast() {
    if (pending_) throw ProtocolError("forecast called twice without an observe");
    BlackwellStep step = blackwell_policy(average_, target_, grid_, config_);
    const int k = sample_index(step.policy.weights(), rng_.next_unit());
    pending_ = k;
    return {k, std::move(step.policy), step.diagnostics};
}

RoundRecord CalibratedForecaster::observe(int a) {
    if (!pending_) throw ProtocolError("observe called before forecast");
    if (a < 0 || a >= grid_.outcomes()) throw ParameterError("observe: outcome out of range");
    average_.update(grid_, *pending_, a);
    RoundRecord record{average_.rounds(), regime_, *pending_, a};
    transcript_.push_back(record);
    pending_.reset();
    return record;
}

int deterministic_nearest_forecast(const EpsilonGrid& grid, std::span<const std::int64_t> outcome_counts) {
    if (outcome_counts.size() != static_cast<std::size_t>(grid.outcomes()))
        throw ParameterError("deterministic forecast: count vector has the wrong length");
    std::int64_t total = 0;
    for (auto c : outcome_counts) total += c;
    if (total == 0) {
        // lexicographically first of the points nearest to uniform
        const auto uniform = Distribution::uniform(grid.outcomes());
        int best = 0;
        double best_distance = l1_distance(grid.point(0).probs(), uniform.probs());
        for (int k = 1; k < grid.size(); ++k) {
            const double d = l1_distance(grid.point(k).probs(), uniform.probs());
            if (d < best_distance - 1e-12) {
                best = k;
                best_distance = d;
            }
        }
        return best;
    }
    std::vector<double> empirical(outcome_counts.size());
    for (std::size_t i = 0; i < empirical.size(); ++i)
        empirical[i] = static_cast<double>(outcome_counts[i]) / static_cast<double>(total);
    return grid.nearest(Distribution(std::move(empirical)));
}

DeterministicForecaster::DeterministicForecaster(EpsilonGrid grid)
    : grid_(std::move(grid)), average_(grid_), counts_(static_cast<std::size_t>(grid_.outcomes()), 0) {}

int DeterministicForecaster::forecast() {
    if (pending_) throw ProtocolError("forecast called twice without an observe");
    pending_ = deterministic_nearest_forecast(grid_, counts_);
    return *pending_;
}

RoundRecord DeterministicForecaster::observe(int a) {
    if (!pending_) throw ProtocolError("observe called before forecast");
    if (a < 0 || a >= grid_.outcomes()) throw ParameterError("observe: outcome out of range");
    average_.update(grid_, *pending_, a);
    ++counts_[static_cast<std::size_t>(a)];
    RoundRecord record{average_.rounds(), 0, *pending_, a};
    transcript_.push_back(record);
    pending_.reset();
    return record;
}

}  // namespace calib
