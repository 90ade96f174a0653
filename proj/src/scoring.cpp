#include "calib/scoring.hpp"

#include <cmath>
#include <limits>

#include "calib/errors.hpp"
#include "calib/payoff.hpp"
#include "calib/projection.hpp"

namespace calib {

CalibrationTally::CalibrationTally(int outcomes) : outcomes_(outcomes) {
    if (outcomes < 2) throw ParameterError("tally needs at least 2 outcomes");
}

void CalibrationTally::add(int regime, int k, const Distribution& point, int a) {
    if (point.outcomes() != outcomes_) throw ParameterError("tally: forecast dimension mismatch");
    if (a < 0 || a >= outcomes_) throw ParameterError("tally: outcome out of range");
    auto it = bins_.find({regime, k});
    if (it == bins_.end())
        it = bins_.emplace(std::pair{regime, k}, Bin{point, std::vector<std::int64_t>(static_cast<std::size_t>(outcomes_), 0), 0})
                 .first;
    else if (!(it->second.point == point))
        throw ParameterError("tally: bin reused with a different forecast point");
    ++it->second.counts[static_cast<std::size_t>(a)];
    ++it->second.total;
    ++rounds_;
}

double CalibrationTally::block_l1(const Bin& bin) const {
    double s = 0.0;
    for (int i = 0; i < outcomes_; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        s += std::abs(static_cast<double>(bin.total) * bin.point[i] - static_cast<double>(bin.counts[idx]));
    }
    return s / static_cast<double>(rounds_);
}

double CalibrationTally::l1_score() const {
    if (rounds_ == 0) return 0.0;
    double s = 0.0;
    for (const auto& [key, bin] : bins_) s += block_l1(bin);
    return s;
}

double CalibrationTally::brier_score() const {
    if (rounds_ == 0) return 0.0;
    double s = 0.0;
    for (const auto& [key, bin] : bins_) {
        double sq = 0.0;
        const auto n = static_cast<double>(bin.total);
        for (int i = 0; i < outcomes_; ++i) {
            const double diff = static_cast<double>(bin.counts[static_cast<std::size_t>(i)]) / n - bin.point[i];
            sq += diff * diff;
        }
        s += sq * n / static_cast<double>(rounds_);
    }
    return s;
}

std::vector<BinSummary> CalibrationTally::bins() const {
    std::vector<BinSummary> out;
    out.reserve(bins_.size());
    for (const auto& [key, bin] : bins_) {
        std::vector<double> rho(static_cast<std::size_t>(outcomes_));
        for (std::size_t i = 0; i < rho.size(); ++i)
            rho[i] = static_cast<double>(bin.counts[i]) / static_cast<double>(bin.total);
        out.push_back({key.first, key.second, bin.point, bin.total,
                       static_cast<double>(bin.total) / static_cast<double>(rounds_), std::move(rho), block_l1(bin)});
    }
    return out;
}

CalibrationTally tally(std::span<const RoundRecord> transcript, const EpsilonGrid& grid) {
    CalibrationTally out(grid.outcomes());
    for (const auto& r : transcript) out.add(0, r.k, grid.point(r.k), r.a);
    return out;
}

CalibrationTally tally(std::span<const RoundRecord> transcript, std::span<const EpsilonGrid> regime_grids) {
    if (regime_grids.empty()) throw ParameterError("tally: no regime grids");
    CalibrationTally out(regime_grids.front().outcomes());
    for (const auto& r : transcript) {
        if (r.regime < 1 || static_cast<std::size_t>(r.regime) > regime_grids.size())
            throw ParameterError("tally: record refers to an unknown regime");
        out.add(r.regime, r.k, regime_grids[static_cast<std::size_t>(r.regime - 1)].point(r.k), r.a);
    }
    return out;
}

double l1_score(std::span<const RoundRecord> transcript, const EpsilonGrid& grid) {
    return tally(transcript, grid).l1_score();
}

double brier_score(std::span<const RoundRecord> transcript, const EpsilonGrid& grid) {
    return tally(transcript, grid).brier_score();
}

Distribution empirical_distribution(std::span<const RoundRecord> transcript, const EpsilonGrid& grid, int k) {
    const auto& point = grid.point(k);
    std::vector<double> counts(static_cast<std::size_t>(grid.outcomes()), 0.0);
    double total = 0.0;
    for (const auto& r : transcript) {
        if (r.k != k) continue;
        counts[static_cast<std::size_t>(r.a)] += 1.0;
        total += 1.0;
    }
    if (total == 0.0) return point;
    for (double& c : counts) c /= total;
    return Distribution(std::move(counts));
}

double bound_U(double epsilon, double rounds, double delta, double gamma, double gamma_prime, int outcomes) {
    if (!(epsilon > 0.0) || !(delta > 0.0 && delta < 1.0) || !(gamma > 0.0) || !(gamma_prime > 0.0) || outcomes < 2 ||
        rounds < 0.0)
        throw ParameterError("bound_U: parameters must be positive with delta in (0, 1)");
    if (rounds == 0.0) return std::numeric_limits<double>::infinity();
    return epsilon + gamma * gamma_prime * std::sqrt(static_cast<double>(outcomes)) *
                         std::sqrt(std::log(1.0 / delta) / (std::pow(epsilon, outcomes - 1) * rounds));
}

double grid_gamma_prime(const EpsilonGrid& grid) {
    return grid.size() * std::pow(grid.epsilon(), grid.outcomes() - 1);
}

double distance_to_target(const PayoffAverage& average, double epsilon) {
    const BlockVector avg = average.average();
    const TargetSet target(epsilon, avg.dimension());
    const Projection proj = project(target, avg.values());
    double sq = 0.0;
    for (std::size_t i = 0; i < proj.point.size(); ++i) {
        const double d = avg.values()[i] - proj.point[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

double l2_distance_to_C(std::span<const RoundRecord> transcript, const EpsilonGrid& grid) {
    PayoffAverage average(grid);
    for (const auto& r : transcript) average.update(grid, r.k, r.a);
    return distance_to_target(average, grid.epsilon());
}

ScoreReport score_report(std::span<const RoundRecord> transcript, const EpsilonGrid& grid,
                         const ScoreOptions& options) {
    const auto counts = tally(transcript, grid);
    ScoreReport report;
    report.rounds = counts.rounds();
    report.l1_score = counts.l1_score();
    report.brier_score = counts.brier_score();
    report.bound = bound_U(grid.epsilon(), static_cast<double>(report.rounds), options.delta, options.gamma,
                           grid_gamma_prime(grid), grid.outcomes());
    report.l2_distance_to_C = l2_distance_to_C(transcript, grid);

    // every grid point gets a row; unused bins keep rho = p_k
    const auto used = counts.bins();
    std::size_t next = 0;
    report.per_bin.reserve(static_cast<std::size_t>(grid.size()));
    for (int k = 0; k < grid.size(); ++k) {
        if (next < used.size() && used[next].k == k) {
            report.per_bin.push_back(used[next++]);
            continue;
        }
        const auto& p = grid.point(k);
        report.per_bin.push_back({0, k, p, 0, 0.0, std::vector<double>(p.probs().begin(), p.probs().end()), 0.0});
    }
    return report;
}

std::vector<RegimeScore> regime_scores(std::span<const RoundRecord> transcript,
                                       std::span<const EpsilonGrid> regime_grids) {
    std::map<int, CalibrationTally> per_regime;
    for (const auto& r : transcript) {
        if (r.regime < 1 || static_cast<std::size_t>(r.regime) > regime_grids.size())
            throw ParameterError("regime_scores: record refers to an unknown regime");
        const auto& grid = regime_grids[static_cast<std::size_t>(r.regime - 1)];
        per_regime.try_emplace(r.regime, grid.outcomes()).first->second.add(r.regime, r.k, grid.point(r.k), r.a);
    }
    std::vector<RegimeScore> out;
    for (const auto& [regime, counts] : per_regime) out.push_back({regime, counts.rounds(), counts.l1_score()});
    return out;
}

double meta_bound(std::span<const RegimeScore> regimes, std::span<const EpsilonGrid> regime_grids,
                  std::int64_t total_rounds, double gamma) {
    if (total_rounds == 0) return std::numeric_limits<double>::infinity();
    const double T = static_cast<double>(total_rounds);
    double weighted = 0.0;
    for (const auto& r : regimes) {
        const auto& grid = regime_grids[static_cast<std::size_t>(r.regime - 1)];
        const double delta_r = 1.0 / (std::exp2(r.regime) * T * T);
        weighted += static_cast<double>(r.rounds) * bound_U(grid.epsilon(), static_cast<double>(r.rounds), delta_r,
                                                            gamma, grid_gamma_prime(grid), grid.outcomes());
    }
    return weighted / T;
}

ScoreReport meta_score_report(std::span<const RoundRecord> transcript, std::span<const EpsilonGrid> regime_grids,
                              const ScoreOptions& options) {
    ScoreReport report;
    if (transcript.empty()) {
        report.bound = std::numeric_limits<double>::infinity();
        return report;
    }
    const auto counts = tally(transcript, regime_grids);
    report.rounds = counts.rounds();
    report.l1_score = counts.l1_score();
    report.brier_score = counts.brier_score();
    report.per_bin = counts.bins();
    const auto regimes = regime_scores(transcript, regime_grids);
    report.bound = meta_bound(regimes, regime_grids, report.rounds, options.gamma);

    const int last = transcript.back().regime;
    std::vector<RoundRecord> last_regime;
    for (const auto& r : transcript)
        if (r.regime == last) last_regime.push_back(r);
    report.l2_distance_to_C = l2_distance_to_C(last_regime, regime_grids[static_cast<std::size_t>(last - 1)]);
    return report;
}

}  // namespace calib
