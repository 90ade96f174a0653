#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "calib/forecaster.hpp"
#include "calib/grid.hpp"

namespace calib {

struct BinSummary {
    int regime = 0;
    int k = 0;
    Distribution point;
    std::int64_t count = 0;
    double frequency = 0.0;          // count / T
    std::vector<double> empirical;   // rho_T(k); equals point when count == 0
    double block_score = 0.0;        // || (1/T) sum_{K_t = k} (p_k - delta_{a_t}) ||_1
};

struct ScoreOptions {
    double delta = 0.01;  // confidence level of the reported bound
    double gamma = 2.0;   // approachability rate constant; the reported bound is not a ground truth
};

struct ScoreReport {
    std::int64_t rounds = 0;
    double l1_score = 0.0;
    double brier_score = 0.0;
    std::vector<BinSummary> per_bin;
    double bound = 0.0;
    double l2_distance_to_C = 0.0;
};

/**
 * Outcome counts per forecast bin, keyed by (regime, k). Every score here is
 * a function of these aggregates only, so scores do not depend on the order
 * of rounds.
 */
class CalibrationTally {
public:
    explicit CalibrationTally(int outcomes);

    void add(int regime, int k, const Distribution& point, int a);

    std::int64_t rounds() const { return rounds_; }
    double l1_score() const;
    double brier_score() const;
    // Used bins only, ordered by (regime, k).
    std::vector<BinSummary> bins() const;

private:
    struct Bin {
        Distribution point;
        std::vector<std::int64_t> counts;
        std::int64_t total = 0;
    };

    double block_l1(const Bin& bin) const;

    int outcomes_;
    std::int64_t rounds_ = 0;
    std::map<std::pair<int, int>, Bin> bins_;
};

// Single-grid transcripts (eps and deterministic forecasters).
CalibrationTally tally(std::span<const RoundRecord> transcript, const EpsilonGrid& grid);
// Meta transcripts: record r is binned on regime_grids[r.regime - 1].
CalibrationTally tally(std::span<const RoundRecord> transcript, std::span<const EpsilonGrid> regime_grids);

double l1_score(std::span<const RoundRecord> transcript, const EpsilonGrid& grid);
double brier_score(std::span<const RoundRecord> transcript, const EpsilonGrid& grid);

// rho_T(k): empirical outcome distribution on the rounds that forecast p_k.
Distribution empirical_distribution(std::span<const RoundRecord> transcript, const EpsilonGrid& grid, int k);

// U = epsilon + gamma * gamma' * sqrt(A) * sqrt(ln(1/delta) / (epsilon^{A-1} T)).
// +infinity at T = 0.
double bound_U(double epsilon, double rounds, double delta, double gamma, double gamma_prime, int outcomes);

// gamma' = N * epsilon^{A-1}, the constant that makes N <= gamma' epsilon^{-(A-1)} tight for this grid.
double grid_gamma_prime(const EpsilonGrid& grid);

// ||avg - Pi_C(avg)||_2 with the average rebuilt from the transcript.
double l2_distance_to_C(std::span<const RoundRecord> transcript, const EpsilonGrid& grid);

// Euclidean distance from an average payoff to C.
double distance_to_target(const PayoffAverage& average, double epsilon);

ScoreReport score_report(std::span<const RoundRecord> transcript, const EpsilonGrid& grid,
                         const ScoreOptions& options = {});

struct RegimeScore {
    int regime = 0;
    std::int64_t rounds = 0;
    double l1_score = 0.0;  // normalized by the regime's own round count
};

std::vector<RegimeScore> regime_scores(std::span<const RoundRecord> transcript,
                                       std::span<const EpsilonGrid> regime_grids);

// Meta-forecaster bound: (1/T) sum_r n_r U(eps_r, n_r, 1/(2^r T^2)).
double meta_bound(std::span<const RegimeScore> regimes, std::span<const EpsilonGrid> regime_grids,
                  std::int64_t total_rounds, double gamma);

/**
 * Meta transcripts are scored on (regime, k) bins. The l1 score is the
 * computable upper bound on the uniform (Borel-supremum) calibration score
 * and equals (1/T) sum_r n_r * regime l1 score. l2_distance_to_C refers to
 * the last regime's own target set.
 */
ScoreReport meta_score_report(std::span<const RoundRecord> transcript, std::span<const EpsilonGrid> regime_grids,
                              const ScoreOptions& options = {});

}  // namespace calib
