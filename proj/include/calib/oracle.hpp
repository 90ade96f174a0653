#pragma once

#include <span>
#include <vector>

#include "calib/grid.hpp"
#include "calib/payoff.hpp"
#include "calib/projection.hpp"

namespace calib {

// Mixed action over grid indices.
class Policy {
public:
    static constexpr double kSumTolerance = 1e-9;

    explicit Policy(std::vector<double> weights);
    static Policy uniform(int size);

    int size() const { return static_cast<int>(weights_.size()); }
    double operator[](int k) const { return weights_[static_cast<std::size_t>(k)]; }
    std::span<const double> weights() const { return weights_; }

private:
    std::vector<double> weights_;
};

// Loss matrix of the auxiliary zero-sum game: rows are grid indices (the
// minimizing forecaster), columns are outcomes (the maximizing Nature).
class GameMatrix {
public:
    GameMatrix(int rows, int cols, std::vector<double> entries);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double at(int k, int a) const {
        return entries_[static_cast<std::size_t>(k) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(a)];
    }
    // max |entry|
    double scale() const { return scale_; }

    // (psi^T gamma)_a for every column a.
    std::vector<double> column_values(std::span<const double> row_mix) const;
    // (gamma q)_k for every row k.
    std::vector<double> row_values(std::span<const double> column_mix) const;

private:
    int rows_;
    int cols_;
    std::vector<double> entries_;
    double scale_ = 0.0;
};

// gamma_{k,a} = d_k . (p_k - delta_a) = d_k . p_k - d_{k,a}, with d = average - projection.
GameMatrix compute_gamma(const BlockVector& average, std::span<const double> projection, const EpsilonGrid& grid);

struct MinimaxSolution {
    Policy policy;
    double value = 0.0;        // max_a (psi^T gamma)_a for the returned psi
    double lower_bound = 0.0;  // min_k (gamma q)_k for the returned column mix q
    std::vector<double> column_strategy;
};

inline constexpr double kDefaultRelativeTolerance = 1e-9;

// Exact game value by the simplex method on the game's linear program.
// Throws NumericalError if value - lower_bound exceeds `tolerance` (absolute).
// The all-zero matrix yields the uniform policy.
MinimaxSolution solve_minimax_exact(const GameMatrix& game, double tolerance);

// Freund-Schapire style solve: exponential weights over rows against a
// best-responding column for ceil(4 ln(max(N,2)) / delta^2) iterations;
// returns the averaged row mixture. value <= v* + delta * scale().
MinimaxSolution solve_minimax_mw(const GameMatrix& game, double delta);

enum class MinimaxMethod { exact, multiplicative_weights };

struct OracleConfig {
    MinimaxMethod method = MinimaxMethod::exact;
    double relative_tolerance = kDefaultRelativeTolerance;  // exact: tol = this * scale
    double delta = 0.05;                                    // multiplicative weights accuracy
};

struct BlackwellDiagnostics {
    bool inside_target = true;
    double threshold = 0.0;   // mu* of the projection
    double distance = 0.0;    // ||avg - proj||_2
    double scale = 0.0;       // G
    double game_value = 0.0;  // max_a (psi^T gamma)_a
    double offset = 0.0;      // d . proj
    // max_a d . (m(psi, a) - proj); the halfspace condition asks for <= 0
    double violation = 0.0;
};

struct BlackwellStep {
    Policy policy;
    BlackwellDiagnostics diagnostics;
};

// Mixed action for the next round from the current average payoff. Returns the
// uniform policy while the average lies in C.
BlackwellStep blackwell_policy(const PayoffAverage& average, const TargetSet& target, const EpsilonGrid& grid,
                               const OracleConfig& config);

}  // namespace calib
