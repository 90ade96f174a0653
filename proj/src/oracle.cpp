#include "calib/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <string>

#include "calib/errors.hpp"

namespace calib {

namespace {

std::vector<double> normalized(std::vector<double> weights) {
    for (double& w : weights) w = std::max(w, 0.0);
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0)) throw NumericalError("solver produced an empty mixture");
    for (double& w : weights) w /= total;
    return weights;
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }
double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

MinimaxSolution uniform_solution(const GameMatrix& game) {
    Policy policy = Policy::uniform(game.rows());
    std::vector<double> column(static_cast<std::size_t>(game.cols()), 1.0 / game.cols());
    const double value = max_of(game.column_values(policy.weights()));
    const double lower = min_of(game.row_values(column));
    return {std::move(policy), value, lower, std::move(column)};
}

}  // namespace

Policy::Policy(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw ParameterError("policy must have at least one entry");
    double total = 0.0;
    for (double w : weights_) {
        if (!std::isfinite(w) || w < 0.0) throw ParameterError("policy weights must be finite and nonnegative");
        total += w;
    }
    if (std::abs(total - 1.0) > kSumTolerance) throw ParameterError("policy weights must sum to 1");
}

Policy Policy::uniform(int size) {
    if (size < 1) throw ParameterError("uniform policy needs a positive size");
    return Policy(std::vector<double>(static_cast<std::size_t>(size), 1.0 / size));
}

GameMatrix::GameMatrix(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows < 1 || cols < 1) throw ParameterError("game matrix dimensions must be positive");
    if (entries_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
        throw ParameterError("game matrix: entry count does not match dimensions");
    for (double v : entries_) {
        if (!std::isfinite(v)) throw ParameterError("game matrix entries must be finite");
        scale_ = std::max(scale_, std::abs(v));
    }
}

std::vector<double> GameMatrix::column_values(std::span<const double> row_mix) const {
    if (row_mix.size() != static_cast<std::size_t>(rows_)) throw ParameterError("column_values: dimension mismatch");
    std::vector<double> out(static_cast<std::size_t>(cols_), 0.0);
    for (int k = 0; k < rows_; ++k) {
        const double w = row_mix[static_cast<std::size_t>(k)];
        if (w == 0.0) continue;
        for (int a = 0; a < cols_; ++a) out[static_cast<std::size_t>(a)] += w * at(k, a);
    }
    return out;
}

std::vector<double> GameMatrix::row_values(std::span<const double> column_mix) const {
    if (column_mix.size() != static_cast<std::size_t>(cols_)) throw ParameterError("row_values: dimension mismatch");
    std::vector<double> out(static_cast<std::size_t>(rows_), 0.0);
    for (int k = 0; k < rows_; ++k)
        for (int a = 0; a < cols_; ++a) out[static_cast<std::size_t>(k)] += at(k, a) * column_mix[static_cast<std::size_t>(a)];
    return out;
}

GameMatrix compute_gamma(const BlockVector& average, std::span<const double> projection, const EpsilonGrid& grid) {
    if (average.outcomes() != grid.outcomes() || average.blocks() != grid.size() ||
        projection.size() != average.dimension())
        throw ParameterError("compute_gamma: dimension mismatch");
    const int A = grid.outcomes();
    const int N = grid.size();
    std::vector<double> entries(static_cast<std::size_t>(N) * static_cast<std::size_t>(A));
    std::vector<double> direction(static_cast<std::size_t>(A));
    for (int k = 0; k < N; ++k) {
        const auto avg_block = average.block(k);
        const auto p = grid.point(k).probs();
        const std::size_t base = static_cast<std::size_t>(k) * static_cast<std::size_t>(A);
        double along_point = 0.0;
        for (std::size_t i = 0; i < direction.size(); ++i) {
            direction[i] = avg_block[i] - projection[base + i];
            along_point += direction[i] * p[i];
        }
        for (std::size_t a = 0; a < direction.size(); ++a) entries[base + a] = along_point - direction[a];
    }
    return GameMatrix(N, A, std::move(entries));
}

/*
 * Tucker-tableau simplex for matrix games. Nature (columns of gamma, the
 * maximizer) is put on the rows of the tableau and the grid (minimizer) on
 * its columns, with payoffs shifted into [1, 3]:
 *
 *            y_1 .. y_N
 *     x_1  [   B^T      | 1 ]
 *     ...
 *     x_A  [            | 1 ]
 *          [ -1 .. -1   | 0 ]
 *
 * Pivoting until the bottom row is nonnegative gives value(B) = 1/corner; a
 * y-label left on a row carries psi = rhs / corner, an x-label moved to the
 * top carries q = bottom / corner.
 *
 * Near-duplicate rows (common when the average payoff sits just outside C)
 * make tiny pivot elements fatal to accuracy, so leaving-row ties go to the
 * largest pivot element first. That rule can cycle on degenerate games; if
 * the pivot cap is hit the solve restarts under Bland's lowest-label rule,
 * which cannot cycle.
 */
namespace {

std::string format_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

enum class TieRule { largest_pivot, bland };

struct TableauResult {
    std::vector<double> psi;
    std::vector<double> q;
};

std::optional<TableauResult> run_tableau(const GameMatrix& game, double G, TieRule rule) {
    const int rows = game.cols();
    const int cols = game.rows();
    const auto width = static_cast<std::size_t>(cols + 1);
    auto cell = [width](int i, int j) { return static_cast<std::size_t>(i) * width + static_cast<std::size_t>(j); };

    std::vector<double> tab(static_cast<std::size_t>(rows + 1) * width, 0.0);
    std::vector<int> left(static_cast<std::size_t>(rows));
    std::vector<int> top(static_cast<std::size_t>(cols));
    for (int i = 0; i < rows; ++i) {
        left[static_cast<std::size_t>(i)] = i;
        for (int j = 0; j < cols; ++j) tab[cell(i, j)] = game.at(j, i) / G + 2.0;
        tab[cell(i, cols)] = 1.0;
    }
    for (int j = 0; j < cols; ++j) {
        top[static_cast<std::size_t>(j)] = rows + j;
        tab[cell(rows, j)] = -1.0;
    }

    constexpr double kPivotEps = 1e-9;
    constexpr double kRatioTie = 1e-11;
    const int max_pivots = 50 * (rows + cols) + 100;
    int pivots = 0;
    while (true) {
        int pc = -1;
        for (int j = 0; j < cols; ++j)
            if (tab[cell(rows, j)] < -kPivotEps && (pc < 0 || top[static_cast<std::size_t>(j)] < top[static_cast<std::size_t>(pc)]))
                pc = j;
        if (pc < 0) break;

        int pr = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < rows; ++i) {
            const double entry = tab[cell(i, pc)];
            if (entry <= kPivotEps) continue;
            const double ratio = tab[cell(i, cols)] / entry;
            if (pr < 0 || ratio < best_ratio) {
                pr = i;
                best_ratio = ratio;
            }
        }
        // Entries are positive before the first pivot, so the LP is bounded.
        if (pr < 0) throw NumericalError("solve_minimax_exact: unbounded pivot column");
        const double cutoff = best_ratio + kRatioTie * (1.0 + std::abs(best_ratio));
        for (int i = 0; i < rows; ++i) {
            const double entry = tab[cell(i, pc)];
            if (i == pr || entry <= kPivotEps || tab[cell(i, cols)] / entry > cutoff) continue;
            const double current = tab[cell(pr, pc)];
            const bool lower_label = left[static_cast<std::size_t>(i)] < left[static_cast<std::size_t>(pr)];
            if (rule == TieRule::bland ? lower_label
                                       : entry > current * (1.0 + 1e-12) ||
                                             (entry >= current * (1.0 - 1e-12) && lower_label))
                pr = i;
        }
        if (++pivots > max_pivots) return std::nullopt;

        const double p = tab[cell(pr, pc)];
        for (int i = 0; i <= rows; ++i) {
            if (i == pr) continue;
            const double factor = tab[cell(i, pc)] / p;
            if (factor == 0.0) continue;
            for (int j = 0; j <= cols; ++j)
                if (j != pc) tab[cell(i, j)] -= factor * tab[cell(pr, j)];
            tab[cell(i, pc)] = -factor;
        }
        for (int j = 0; j <= cols; ++j)
            if (j != pc) tab[cell(pr, j)] /= p;
        tab[cell(pr, pc)] = 1.0 / p;
        std::swap(left[static_cast<std::size_t>(pr)], top[static_cast<std::size_t>(pc)]);
    }

    const double corner = tab[cell(rows, cols)];
    if (!(corner > 0.0)) throw NumericalError("solve_minimax_exact: degenerate final tableau");
    TableauResult out{std::vector<double>(static_cast<std::size_t>(cols), 0.0),
                      std::vector<double>(static_cast<std::size_t>(rows), 0.0)};
    for (int i = 0; i < rows; ++i)
        if (const int label = left[static_cast<std::size_t>(i)]; label >= rows)
            out.psi[static_cast<std::size_t>(label - rows)] = tab[cell(i, cols)] / corner;
    for (int j = 0; j < cols; ++j)
        if (const int label = top[static_cast<std::size_t>(j)]; label < rows)
            out.q[static_cast<std::size_t>(label)] = tab[cell(rows, j)] / corner;
    return out;
}

}  // namespace

MinimaxSolution solve_minimax_exact(const GameMatrix& game, double tolerance) {
    if (!(tolerance > 0.0)) throw ParameterError("solve_minimax_exact: tolerance must be positive");
    const double G = game.scale();
    if (G == 0.0) return uniform_solution(game);

    auto result = run_tableau(game, G, TieRule::largest_pivot);
    if (!result) result = run_tableau(game, G, TieRule::bland);
    if (!result) throw NumericalError("solve_minimax_exact: pivot limit reached");

    Policy policy(normalized(std::move(result->psi)));
    auto q = normalized(std::move(result->q));
    const double value = max_of(game.column_values(policy.weights()));
    const double lower = min_of(game.row_values(q));
    if (value - lower > tolerance)
        throw NumericalError("solve_minimax_exact: duality gap " + format_g(value - lower) + " exceeds tolerance " +
                             format_g(tolerance) + " (scale " + format_g(G) + ")");
    return {std::move(policy), value, lower, std::move(q)};
}

MinimaxSolution solve_minimax_mw(const GameMatrix& game, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("solve_minimax_mw: delta must lie in (0, 1)");
    const double G = game.scale();
    if (G == 0.0) return uniform_solution(game);

    const auto n = static_cast<std::size_t>(game.rows());
    const double log_n = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
    const auto iterations = static_cast<long>(std::ceil(4.0 * log_n / (delta * delta)));
    const double eta = std::sqrt(log_n / static_cast<double>(iterations));

    std::vector<double> cumulative_loss(n, 0.0);
    std::vector<double> mix(n);
    std::vector<double> mix_sum(n, 0.0);
    std::vector<double> column_counts(static_cast<std::size_t>(game.cols()), 0.0);
    for (long it = 0; it < iterations; ++it) {
        const double floor_loss = *std::min_element(cumulative_loss.begin(), cumulative_loss.end());
        double total = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            mix[k] = std::exp(-eta * (cumulative_loss[k] - floor_loss));
            total += mix[k];
        }
        for (std::size_t k = 0; k < n; ++k) {
            mix[k] /= total;
            mix_sum[k] += mix[k];
        }

        const auto values = game.column_values(mix);
        // first maximum: lowest outcome index wins ties
        const auto response = static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
        column_counts[static_cast<std::size_t>(response)] += 1.0;
        for (std::size_t k = 0; k < n; ++k) cumulative_loss[k] += game.at(static_cast<int>(k), response) / G;
    }

    Policy policy(normalized(std::move(mix_sum)));
    auto q = normalized(std::move(column_counts));
    const double value = max_of(game.column_values(policy.weights()));
    const double lower = min_of(game.row_values(q));
    return {std::move(policy), value, lower, std::move(q)};
}

BlackwellStep blackwell_policy(const PayoffAverage& average, const TargetSet& target, const EpsilonGrid& grid,
                               const OracleConfig& config) {
    if (target.dimension() != static_cast<std::size_t>(grid.outcomes()) * static_cast<std::size_t>(grid.size()))
        throw ParameterError("blackwell_policy: target set does not match the grid");
    const BlockVector avg = average.average();
    BlackwellDiagnostics diag;
    if (target.contains(avg.values())) return {Policy::uniform(grid.size()), diag};

    const Projection proj = project(target, avg.values());
    diag.inside_target = false;
    diag.threshold = proj.threshold;
    double distance_sq = 0.0;
    for (std::size_t i = 0; i < proj.point.size(); ++i) {
        const double d = avg.values()[i] - proj.point[i];
        distance_sq += d * d;
        diag.offset += d * proj.point[i];
    }
    diag.distance = std::sqrt(distance_sq);

    const GameMatrix gamma = compute_gamma(avg, proj.point, grid);
    diag.scale = gamma.scale();
    if (diag.scale == 0.0) return {Policy::uniform(grid.size()), diag};

    MinimaxSolution solution = config.method == MinimaxMethod::exact
                                   ? solve_minimax_exact(gamma, config.relative_tolerance * diag.scale)
                                   : solve_minimax_mw(gamma, config.delta);
    diag.game_value = solution.value;
    diag.violation = solution.value - diag.offset;
    return {std::move(solution.policy), diag};
}

}  // namespace calib
