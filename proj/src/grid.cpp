#include "calib/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "calib/errors.hpp"

namespace calib {

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw ParameterError("distribution must have at least one outcome");
    double total = 0.0;
    for (double p : probs_) {
        if (!std::isfinite(p) || p < 0.0)
            throw ParameterError("distribution entries must be finite and nonnegative");
        total += p;
    }
    if (std::abs(total - 1.0) > kSumTolerance)
        throw ParameterError("distribution entries must sum to 1 (got " + std::to_string(total) + ")");
}

Distribution Distribution::dirac(int outcomes, int a) {
    if (outcomes < 1 || a < 0 || a >= outcomes) throw ParameterError("dirac: outcome out of range");
    std::vector<double> probs(static_cast<std::size_t>(outcomes), 0.0);
    probs[static_cast<std::size_t>(a)] = 1.0;
    return Distribution(std::move(probs));
}

Distribution Distribution::uniform(int outcomes) {
    if (outcomes < 1) throw ParameterError("uniform: need at least one outcome");
    return Distribution(std::vector<double>(static_cast<std::size_t>(outcomes), 1.0 / outcomes));
}

double l1_distance(std::span<const double> lhs, std::span<const double> rhs) {
    if (lhs.size() != rhs.size()) throw ParameterError("l1_distance: dimension mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) d += std::abs(lhs[i] - rhs[i]);
    return d;
}

int EpsilonGrid::denominator_for(int outcomes, double epsilon) {
    const double ratio = outcomes / epsilon;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) <= 1e-9 * ratio) return static_cast<int>(rounded);
    return static_cast<int>(std::ceil(ratio));
}

std::size_t EpsilonGrid::point_count(int outcomes, int denominator) {
    // binomial(m + A - 1, A - 1), saturating above kMaxPoints
    const std::size_t n = static_cast<std::size_t>(denominator + outcomes - 1);
    const std::size_t r = static_cast<std::size_t>(outcomes - 1);
    std::size_t result = 1;
    for (std::size_t i = 1; i <= r; ++i) {
        // result * (n - r + i) is divisible by i at every step
        result = result * (n - r + i) / i;
        if (result > kMaxPoints * 16) return kMaxPoints + 1;
    }
    return result;
}

EpsilonGrid::EpsilonGrid(int outcomes, double epsilon) : outcomes_(outcomes), epsilon_(epsilon) {
    if (outcomes < 2) throw ParameterError("grid needs at least 2 outcomes");
    if (!std::isfinite(epsilon) || epsilon <= 0.0 || epsilon > 2.0)
        throw ParameterError("grid epsilon must lie in (0, 2]");
    denominator_ = denominator_for(outcomes, epsilon);
    const std::size_t count = point_count(outcomes, denominator_);
    if (count > kMaxPoints)
        throw ParameterError("grid too large: " + std::to_string(outcomes) + " outcomes at epsilon " +
                             std::to_string(epsilon));

    const auto m = static_cast<std::size_t>(denominator_);
    const auto parts = static_cast<std::size_t>(outcomes);
    compositions_.assign(parts + 1, std::vector<std::size_t>(m + 1, 0));
    compositions_[0][0] = 1;
    for (std::size_t j = 1; j <= parts; ++j) {
        std::size_t running = 0;
        for (std::size_t s = 0; s <= m; ++s) {
            running += compositions_[j - 1][s];
            compositions_[j][s] = running;
        }
    }

    points_.reserve(count);
    numerators_.reserve(count * parts);
    std::vector<int> current(parts, 0);
    // Odometer over compositions in lexicographic order.
    current[parts - 1] = denominator_;
    const double scale = 1.0 / denominator_;
    while (true) {
        numerators_.insert(numerators_.end(), current.begin(), current.end());
        std::vector<double> probs(parts);
        for (std::size_t i = 0; i < parts; ++i) probs[i] = current[i] * scale;
        points_.emplace_back(std::move(probs));

        // Advance: find the rightmost position i < A-1 that can be incremented,
        // i.e. whose suffix (i+1..A-1) still holds mass.
        std::size_t i = parts - 1;
        while (i > 0 && current[i] == 0) --i;
        if (i == 0) break;
        const int suffix = current[i];
        current[i] = 0;
        current[i - 1] += 1;
        current[parts - 1] = suffix - 1;
    }
}

const Distribution& EpsilonGrid::point(int k) const {
    if (k < 0 || k >= size()) throw ParameterError("grid index out of range");
    return points_[static_cast<std::size_t>(k)];
}

std::span<const int> EpsilonGrid::numerators(int k) const {
    if (k < 0 || k >= size()) throw ParameterError("grid index out of range");
    return std::span<const int>(numerators_).subspan(static_cast<std::size_t>(k) * outcomes_,
                                                     static_cast<std::size_t>(outcomes_));
}

int EpsilonGrid::index_of(std::span<const int> numerators) const {
    if (numerators.size() != static_cast<std::size_t>(outcomes_))
        throw ParameterError("index_of: dimension mismatch");
    int remaining = denominator_;
    std::size_t rank = 0;
    for (std::size_t i = 0; i + 1 < numerators.size(); ++i) {
        const int n = numerators[i];
        if (n < 0 || n > remaining) throw ParameterError("index_of: not a composition of the denominator");
        const std::size_t tail_parts = numerators.size() - 1 - i;
        for (int v = 0; v < n; ++v) rank += compositions_[tail_parts][static_cast<std::size_t>(remaining - v)];
        remaining -= n;
    }
    if (numerators.back() != remaining) throw ParameterError("index_of: not a composition of the denominator");
    return static_cast<int>(rank);
}

int EpsilonGrid::nearest(const Distribution& q) const {
    if (q.outcomes() != outcomes_) throw ParameterError("nearest: dimension mismatch");
    const auto parts = static_cast<std::size_t>(outcomes_);
    std::vector<int> rounded(parts);
    std::vector<double> fraction(parts);
    int assigned = 0;
    for (std::size_t i = 0; i < parts; ++i) {
        const double scaled = q.probs()[i] * denominator_;
        const double floor_value = std::floor(scaled);
        rounded[i] = static_cast<int>(floor_value);
        fraction[i] = scaled - floor_value;
        assigned += rounded[i];
    }

    std::vector<std::size_t> order(parts);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // stable_sort keeps the lowest coordinate first among equal fractions
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t lhs, std::size_t rhs) { return fraction[lhs] > fraction[rhs]; });
    int leftover = denominator_ - assigned;
    for (std::size_t j = 0; leftover > 0; j = (j + 1) % parts, --leftover) ++rounded[order[j]];
    // q summing to slightly above 1 can overshoot; take back from the smallest fractions
    for (std::size_t j = parts; leftover < 0;) {
        j = (j == 0 ? parts : j) - 1;
        if (rounded[order[j]] > 0) {
            --rounded[order[j]];
            ++leftover;
        }
    }
    return index_of(rounded);
}

}  // namespace calib
