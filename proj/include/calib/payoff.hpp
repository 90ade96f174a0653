#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "calib/grid.hpp"

namespace calib {

// Dense element of R^{A * N}, viewed as N blocks of R^A. Block k occupies
// components k*A .. k*A + A - 1.
class BlockVector {
public:
    BlockVector(int outcomes, int blocks);
    BlockVector(int outcomes, int blocks, std::vector<double> values);

    int outcomes() const { return outcomes_; }
    int blocks() const { return blocks_; }
    std::size_t dimension() const { return values_.size(); }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    std::span<const double> block(int k) const;
    std::span<double> block(int k);

    double l1_norm() const;
    double l2_norm() const;

private:
    int outcomes_;
    int blocks_;
    std::vector<double> values_;
};

// m(k, a): zero everywhere except block k, which holds p_k - delta_a.
struct PayoffVector {
    int outcomes;
    int blocks;
    int k;
    std::vector<double> block;

    BlockVector dense() const;
    double l2_norm() const;
};

PayoffVector payoff_vector(const EpsilonGrid& grid, int k, int a);

// Running average of m(K_t, a_t). The running sum is kept and divided on read,
// so the average never accumulates update drift.
class PayoffAverage {
public:
    explicit PayoffAverage(const EpsilonGrid& grid);

    void update(const EpsilonGrid& grid, int k, int a);

    std::int64_t rounds() const { return rounds_; }
    int outcomes() const { return sum_.outcomes(); }
    int blocks() const { return sum_.blocks(); }

    const BlockVector& sum() const { return sum_; }
    // Zero vector when no round has been played.
    BlockVector average() const;

private:
    BlockVector sum_;
    std::int64_t rounds_ = 0;
};

}  // namespace calib
