#include "calib/payoff.hpp"

#include <cmath>

#include "calib/errors.hpp"

namespace calib {

BlockVector::BlockVector(int outcomes, int blocks)
    : BlockVector(outcomes, blocks,
                  std::vector<double>(static_cast<std::size_t>(outcomes) * static_cast<std::size_t>(blocks), 0.0)) {}

BlockVector::BlockVector(int outcomes, int blocks, std::vector<double> values)
    : outcomes_(outcomes), blocks_(blocks), values_(std::move(values)) {
    if (outcomes < 1 || blocks < 1) throw ParameterError("block vector dimensions must be positive");
    if (values_.size() != static_cast<std::size_t>(outcomes) * static_cast<std::size_t>(blocks))
        throw ParameterError("block vector: value count does not match A * N");
}

std::span<const double> BlockVector::block(int k) const {
    if (k < 0 || k >= blocks_) throw ParameterError("block index out of range");
    return std::span<const double>(values_).subspan(static_cast<std::size_t>(k) * outcomes_,
                                                    static_cast<std::size_t>(outcomes_));
}

std::span<double> BlockVector::block(int k) {
    if (k < 0 || k >= blocks_) throw ParameterError("block index out of range");
    return std::span<double>(values_).subspan(static_cast<std::size_t>(k) * outcomes_,
                                              static_cast<std::size_t>(outcomes_));
}

double BlockVector::l1_norm() const {
    double s = 0.0;
    for (double v : values_) s += std::abs(v);
    return s;
}

double BlockVector::l2_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s);
}

BlockVector PayoffVector::dense() const {
    BlockVector out(outcomes, blocks);
    auto target = out.block(k);
    for (std::size_t i = 0; i < block.size(); ++i) target[i] = block[i];
    return out;
}

double PayoffVector::l2_norm() const {
    double s = 0.0;
    for (double v : block) s += v * v;
    return std::sqrt(s);
}

PayoffVector payoff_vector(const EpsilonGrid& grid, int k, int a) {
    if (a < 0 || a >= grid.outcomes()) throw ParameterError("payoff_vector: outcome out of range");
    const auto& p = grid.point(k);
    PayoffVector out{grid.outcomes(), grid.size(), k, std::vector<double>(p.probs().begin(), p.probs().end())};
    out.block[static_cast<std::size_t>(a)] -= 1.0;
    return out;
}

PayoffAverage::PayoffAverage(const EpsilonGrid& grid) : sum_(grid.outcomes(), grid.size()) {}

void PayoffAverage::update(const EpsilonGrid& grid, int k, int a) {
    if (grid.outcomes() != sum_.outcomes() || grid.size() != sum_.blocks())
        throw ParameterError("update_average: grid does not match the average's dimensions");
    if (a < 0 || a >= grid.outcomes()) throw ParameterError("update_average: outcome out of range");
    auto target = sum_.block(k);
    const auto p = grid.point(k).probs();
    for (std::size_t i = 0; i < target.size(); ++i) target[i] += p[i];
    target[static_cast<std::size_t>(a)] -= 1.0;
    ++rounds_;
}

BlockVector PayoffAverage::average() const {
    BlockVector out = sum_;
    if (rounds_ == 0) return out;
    const auto count = static_cast<double>(rounds_);
    for (double& v : out.values()) v /= count;
    return out;
}

}  // namespace calib
