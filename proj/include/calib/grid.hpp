#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace calib {

// A point of the probability simplex over A outcomes.
class Distribution {
public:
    static constexpr double kSumTolerance = 1e-9;

    // Throws ParameterError unless probs is a probability vector of length >= 1.
    explicit Distribution(std::vector<double> probs);

    static Distribution dirac(int outcomes, int a);
    static Distribution uniform(int outcomes);

    int outcomes() const { return static_cast<int>(probs_.size()); }
    double operator[](int a) const { return probs_[static_cast<std::size_t>(a)]; }
    std::span<const double> probs() const { return probs_; }

    friend bool operator==(const Distribution&, const Distribution&) = default;

private:
    std::vector<double> probs_;
};

double l1_distance(std::span<const double> lhs, std::span<const double> rhs);

/**
 * Uniform simplex lattice used as the forecaster's epsilon-grid.
 *
 * Points are all vectors n/m with n a composition of the denominator m into A
 * nonnegative parts, m = ceil(A / epsilon). They are stored in lexicographic
 * order of n, so point 0 is (0,...,0,1) and the last point is (1,0,...,0).
 * Rounding any q to the lattice moves every coordinate by less than 1/m, so
 * the l1 covering radius is at most A/m <= epsilon.
 *
 * Indices k are 0-based throughout.
 */
class EpsilonGrid {
public:
    // Refuse grids whose point count would exceed this.
    static constexpr std::size_t kMaxPoints = 5'000'000;

    EpsilonGrid(int outcomes, double epsilon);

    int outcomes() const { return outcomes_; }
    double epsilon() const { return epsilon_; }
    int denominator() const { return denominator_; }
    int size() const { return static_cast<int>(points_.size()); }

    const Distribution& point(int k) const;
    std::span<const int> numerators(int k) const;

    // Lexicographic rank of a composition of the denominator.
    int index_of(std::span<const int> numerators) const;

    // Largest-remainder rounding of m*q; ties go to the lowest coordinate.
    int nearest(const Distribution& q) const;

    // Ceiling of A/epsilon, forgiving representation error in epsilon.
    static int denominator_for(int outcomes, double epsilon);

    // Number of compositions of m into A parts, i.e. binomial(m + A - 1, A - 1).
    static std::size_t point_count(int outcomes, int denominator);

private:
    int outcomes_;
    double epsilon_;
    int denominator_;
    std::vector<Distribution> points_;
    std::vector<int> numerators_;  // size() * outcomes_, row-major
    // compositions_[j][s]: compositions of s into j parts, j <= A, s <= m
    std::vector<std::vector<std::size_t>> compositions_;
};

inline EpsilonGrid build_grid(int outcomes, double epsilon) { return EpsilonGrid(outcomes, epsilon); }

}  // namespace calib
