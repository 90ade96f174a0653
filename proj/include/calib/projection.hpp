#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace calib {

// C = { x in R^{A*N} : sum_k ||x_k||_1 <= epsilon }. Summing block l1 norms is
// the flat l1 norm, so C is the l1 ball of radius epsilon.
class TargetSet {
public:
    static constexpr double kMembershipSlack = 1e-12;

    TargetSet(double epsilon, std::size_t dimension);

    double epsilon() const { return epsilon_; }
    std::size_t dimension() const { return dimension_; }

    bool contains(std::span<const double> x) const;

private:
    double epsilon_;
    std::size_t dimension_;
};

enum class ProjectionMethod {
    sort_exact,     // sort magnitudes, scan for the soft-threshold level
    binary_search,  // bisect on the threshold, then solve on the located support
};

struct Projection {
    std::vector<double> point;
    // Soft-threshold level mu*; 0 when x was already in C.
    double threshold = 0.0;
};

inline constexpr double kDefaultThresholdPrecision = 1e-10;

/**
 * Euclidean projection onto C by soft thresholding:
 *   y_i(mu) = s_i * (s_i * x_i - mu)^+,  s_i = sign(x_i), sign(0) = -1,
 * with mu* the smallest nonnegative level for which sum_i |y_i(mu)| <= epsilon.
 *
 * binary_search brackets mu* in [0, max |x_i|] until the bracket is narrower
 * than `precision`, then recovers mu* exactly from the support the bracket
 * pins down (falling back to the bracket's feasible end if the support is
 * ambiguous). Cost O(dim * log(max|x| / precision)).
 */
Projection project(const TargetSet& target, std::span<const double> x,
                   ProjectionMethod method = ProjectionMethod::sort_exact,
                   double precision = kDefaultThresholdPrecision);

}  // namespace calib
