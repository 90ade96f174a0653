#include "calib/projection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "calib/errors.hpp"

namespace calib {

namespace {

double l1_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
}

// sum_i (|x_i| - mu)^+
double shrunk_mass(std::span<const double> x, double mu) {
    double s = 0.0;
    for (double v : x) s += std::max(std::abs(v) - mu, 0.0);
    return s;
}

std::vector<double> soft_threshold(std::span<const double> x, double mu) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double s = x[i] > 0.0 ? 1.0 : -1.0;
        y[i] = s * std::max(s * x[i] - mu, 0.0);
    }
    return y;
}

double threshold_by_sort(std::span<const double> x, double epsilon) {
    std::vector<double> mags(x.size());
    std::transform(x.begin(), x.end(), mags.begin(), [](double v) { return std::abs(v); });
    std::sort(mags.begin(), mags.end(), std::greater<>());
    double prefix = 0.0;
    double mu = 0.0;
    // mu_j = (sum_{i<=j} |x|_(i) - eps) / j is the level when the top j entries
    // are active; the answer is the last j for which |x|_(j) > mu_j.
    for (std::size_t j = 0; j < mags.size(); ++j) {
        prefix += mags[j];
        const double candidate = (prefix - epsilon) / static_cast<double>(j + 1);
        if (mags[j] > candidate)
            mu = candidate;
        else
            break;
    }
    return std::max(mu, 0.0);
}

double threshold_by_bisection(std::span<const double> x, double epsilon, double precision) {
    double lo = 0.0;
    double hi = 0.0;
    for (double v : x) hi = std::max(hi, std::abs(v));
    // invariant: shrunk_mass(lo) > epsilon >= shrunk_mass(hi)
    while (hi - lo >= precision) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (shrunk_mass(x, mid) > epsilon)
            lo = mid;
        else
            hi = mid;
    }

    // The active set is {|x_i| > hi} plus some of the entries inside (lo, hi].
    // Try each candidate support, largest magnitudes first; the closed form
    // mu = (sum_S |x_i| - eps) / |S| is mu* when it is consistent with S.
    double support_sum = 0.0;
    std::size_t support_size = 0;
    std::vector<double> ambiguous;
    for (double v : x) {
        const double mag = std::abs(v);
        if (mag > hi) {
            support_sum += mag;
            ++support_size;
        } else if (mag > lo) {
            ambiguous.push_back(mag);
        }
    }
    std::sort(ambiguous.begin(), ambiguous.end(), std::greater<>());
    for (std::size_t extra = 0;; ++extra) {
        if (support_size > 0) {
            const double mu = (support_sum - epsilon) / static_cast<double>(support_size);
            const double smallest_inside = extra == 0 ? hi : ambiguous[extra - 1];
            const double largest_outside = extra < ambiguous.size() ? ambiguous[extra] : lo;
            if (mu >= lo && mu <= hi && mu <= smallest_inside && mu >= largest_outside) return std::max(mu, 0.0);
        }
        if (extra == ambiguous.size()) break;
        support_sum += ambiguous[extra];
        ++support_size;
    }
    return hi;
}

}  // namespace

TargetSet::TargetSet(double epsilon, std::size_t dimension) : epsilon_(epsilon), dimension_(dimension) {
    if (!std::isfinite(epsilon) || epsilon <= 0.0) throw ParameterError("target set epsilon must be positive");
    if (dimension == 0) throw ParameterError("target set dimension must be positive");
}

bool TargetSet::contains(std::span<const double> x) const {
    if (x.size() != dimension_) throw ParameterError("membership: dimension mismatch");
    return l1_norm(x) <= epsilon_ + kMembershipSlack;
}

Projection project(const TargetSet& target, std::span<const double> x, ProjectionMethod method, double precision) {
    if (x.size() != target.dimension()) throw ParameterError("project: dimension mismatch");
    for (double v : x)
        if (!std::isfinite(v)) throw ParameterError("project: non-finite input");
    if (!(precision > 0.0)) throw ParameterError("project: precision must be positive");

    if (target.contains(x)) return {std::vector<double>(x.begin(), x.end()), 0.0};

    const double mu = method == ProjectionMethod::sort_exact ? threshold_by_sort(x, target.epsilon())
                                                             : threshold_by_bisection(x, target.epsilon(), precision);
    return {soft_threshold(x, mu), mu};
}

}  // namespace calib
