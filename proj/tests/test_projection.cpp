#include <random>

#include "calib/errors.hpp"
#include "calib/projection.hpp"
#include "doctest.h"
#include "oracles.hpp"

using calib::Projection;
using calib::ProjectionMethod;
using calib::TargetSet;

namespace {

std::vector<double> padded(std::vector<double> head, std::size_t dim) {
    head.resize(dim, 0.0);
    return head;
}

double l1(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += std::abs(x);
    return s;
}

constexpr ProjectionMethod kMethods[] = {ProjectionMethod::sort_exact, ProjectionMethod::binary_search};

}  // namespace

TEST_CASE("member examples") {
    TargetSet c(1.0, 6);
    CHECK(c.contains(padded({}, 6)));
    CHECK(c.contains(padded({0.6, -0.4}, 6)));
    CHECK_FALSE(c.contains(padded({0.8, -0.6}, 6)));
    CHECK_THROWS_AS(c.contains(padded({}, 5)), calib::ParameterError);
    CHECK_THROWS_AS(TargetSet(0.0, 3), calib::ParameterError);
}

TEST_CASE("project examples") {
    for (auto method : kMethods) {
        CAPTURE(static_cast<int>(method));
        TargetSet c(1.0, 6);
        const auto inside = padded({0.3, -0.2, 0.1}, 6);
        const Projection same = calib::project(c, inside, method);
        CHECK(same.point == inside);
        CHECK(same.threshold == 0.0);

        const Projection one = calib::project(TargetSet(0.5, 6), padded({1.0}, 6), method);
        CHECK(oracle::near(one.point[0], 0.5, 1e-12));
        CHECK(oracle::near(one.threshold, 0.5, 1e-12));
        for (std::size_t i = 1; i < 6; ++i) CHECK(one.point[i] == 0.0);

        const Projection two = calib::project(c, padded({0.8, -0.6}, 6), method);
        CHECK(oracle::near(two.point[0], 0.6, 1e-12));
        CHECK(oracle::near(two.point[1], -0.4, 1e-12));
        CHECK(oracle::near(two.threshold, 0.2, 1e-12));
    }
}

TEST_CASE("two-dimensional projections agree with exhaustive boundary search") {
    // (0.8, -0.6) onto the unit diamond: the frozen answer (0.6, -0.4)
    const auto brute = oracle::brute_project_2d({0.8, -0.6}, 1.0);
    CHECK(oracle::near(brute[0], 0.6, 1e-4));
    CHECK(oracle::near(brute[1], -0.4, 1e-4));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    for (int i = 0; i < 40; ++i) {
        const std::vector<double> x{coord(rng), coord(rng)};
        const double eps = 0.5;
        TargetSet c(eps, 2);
        if (c.contains(x)) continue;
        const auto expected = oracle::brute_project_2d(x, eps);
        const auto got = calib::project(c, x).point;
        CHECK(oracle::near(got[0], expected[0], 1e-4));
        CHECK(oracle::near(got[1], expected[1], 1e-4));
    }
}

TEST_CASE("zero entries take the negative sign and stay zero") {
    TargetSet c(0.5, 4);
    const auto p = calib::project(c, std::vector<double>{0.0, 2.0, 0.0, -1.0});
    CHECK(p.point[0] == 0.0);
    CHECK(p.point[2] == 0.0);
}

TEST_CASE("project rejects bad input") {
    TargetSet c(1.0, 3);
    CHECK_THROWS_AS(calib::project(c, std::vector<double>{1.0, 2.0}), calib::ParameterError);
    CHECK_THROWS_AS(calib::project(c, std::vector<double>{1.0, NAN, 0.0}), calib::ParameterError);
    CHECK_THROWS_AS(calib::project(c, std::vector<double>{1.0, INFINITY, 0.0}), calib::ParameterError);
}

TEST_CASE("projection properties on random inputs") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> entry(-2.0, 2.0);
    std::uniform_int_distribution<int> dim_pick(1, 300);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const auto dim = static_cast<std::size_t>(dim_pick(rng));
        const double eps = std::vector<double>{0.1, 0.5, 1.0, 3.0}[static_cast<std::size_t>(trial % 4)];
        std::vector<double> x(dim);
        for (double& v : x) v = entry(rng);
        if (trial % 7 == 0) std::fill(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(dim / 2), 1.25);  // ties
        TargetSet c(eps, dim);

        const auto exact = calib::project(c, x, ProjectionMethod::sort_exact);
        const auto bisect = calib::project(c, x, ProjectionMethod::binary_search);
        for (std::size_t i = 0; i < dim; ++i) {
            REQUIRE(oracle::near(exact.point[i], bisect.point[i], 1e-8));
            // shrinkage toward zero without sign flips
            REQUIRE(std::abs(exact.point[i]) <= std::abs(x[i]));
            REQUIRE((exact.point[i] == 0.0 || (exact.point[i] > 0) == (x[i] > 0)));
        }
        for (const auto* p : {&exact, &bisect}) {
            REQUIRE(l1(p->point) <= eps + 1e-9);
            if (p->threshold > 0) REQUIRE(oracle::near(l1(p->point), eps, 1e-9));
        }

        // variational inequality against random feasible points and the vertices
        std::vector<double> residual(dim);
        for (std::size_t i = 0; i < dim; ++i) residual[i] = x[i] - exact.point[i];
        for (int j = 0; j < 50; ++j) {
            std::vector<double> c_pt(dim);
            for (double& v : c_pt) v = entry(rng);
            const double scale = eps * unit(rng) / std::max(l1(c_pt), 1e-300);
            double ip = 0;
            for (std::size_t i = 0; i < dim; ++i) ip += residual[i] * (c_pt[i] * scale - exact.point[i]);
            REQUIRE(ip <= 1e-9);
        }
        for (std::size_t i = 0; i < dim; ++i)
            for (double s : {-eps, eps}) {
                double ip = 0;
                for (std::size_t j = 0; j < dim; ++j) ip += residual[j] * ((i == j ? s : 0.0) - exact.point[j]);
                REQUIRE(ip <= 1e-9);
            }

        // idempotence
        const auto again = calib::project(c, exact.point);
        for (std::size_t i = 0; i < dim; ++i) REQUIRE(oracle::near(again.point[i], exact.point[i], 1e-9));
    }
}

TEST_CASE("binary search honours a coarse precision") {
    std::vector<double> x{3.0, -1.0, 0.5, 0.25};
    TargetSet c(1.0, 4);
    const auto exact = calib::project(c, x);
    const auto coarse = calib::project(c, x, ProjectionMethod::binary_search, 1e-3);
    CHECK(oracle::near(coarse.threshold, exact.threshold, 4e-3));
    CHECK(l1(coarse.point) <= 1.0 + 1e-12);
}
