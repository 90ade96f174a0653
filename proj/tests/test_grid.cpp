#include <random>

#include "calib/errors.hpp"
#include "calib/grid.hpp"
#include "doctest.h"
#include "oracles.hpp"

using calib::Distribution;
using calib::EpsilonGrid;

namespace {

std::vector<double> probs(const Distribution& d) { return {d.probs().begin(), d.probs().end()}; }

}  // namespace

TEST_CASE("distribution validation") {
    CHECK_NOTHROW(Distribution({0.25, 0.75}));
    CHECK_THROWS_AS(Distribution({0.5, 0.6}), calib::ParameterError);
    CHECK_THROWS_AS(Distribution({-0.1, 1.1}), calib::ParameterError);
    CHECK_THROWS_AS(Distribution(std::vector<double>{}), calib::ParameterError);
    CHECK(probs(Distribution::dirac(3, 1)) == std::vector<double>{0, 1, 0});
}

TEST_CASE("build_grid examples") {
    SUBCASE("A=2, eps=1") {
        EpsilonGrid g(2, 1.0);
        CHECK(g.denominator() == 2);
        REQUIRE(g.size() == 3);
        CHECK(probs(g.point(0)) == std::vector<double>{0, 1});
        CHECK(probs(g.point(1)) == std::vector<double>{0.5, 0.5});
        CHECK(probs(g.point(2)) == std::vector<double>{1, 0});
    }
    SUBCASE("A=3, eps=1") {
        EpsilonGrid g(3, 1.0);
        CHECK(g.denominator() == 3);
        CHECK(g.size() == static_cast<int>(oracle::compositions(3, 3).size()));
        CHECK(g.size() == 10);
    }
    SUBCASE("A=2, eps=2 is the vertex grid") {
        EpsilonGrid g(2, 2.0);
        CHECK(g.denominator() == 1);
        REQUIRE(g.size() == 2);
        CHECK(probs(g.point(0)) == std::vector<double>{0, 1});
        CHECK(probs(g.point(1)) == std::vector<double>{1, 0});
    }
    SUBCASE("decimal epsilons do not round the denominator up") {
        CHECK(EpsilonGrid(2, 0.1).denominator() == 20);
        CHECK(EpsilonGrid(3, 0.2).denominator() == 15);
        CHECK(EpsilonGrid(3, 0.7).denominator() == 5);
    }
}

TEST_CASE("build_grid rejects bad parameters") {
    CHECK_THROWS_AS(EpsilonGrid(1, 0.5), calib::ParameterError);
    CHECK_THROWS_AS(EpsilonGrid(2, 0.0), calib::ParameterError);
    CHECK_THROWS_AS(EpsilonGrid(2, 2.5), calib::ParameterError);
    CHECK_THROWS_AS(EpsilonGrid(12, 0.01), calib::ParameterError);  // astronomically many points
}

TEST_CASE("grid points are the lexicographic compositions") {
    for (int A = 2; A <= 5; ++A)
        for (double eps : {2.0, 1.0, 0.5, 0.3}) {
            EpsilonGrid g(A, eps);
            const auto expected = oracle::compositions(g.denominator(), A);
            REQUIRE(g.size() == static_cast<int>(expected.size()));
            CHECK(static_cast<std::size_t>(g.size()) == EpsilonGrid::point_count(A, g.denominator()));
            for (int k = 0; k < g.size(); ++k) {
                const auto n = g.numerators(k);
                CHECK(std::vector<int>(n.begin(), n.end()) == expected[static_cast<std::size_t>(k)]);
                CHECK(g.index_of(n) == k);
            }
        }
}

TEST_CASE("nearest examples") {
    EpsilonGrid g(2, 1.0);
    const int k = g.nearest(Distribution({0.3, 0.7}));
    CHECK(probs(g.point(k)) == std::vector<double>{0.5, 0.5});
    CHECK(calib::l1_distance(g.point(k).probs(), std::vector<double>{0.3, 0.7}) == doctest::Approx(0.4));
    CHECK(g.nearest(Distribution({1.0, 0.0})) == 2);
    CHECK_THROWS_AS(g.nearest(Distribution({0.2, 0.3, 0.5})), calib::ParameterError);
}

TEST_CASE("nearest ties go to the lowest coordinate") {
    EpsilonGrid g(3, 1.0);  // m = 3
    // m*q = (1.5, 1.5, 0): both fractions .5, coordinate 0 gets the unit
    const int k = g.nearest(Distribution({0.5, 0.5, 0.0}));
    const auto n = g.numerators(k);
    CHECK(std::vector<int>(n.begin(), n.end()) == std::vector<int>{2, 1, 0});
}

TEST_CASE("grid points are fixed points of nearest") {
    for (int A = 2; A <= 4; ++A) {
        EpsilonGrid g(A, 0.4);
        for (int k = 0; k < g.size(); ++k) CHECK(g.nearest(g.point(k)) == k);
    }
}

TEST_CASE("nearest covers within epsilon and matches brute force") {
    std::mt19937_64 rng(20240611);
    for (int A = 2; A <= 4; ++A) {
        EpsilonGrid g(A, A == 2 ? 0.1 : 0.5);
        const int draws = A == 2 ? 10000 : 2000;
        for (int i = 0; i < draws; ++i) {
            const auto q = oracle::random_simplex(rng, A);
            const int k = g.nearest(Distribution(q));
            const double d = oracle::l1(probs(g.point(k)), q);
            REQUIRE(d <= g.epsilon() + 1e-12);
            REQUIRE(d <= static_cast<double>(A) / g.denominator() + 1e-12);
            REQUIRE(oracle::near(d, oracle::brute_nearest_distance(q, g.denominator()), 1e-12));
            // each coordinate moved by less than 1/m
            for (int a = 0; a < A; ++a)
                REQUIRE(std::abs(g.point(k)[a] - q[static_cast<std::size_t>(a)]) < 1.0 / g.denominator());
        }
    }
}
