#include <random>

#include "calib/errors.hpp"
#include "calib/payoff.hpp"
#include "doctest.h"
#include "oracles.hpp"

using calib::EpsilonGrid;
using calib::PayoffAverage;

TEST_CASE("payoff_vector examples") {
    EpsilonGrid g(2, 1.0);  // {(0,1), (1/2,1/2), (1,0)}
    const auto m = calib::payoff_vector(g, 1, 0).dense();
    const std::vector<double> expected{0, 0, -0.5, 0.5, 0, 0};
    CHECK(std::vector<double>(m.values().begin(), m.values().end()) == expected);
    CHECK(calib::payoff_vector(g, 0, 1).dense().l1_norm() == 0.0);  // p_0 = delta_1
    CHECK(calib::payoff_vector(g, 2, 0).dense().l1_norm() == 0.0);  // p_2 = delta_0
    CHECK_THROWS_AS(calib::payoff_vector(g, 3, 0), calib::ParameterError);
    CHECK_THROWS_AS(calib::payoff_vector(g, 0, 2), calib::ParameterError);
}

TEST_CASE("payoff vectors have Euclidean norm at most 2") {
    for (int A = 2; A <= 4; ++A) {
        EpsilonGrid g(A, 0.5);
        for (int k = 0; k < g.size(); ++k)
            for (int a = 0; a < A; ++a) {
                const auto m = calib::payoff_vector(g, k, a);
                CHECK(m.l2_norm() <= 2.0);
                CHECK(m.dense().l2_norm() == doctest::Approx(m.l2_norm()));
            }
    }
}

TEST_CASE("update_average examples") {
    EpsilonGrid g(2, 1.0);
    PayoffAverage avg(g);
    CHECK(avg.rounds() == 0);
    CHECK(avg.average().l1_norm() == 0.0);

    avg.update(g, 1, 0);
    CHECK(avg.rounds() == 1);
    const auto one = avg.average();
    const auto m = calib::payoff_vector(g, 1, 0).dense();
    CHECK(std::vector<double>(one.values().begin(), one.values().end()) ==
          std::vector<double>(m.values().begin(), m.values().end()));

    avg.update(g, 1, 1);
    CHECK(avg.average().block(1)[0] == 0.0);
    CHECK(avg.average().block(1)[1] == 0.0);

    PayoffAverage perfect(g);
    for (int i = 0; i < 100; ++i) perfect.update(g, i % 2 == 0 ? 0 : 2, i % 2 == 0 ? 1 : 0);
    CHECK(perfect.rounds() == 100);
    CHECK(perfect.average().l1_norm() == 0.0);
}

TEST_CASE("incremental average matches batch recomputation after 1e5 rounds") {
    EpsilonGrid g(3, 0.5);
    PayoffAverage avg(g);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> pick_k(0, g.size() - 1), pick_a(0, 2);
    std::vector<std::pair<int, int>> rounds;
    for (int t = 0; t < 100000; ++t) {
        rounds.emplace_back(pick_k(rng), pick_a(rng));
        const int k_changed = rounds.back().first;
        const auto before = avg.sum();
        avg.update(g, rounds.back().first, rounds.back().second);
        if (t < 50)  // only block k moves
            for (int k = 0; k < g.size(); ++k)
                if (k != k_changed)
                    for (int a = 0; a < 3; ++a) CHECK(avg.sum().block(k)[static_cast<std::size_t>(a)] == before.block(k)[static_cast<std::size_t>(a)]);
    }
    std::vector<double> batch(avg.sum().dimension(), 0.0);
    for (auto [k, a] : rounds) {
        const auto m = calib::payoff_vector(g, k, a);
        for (int i = 0; i < 3; ++i) batch[static_cast<std::size_t>(k * 3 + i)] += m.block[static_cast<std::size_t>(i)] / 100000.0;
    }
    const auto incremental = avg.average();
    for (std::size_t i = 0; i < batch.size(); ++i) CHECK(oracle::near(incremental.values()[i], batch[i], 1e-10));
    CHECK(incremental.l1_norm() <= 2.0);
}

TEST_CASE("update_average rejects a foreign grid") {
    EpsilonGrid g(2, 1.0), other(2, 0.5);
    PayoffAverage avg(g);
    CHECK_THROWS_AS(avg.update(other, 0, 0), calib::ParameterError);
    CHECK_THROWS_AS(avg.update(g, 0, 5), calib::ParameterError);
}
