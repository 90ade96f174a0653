#include <filesystem>
#include <fstream>

#include "calib/errors.hpp"
#include "calib/nature.hpp"
#include "doctest.h"

using calib::Distribution;
using calib::Nature;
using calib::Observation;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / ("calib_test_" + name);
    std::ofstream(path) << body;
    return path;
}

}  // namespace

TEST_CASE("iid Dirac always plays its outcome") {
    Nature n(calib::IidSpec{Distribution({1.0, 0.0})}, 2, 1);
    for (int i = 0; i < 100; ++i) CHECK(n.next_outcome({}) == 0);
}

TEST_CASE("iid frequencies follow q") {
    Nature n(calib::IidSpec{Distribution({0.3, 0.7})}, 2, 1);
    int ones = 0;
    for (int i = 0; i < 20000; ++i) ones += n.next_outcome({});
    CHECK(ones / 20000.0 == doctest::Approx(0.7).epsilon(0.03));
}

TEST_CASE("markov with identity transitions is constant") {
    calib::MarkovSpec spec{{Distribution({1.0, 0.0, 0.0}), Distribution({0.0, 1.0, 0.0}), Distribution({0.0, 0.0, 1.0})}, 2};
    Nature n(spec, 3, 1);
    std::vector<Observation> history;
    for (int i = 0; i < 20; ++i) {
        const int a = n.next_outcome(history);
        CHECK(a == 2);
        history.push_back({Distribution::uniform(3), a});
    }
}

TEST_CASE("sequence replays cyclically") {
    Nature n(calib::SequenceSpec{{1, 0, 0}}, 2, 1);
    std::vector<Observation> history;
    std::vector<int> seen;
    for (int i = 0; i < 7; ++i) {
        seen.push_back(n.next_outcome(history));
        history.push_back({Distribution::uniform(2), seen.back()});
    }
    CHECK(seen == std::vector<int>{1, 0, 0, 1, 0, 0, 1});
}

TEST_CASE("contrarian plays the least likely outcome and needs the forecast") {
    Nature n(calib::ContrarianSpec{}, 2, 1);
    CHECK(n.requires_current_forecast());
    const Distribution f({0.9, 0.1});
    CHECK(n.next_outcome({}, &f) == 1);
    const Distribution tie({0.5, 0.5});
    CHECK(n.next_outcome({}, &tie) == 0);
    CHECK_THROWS_AS(n.next_outcome({}), calib::ConfigError);
}

TEST_CASE("greedy pushes the previous forecast's bin away from calibration") {
    Nature n(calib::GreedySpec{}, 2, 1);
    CHECK(n.next_outcome({}) == 0);
    // bin (0.8, 0.2) has seen outcome 0 once: sum = (-0.2, 0.2). Repeating the
    // forecast, outcome 0 gives |-.4|+|.4| = .8, outcome 1 gives |.6|+|-.6| = 1.2
    std::vector<Observation> history{{Distribution({0.8, 0.2}), 0}};
    CHECK(n.next_outcome(history) == 1);
    history.push_back({Distribution({0.8, 0.2}), 1});
    history.push_back({Distribution({0.8, 0.2}), 1});
    // sum = (1.4,-1.4): outcome 1 grows it to 4.4, outcome 0 only gives 2.4
    CHECK(n.next_outcome(history) == 1);
    // only the bin of the latest forecast matters: (0.5,0.5) holds (0.5,-0.5)
    history.push_back({Distribution({0.5, 0.5}), 1});
    CHECK(n.next_outcome(history) == 1);
    history.push_back({Distribution({0.5, 0.5}), 0});
    history.push_back({Distribution({0.5, 0.5}), 0});
    CHECK(n.next_outcome(history) == 0);
}

TEST_CASE("nature spec validation") {
    CHECK_THROWS_AS(Nature(calib::IidSpec{Distribution({0.5, 0.5})}, 3, 1), calib::ConfigError);
    CHECK_THROWS_AS(Nature(calib::SequenceSpec{{}}, 2, 1), calib::ConfigError);
    CHECK_THROWS_AS(Nature(calib::SequenceSpec{{0, 2}}, 2, 1), calib::ConfigError);
}

TEST_CASE("parse_nature_spec") {
    CHECK(std::holds_alternative<calib::GreedySpec>(calib::parse_nature_spec("greedy", 2)));
    CHECK(std::holds_alternative<calib::ContrarianSpec>(calib::parse_nature_spec("contrarian", 2)));
    const auto iid = std::get<calib::IidSpec>(calib::parse_nature_spec("iid:0.3,0.7", 2));
    CHECK(iid.q == Distribution({0.3, 0.7}));
    CHECK_THROWS_AS(calib::parse_nature_spec("iid:0.3,0.6", 2), calib::ConfigError);
    CHECK_THROWS_AS(calib::parse_nature_spec("iid:0.3", 2), calib::ConfigError);
    CHECK_THROWS_AS(calib::parse_nature_spec("iid:a,b", 2), calib::ConfigError);
    CHECK_THROWS_AS(calib::parse_nature_spec("oracle", 2), calib::ConfigError);
    CHECK_THROWS_AS(calib::parse_nature_spec("seq:/nonexistent/file", 2), calib::ConfigError);

    const auto seq_path = temp_file("seq.txt", "0\n1\n\n# comment\n1\n");
    const auto seq = std::get<calib::SequenceSpec>(calib::parse_nature_spec("seq:" + seq_path.string(), 2));
    CHECK(seq.outcomes == std::vector<int>{0, 1, 1});
    CHECK_THROWS_AS(calib::read_sequence_file(temp_file("bad_seq.txt", "0\n3\n"), 2), calib::ConfigError);
    CHECK_THROWS_AS(calib::read_sequence_file(temp_file("empty_seq.txt", "# nothing\n"), 2), calib::ConfigError);

    const auto markov_path = temp_file("markov.txt", "1\n0.9, 0.1\n0.2 0.8\n");
    const auto markov = std::get<calib::MarkovSpec>(calib::parse_nature_spec("markov:" + markov_path.string(), 2));
    CHECK(markov.start == 1);
    CHECK(markov.rows[1] == Distribution({0.2, 0.8}));
    CHECK_THROWS_AS(calib::read_markov_file(temp_file("bad_markov.txt", "0\n0.9 0.2\n0.5 0.5\n"), 2), calib::ConfigError);
}
