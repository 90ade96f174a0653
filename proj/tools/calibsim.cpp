// calibsim: play calibrated forecasters against Nature strategies and plot
// their calibration scores.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "calib/errors.hpp"
#include "calib/harness.hpp"

namespace {

std::filesystem::path with_seed_suffix(const std::filesystem::path& path, std::uint64_t seed) {
    auto out = path;
    out.replace_filename(path.stem().string() + "_seed" + std::to_string(seed) + path.extension().string());
    return out;
}

calib::OracleConfig parse_method(const std::string& text) {
    calib::OracleConfig config;
    if (text == "exact") return config;
    if (text == "mw" || text.rfind("mw:", 0) == 0) {
        config.method = calib::MinimaxMethod::multiplicative_weights;
        if (text.size() > 3) {
            std::size_t used = 0;
            try {
                config.delta = std::stod(text.substr(3), &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != text.size() - 3) throw calib::ConfigError("bad --method delta in '" + text + "'");
        }
        return config;
    }
    throw calib::ConfigError("--method must be exact, mw or mw:<delta>");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Calibrated forecasting simulator"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "play a forecaster against Nature and write transcript/score CSVs");
    calib::RunConfig config;
    std::string forecaster = "eps";
    std::string method = "exact";
    std::string nature = "greedy";
    std::vector<std::uint64_t> seeds;
    std::string transcript;
    std::string scores;
    std::string plot_path;
    const char* env_dir = std::getenv("CALIBSIM_OUTPUT_DIR");
    std::string out_dir = env_dir ? env_dir : ".";

    run_cmd->add_option("--outcomes,-A", config.outcomes, "number of outcomes A")->capture_default_str();
    run_cmd->add_option("--epsilon,-e", config.epsilon, "grid radius (eps and deterministic forecasters)")
        ->capture_default_str();
    run_cmd->add_option("--rounds,-T", config.rounds, "rounds to play")->capture_default_str();
    run_cmd->add_option("--forecaster", forecaster, "eps | meta | deterministic")->capture_default_str();
    run_cmd->add_option("--method", method, "exact | mw | mw:<delta>")->capture_default_str();
    run_cmd->add_option("--nature", nature, "iid:<p1,...,pA> | markov:<file> | seq:<file> | contrarian | greedy")
        ->capture_default_str();
    run_cmd->add_option("--seed", config.seed, "random seed")->capture_default_str();
    run_cmd->add_option("--seeds", seeds, "run one game per seed, in parallel")->delimiter(',');
    run_cmd->add_option("--checkpoint-every", config.checkpoint_every,
                        "score every N rounds (default: powers of two)");
    run_cmd->add_option("--bound-delta", config.scoring.delta, "confidence level of the reported bound")
        ->capture_default_str();
    run_cmd->add_option("--bound-gamma", config.scoring.gamma, "rate constant of the reported bound")
        ->capture_default_str();
    run_cmd->add_option("--out-dir", out_dir, "default output directory (env CALIBSIM_OUTPUT_DIR)")
        ->capture_default_str();
    run_cmd->add_option("--transcript", transcript, "transcript CSV (default <out-dir>/transcript.csv)");
    run_cmd->add_option("--scores", scores, "score CSV (default <out-dir>/scores.csv)");
    run_cmd->add_option("--plot", plot_path, "also render the score CSV as an SVG chart");

    auto* plot_cmd = app.add_subcommand("plot", "render a score CSV as a log-log SVG chart");
    std::string plot_input;
    std::string plot_output = "scores.svg";
    plot_cmd->add_option("scores", plot_input, "score CSV")->required();
    plot_cmd->add_option("--output,-o", plot_output, "SVG file")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    auto render = [](const std::string& in_path, const std::string& out_path) {
        std::ifstream in(in_path);
        if (!in) {
            std::cerr << "error: cannot read " << in_path << '\n';
            return 1;
        }
        std::ostringstream svg;
        try {
            calib::emit_plot(in, svg);
        } catch (const calib::ParameterError& e) {
            std::cerr << "error: " << in_path << ": " << e.what() << '\n';
            return 2;
        }
        std::ofstream out(out_path, std::ios::binary);
        out << svg.str();
        if (!out.flush()) {
            std::cerr << "error: cannot write " << out_path << '\n';
            return 1;
        }
        return 0;
    };

    if (plot_cmd->parsed()) return render(plot_input, plot_output);

    try {
        if (forecaster == "eps")
            config.forecaster = calib::ForecasterKind::eps;
        else if (forecaster == "meta")
            config.forecaster = calib::ForecasterKind::meta;
        else if (forecaster == "deterministic")
            config.forecaster = calib::ForecasterKind::deterministic;
        else
            throw calib::ConfigError("--forecaster must be eps, meta or deterministic");
        config.oracle = parse_method(method);
        config.nature = calib::parse_nature_spec(nature, config.outcomes);
    } catch (const calib::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    config.transcript_path = transcript.empty() ? std::filesystem::path(out_dir) / "transcript.csv" : std::filesystem::path(transcript);
    config.scores_path = scores.empty() ? std::filesystem::path(out_dir) / "scores.csv" : std::filesystem::path(scores);

    if (seeds.empty()) {
        const int status = calib::run(config, std::cerr);
        if (status != 0 || plot_path.empty()) return status;
        return render(config.scores_path.string(), plot_path);
    }

    std::vector<calib::RunConfig> runs;
    for (auto seed : seeds) {
        auto c = config;
        c.seed = seed;
        c.transcript_path = with_seed_suffix(config.transcript_path, seed);
        c.scores_path = with_seed_suffix(config.scores_path, seed);
        runs.push_back(std::move(c));
    }
    std::vector<std::ostringstream> logs(runs.size());
    std::vector<int> status(runs.size(), 0);
    std::vector<std::thread> workers;
    for (std::size_t i = 0; i < runs.size(); ++i)
        workers.emplace_back([&, i] { status[i] = calib::run(runs[i], logs[i]); });
    for (auto& w : workers) w.join();

    int worst = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        std::cerr << "[seed " << runs[i].seed << "] " << logs[i].str();
        worst = std::max(worst, status[i]);
        if (status[i] == 0 && !plot_path.empty())
            worst = std::max(worst, render(runs[i].scores_path.string(), with_seed_suffix(plot_path, runs[i].seed).string()));
    }
    return worst;
}
