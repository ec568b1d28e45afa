#include <csignal>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "sbe/harness.hpp"
#include "sbe/playtest/server.hpp"

namespace {

/// Registers --config plus one flag per config key; flags override the file.
struct ConfigFlags {
    std::string configFile;
    std::map<std::string, std::string> values;

    void attach(CLI::App* app) {
        app->add_option("--config", configFile, "key=value config file")->check(CLI::ExistingFile);
        for (const auto& key : sbe::config_keys()) app->add_option("--" + key, values[key], "config key " + key);
    }

    void apply(sbe::ExperimentConfig& config, const CLI::App* app) const {
        if (!configFile.empty()) sbe::load_config_file(config, configFile);
        for (const auto& [key, value] : values) {
            if (app->count("--" + key) > 0) sbe::apply_setting(config, key, value);
        }
    }
};

sbe::playtest::Server* activeServer = nullptr;

void on_signal(int) {
    if (activeServer) activeServer->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolve, compare, replay and play-test Space Battle game variants"};
    app.require_subcommand(1);

    ConfigFlags evolveFlags;
    auto* evolve = app.add_subcommand("evolve", "run optimizer trials and write CSV reports");
    evolveFlags.attach(evolve);

    std::string compareDir;
    auto* compare = app.add_subcommand("compare", "pairwise Mann-Whitney tests over a results directory");
    compare->add_option("--in", compareDir, "results directory")->required()->check(CLI::ExistingDirectory);

    ConfigFlags replayFlags;
    std::string replayGenome;
    int replayEvaluations = 1;
    auto* replay = app.add_subcommand("replay", "re-simulate a genome and print per-game outcomes");
    replay->add_option("--genome", replayGenome, "genome file (comma-separated levels)")
        ->required()
        ->check(CLI::ExistingFile);
    replay->add_option("--evaluations", replayEvaluations, "fitness evaluations to replay")->check(CLI::PositiveNumber);
    replayFlags.attach(replay);

    std::string serveGenome;
    std::string serveResults;
    std::string serveAddress = "127.0.0.1";
    std::uint16_t servePort = 8080;
    int serveIterations = 100;
    auto* serve = app.add_subcommand("serve", "start the play-test WebSocket/HTTP service");
    serve->add_option("--genome", serveGenome, "default genome for sessions")->check(CLI::ExistingFile);
    serve->add_option("--port", servePort, "listen port");
    serve->add_option("--address", serveAddress, "listen address");
    serve->add_option("--results", serveResults, "results directory listed by GET /games");
    serve->add_option("--mcts.iterations", serveIterations, "enemy MCTS iterations")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*evolve) {
            sbe::ExperimentConfig config;
            evolveFlags.apply(config, evolve);
            const auto result = sbe::run_experiment(config);
            std::cout << "trials completed: " << result.trials.size() << ", failed: " << result.failures.size()
                      << ", output: " << config.outDir.string() << '\n';
            for (const auto& f : result.failures) std::cerr << f.algo << " trial " << f.trial << ": " << f.message << '\n';
            return result.failures.empty() ? 0 : 1;
        }
        if (*compare) {
            sbe::write_significance_csv(std::cout, sbe::compare_directory(compareDir));
            return 0;
        }
        if (*replay) {
            sbe::ExperimentConfig config;
            replayFlags.apply(config, replay);
            config.validate();
            sbe::ReplayOptions options;
            options.seed = config.seed;
            options.workers = config.workers;
            options.evaluations = replayEvaluations;
            options.fitness = config.fitness;
            sbe::replay(sbe::load_genome_file(replayGenome), options, std::cout);
            return 0;
        }
        if (*serve) {
            sbe::playtest::ServerOptions options;
            options.address = serveAddress;
            options.port = servePort;
            options.resultsDir = serveResults;
            options.enemyMctsIterations = serveIterations;
            if (!serveGenome.empty()) {
                const sbe::Genome genome = sbe::load_genome_file(serveGenome);
                sbe::validate(genome, sbe::default_search_space());
                options.defaultGenome = genome;
            }
            sbe::playtest::Server server(options);
            activeServer = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cout << "listening on " << serveAddress << ':' << server.port() << std::endl;
            server.run();
            activeServer = nullptr;
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
