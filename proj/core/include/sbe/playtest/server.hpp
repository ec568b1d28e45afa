#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "sbe/params.hpp"
#include "sbe/playtest/session.hpp"

namespace sbe::playtest {

struct GameListing {
    std::string id;  // "<algo>-<trial>"
    std::string algo;
    double meanFitness = 0;
    Genome genome;
};

/// Reads report.csv from a results directory; empty when the file is absent.
std::vector<GameListing> list_games(const std::filesystem::path& resultsDir);

/// JSON array of {id, algo, meanFitness, genome}.
std::string games_json(const std::vector<GameListing>& games);

struct ServerOptions {
    std::string address = "127.0.0.1";
    std::uint16_t port = 8080;  // 0 picks a free port
    std::filesystem::path resultsDir;
    std::optional<Genome> defaultGenome;  // used when a start message has none
    std::chrono::milliseconds grace = std::chrono::seconds(30);
    int enemyMctsIterations = 100;
};

/// HTTP (GET /games) and WebSocket play-test service on one port. All
/// networking and session loops run on a single I/O thread.
class Server {
public:
    explicit Server(ServerOptions options);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Port actually bound.
    std::uint16_t port() const;
    /// Serves on a background thread.
    void start();
    /// Serves on the calling thread until stop().
    void run();
    void stop();

    SessionRegistry& registry();

    struct Impl;

private:
    std::unique_ptr<Impl> impl_;
};

}  // namespace sbe::playtest
