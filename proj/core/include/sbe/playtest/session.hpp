#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <variant>

#include "sbe/agents.hpp"
#include "sbe/game.hpp"
#include "sbe/params.hpp"

namespace sbe::playtest {

struct SessionOptions {
    Player humanSide = Player::one;
    std::optional<AgentId> enemyOverride;
    std::chrono::milliseconds tickInterval{40};
    AgentBudgets enemyBudgets = [] {
        AgentBudgets b;
        b.mcts.iterations = 100;
        return b;
    }();
    std::uint64_t seed = 1;
    WorldConfig world;
    /// Advance one tick per received action instead of on a timer.
    bool lockstep = false;
};

struct TickOutput {
    int tick = 0;
    std::string stateFrame;
    std::optional<std::string> resultFrame;  // set on the terminal tick
};

/// One human-vs-agent game. State changes only through tick(); input only
/// replaces the pending action.
class Session {
public:
    Session(std::string id, const GameParams& params, SessionOptions options);

    const std::string& id() const { return id_; }
    AgentId enemy() const { return enemy_; }
    Player human_side() const { return options_.humanSide; }
    const SessionOptions& options() const { return options_; }

    /// Latest action wins until the next tick consumes it.
    void set_pending_action(Action action);

    /// Consumes the pending action (no-op if none), queries the enemy and
    /// advances one step. Throws TerminalStateError once the game is over.
    TickOutput tick();

    bool finished() const;
    GameState state() const;
    std::string session_frame() const;

private:
    std::string id_;
    Game game_;
    SessionOptions options_;
    AgentId enemy_;
    std::mt19937_64 enemyRng_;
    mutable std::mutex mutex_;
    GameState state_;
    std::optional<Action> pending_;
};

/// Creates a session from a genome in the default search space; throws
/// InvalidGenome on a malformed genome.
std::shared_ptr<Session> make_session(std::string id, const Genome& genome, SessionOptions options);

/// Thread-safe registry of live and parked sessions.
class SessionRegistry {
public:
    using Clock = std::chrono::steady_clock;

    explicit SessionRegistry(std::chrono::milliseconds grace = std::chrono::seconds(30)) : grace_(grace) {}

    std::shared_ptr<Session> create(const Genome& genome, SessionOptions options);
    std::shared_ptr<Session> find(const std::string& id) const;

    /// Marks a session detached; it stays resumable for the grace period.
    void park(const std::string& id, Clock::time_point now = Clock::now());
    /// Reattaches a parked session; nullptr if unknown, attached or expired.
    std::shared_ptr<Session> resume(const std::string& id, Clock::time_point now = Clock::now());
    void close(const std::string& id);
    /// Drops parked sessions whose grace period has run out; returns how many.
    std::size_t expire(Clock::time_point now = Clock::now());
    std::size_t size() const;

private:
    struct Entry {
        std::shared_ptr<Session> session;
        std::optional<Clock::time_point> parkedAt;
    };

    std::chrono::milliseconds grace_;
    mutable std::mutex mutex_;
    std::map<std::string, Entry> sessions_;
    std::random_device entropy_;
    std::uint64_t counter_ = 0;
};

struct StartMessage {
    std::optional<Genome> genome;
    Player humanSide = Player::one;
    std::optional<AgentId> enemy;
    std::optional<std::uint64_t> seed;
    std::optional<int> tickIntervalMs;
    std::optional<int> maxTicks;
    std::optional<int> mctsIterations;
    bool lockstep = false;
};

struct ActionMessage {
    Action action;
};

struct ResumeMessage {
    std::string sessionId;
};

using ClientMessage = std::variant<StartMessage, ActionMessage, ResumeMessage>;

/// Parses one client text frame; throws std::invalid_argument with a
/// readable reason on anything malformed.
ClientMessage parse_client_message(const std::string& text);

/// Wire form of an action: turn -1 (anticlockwise), 0, 1 (clockwise).
std::string action_message(const Action& action);

std::string error_frame(const std::string& message);

}  // namespace sbe::playtest
