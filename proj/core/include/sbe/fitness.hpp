#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sbe/agents.hpp"
#include "sbe/game.hpp"
#include "sbe/params.hpp"

namespace sbe {

/// Final scores and win bonuses of one game, player 1 first.
struct GameOutcome {
    double s1 = 0;
    double s2 = 0;
    double w1 = 0;  // 1000 if player 1 won, else 0
    double w2 = 0;
};

/// (s1/divisor + w1) - (s2/divisor + w2)
double game_score(const GameOutcome& o, double divisor = 100.0);

/// Smallest gap in the chain t3 > t2 > t1; negative when the order breaks.
constexpr double skill_depth(double t1, double t2, double t3) {
    const double upper = t3 - t2;
    const double lower = t2 - t1;
    return upper < lower ? upper : lower;
}

struct FitnessResult {
    double t1 = 0;  // weak (OSLA)
    double t2 = 0;  // medium (RAS)
    double t3 = 0;  // strong (MCTS)
    double fitness = 0;

    friend bool operator==(const FitnessResult&, const FitnessResult&) = default;
};

/// Which side the skill agent takes against the evolved enemy.
enum class SideMode : std::uint8_t { skill_first, skill_second, both };

struct FitnessConfig {
    WorldConfig world;
    AgentBudgets budgets;
    SideMode sides = SideMode::skill_first;
};

inline constexpr std::array<AgentId, 3> kSkillLadder{AgentId::osla, AgentId::ras, AgentId::mcts};

struct GameRecord {
    int gameIndex = 0;
    AgentId first = AgentId::do_nothing;
    AgentId second = AgentId::do_nothing;
    std::uint64_t seed = 0;
    int ticks = 0;
    GameOutcome outcome;
    double score = 0;  // game_score from the skill agent's side
};

struct PlayedGame {
    GameState finalState;
    GameOutcome outcome;
};

/// Plays one full game between two agents; the agents draw from streams
/// derived from the seed.
PlayedGame play_game(const Game& game, AgentId first, AgentId second, const AgentBudgets& budgets,
                     std::uint64_t seed);

/// Three games (OSLA, RAS, MCTS vs the genome's enemy) scored into skill depth.
/// Game seeds derive from (seed, game index). With workers > 1 the games run
/// concurrently; the result does not depend on the worker count.
FitnessResult evaluate(const Genome& genome, const SearchSpace& space, const FitnessConfig& config,
                       std::uint64_t seed, std::vector<GameRecord>* log = nullptr, int workers = 1);

/// Noisy objective as seen by the optimizers: one call is one fitness sample.
using Evaluator = std::function<double(const Genome&, std::uint64_t seed)>;

/// Evaluator backed by simulated games.
Evaluator game_evaluator(SearchSpace space, FitnessConfig config);

}  // namespace sbe
