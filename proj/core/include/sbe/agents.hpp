#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <span>

#include "sbe/game.hpp"
#include "sbe/params.hpp"

namespace sbe {

struct MctsBudget {
    int iterations = 500;
    int rolloutDepth = 20;
    double c = std::numbers::sqrt2;
};

struct MeaBudget {
    int popSize = 10;
    int seqLength = 10;
    int evals = 500;
};

/// Deterministic search budgets standing in for a per-decision time limit.
struct AgentBudgets {
    MctsBudget mcts;
    MeaBudget mea;

    void validate() const;
};

/// Bonus (or penalty) added to a finished game's value; dominates any score gap.
inline constexpr double kTerminalBonus = 1e6;

/// Own score minus opponent score, with a large win bonus / loss penalty on
/// terminal states and no adjustment on draws.
double heuristic_value(const Game& game, const GameState& state, Player player);

struct UcbChild {
    double q = 0;  // mean value
    int n = 0;     // visits
};

/// argmax of q + c*sqrt(ln(totalN)/n). Unvisited children win outright; ties
/// go to the lowest index.
std::size_t ucb1_select(std::span<const UcbChild> children, int totalN, double c);

struct MctsRootStats {
    std::array<int, Action::kCount> visits{};
    std::array<double, Action::kCount> meanValue{};
    int iterations = 0;
    Action chosen;
};

/// Open-loop UCT over the searching player's actions. The opponent plays
/// uniformly random moves inside the tree and during rollouts.
MctsRootStats mcts_search(const Game& game, const GameState& state, Player player, const MctsBudget& budget,
                          std::mt19937_64& rng);

/// Rolling-horizon microbial EA; returns the first action of the best plan.
Action mea_plan(const Game& game, const GameState& state, Player player, const MeaBudget& budget,
                std::mt19937_64& rng);

Action osla_action(const Game& game, const GameState& state, Player player);

Action random_action(std::mt19937_64& rng);

Action act(AgentId agent, const Game& game, const GameState& state, Player player, const AgentBudgets& budgets,
           std::mt19937_64& rng);

}  // namespace sbe
