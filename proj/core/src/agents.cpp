#include "sbe/agents.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace sbe {

namespace {

void advance_as(const Game& game, GameState& state, Player player, Action own, Action other) {
    if (player == Player::one) {
        game.advance(state, own, other);
    } else {
        game.advance(state, other, own);
    }
}

double squash(double delta, double scale) { return 1.0 / (1.0 + std::exp(-delta / scale)); }

struct TreeNode {
    std::array<int, Action::kCount> child{};
    int expanded = 0;
    int visits = 0;
    double valueSum = 0;

    TreeNode() { child.fill(-1); }
};

}  // namespace

void AgentBudgets::validate() const {
    if (mcts.iterations < 1) throw std::invalid_argument("mcts.iterations must be at least 1");
    if (mcts.rolloutDepth < 0) throw std::invalid_argument("mcts.rolloutDepth must be non-negative");
    if (mea.popSize < 2) throw std::invalid_argument("mea.popSize must be at least 2");
    if (mea.seqLength < 1) throw std::invalid_argument("mea.seqLength must be at least 1");
    if (mea.evals < 1) throw std::invalid_argument("mea.evals must be at least 1");
}

double heuristic_value(const Game& game, const GameState& state, Player player) {
    double value = state.ship(player).score - state.ship(opponent(player)).score;
    if (const auto result = game.outcome(state); result && result->winner) {
        value += *result->winner == player ? kTerminalBonus : -kTerminalBonus;
    }
    return value;
}

std::size_t ucb1_select(std::span<const UcbChild> children, int totalN, double c) {
    if (children.empty()) throw std::invalid_argument("ucb1_select: no children");
    for (std::size_t i = 0; i < children.size(); ++i) {
        if (children[i].n == 0) return i;
    }
    const double logN = std::log(static_cast<double>(std::max(totalN, 1)));
    std::size_t best = 0;
    double bestValue = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < children.size(); ++i) {
        const double value = children[i].q + c * std::sqrt(logN / children[i].n);
        if (value > bestValue) {
            bestValue = value;
            best = i;
        }
    }
    return best;
}

Action random_action(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, Action::kCount - 1);
    return Action::from_index(pick(rng));
}

Action osla_action(const Game& game, const GameState& state, Player player) {
    int best = 0;
    double bestValue = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < Action::kCount; ++a) {
        GameState next = state;
        advance_as(game, next, player, Action::from_index(a), Action::noop());
        const double value = heuristic_value(game, next, player);
        if (value > bestValue) {
            bestValue = value;
            best = a;
        }
    }
    return Action::from_index(best);
}

MctsRootStats mcts_search(const Game& game, const GameState& root, Player player, const MctsBudget& budget,
                          std::mt19937_64& rng) {
    if (budget.iterations < 1) throw std::invalid_argument("mcts: iterations must be at least 1");
    const double rootValue = heuristic_value(game, root, player);
    const double scale = game.world().hitScore;

    std::vector<TreeNode> nodes(1);
    nodes.reserve(static_cast<std::size_t>(budget.iterations) + 1);
    std::vector<int> path;
    std::array<UcbChild, Action::kCount> stats{};
    std::array<int, Action::kCount> order{};
    std::iota(order.begin(), order.end(), 0);

    for (int it = 0; it < budget.iterations; ++it) {
        GameState state = root;
        path.assign(1, 0);
        int node = 0;
        while (!game.is_terminal(state)) {
            TreeNode& current = nodes[static_cast<std::size_t>(node)];
            int action = 0;
            if (current.expanded < Action::kCount) {
                // Untried actions open in random order.
                std::uniform_int_distribution<int> pickUntried(0, Action::kCount - 1 - current.expanded);
                for (int k = pickUntried(rng); ; ++action) {
                    if (current.child[static_cast<std::size_t>(action)] < 0 && k-- == 0) break;
                }
                ++current.expanded;
                current.child[static_cast<std::size_t>(action)] = static_cast<int>(nodes.size());
                advance_as(game, state, player, Action::from_index(action), random_action(rng));
                path.push_back(static_cast<int>(nodes.size()));
                nodes.emplace_back();
                break;
            }
            // Shuffled order so equal UCB values are broken at random.
            std::shuffle(order.begin(), order.end(), rng);
            for (std::size_t k = 0; k < order.size(); ++k) {
                const TreeNode& child = nodes[static_cast<std::size_t>(current.child[static_cast<std::size_t>(order[k])])];
                stats[k] = {child.visits ? child.valueSum / child.visits : 0.0, child.visits};
            }
            action = order[ucb1_select(stats, current.visits, budget.c)];
            node = current.child[static_cast<std::size_t>(action)];
            advance_as(game, state, player, Action::from_index(action), random_action(rng));
            path.push_back(node);
        }

        for (int d = 0; d < budget.rolloutDepth && !game.is_terminal(state); ++d) {
            advance_as(game, state, player, random_action(rng), random_action(rng));
        }

        const double value = squash(heuristic_value(game, state, player) - rootValue, scale);
        for (int n : path) {
            nodes[static_cast<std::size_t>(n)].visits += 1;
            nodes[static_cast<std::size_t>(n)].valueSum += value;
        }
    }

    MctsRootStats out;
    out.iterations = budget.iterations;
    for (int a = 0; a < Action::kCount; ++a) {
        const int idx = nodes[0].child[static_cast<std::size_t>(a)];
        if (idx < 0) continue;
        const TreeNode& child = nodes[static_cast<std::size_t>(idx)];
        out.visits[static_cast<std::size_t>(a)] = child.visits;
        out.meanValue[static_cast<std::size_t>(a)] = child.visits ? child.valueSum / child.visits : 0.0;
    }
    // Most visits, then best mean, then a random pick among what is left.
    std::vector<int> best;
    for (int a = 0; a < Action::kCount; ++a) {
        const auto i = static_cast<std::size_t>(a);
        if (best.empty() || out.visits[i] > out.visits[static_cast<std::size_t>(best[0])] ||
            (out.visits[i] == out.visits[static_cast<std::size_t>(best[0])] &&
             out.meanValue[i] > out.meanValue[static_cast<std::size_t>(best[0])])) {
            best.assign(1, a);
        } else if (out.visits[i] == out.visits[static_cast<std::size_t>(best[0])] &&
                   out.meanValue[i] == out.meanValue[static_cast<std::size_t>(best[0])]) {
            best.push_back(a);
        }
    }
    std::uniform_int_distribution<std::size_t> pick(0, best.size() - 1);
    out.chosen = Action::from_index(best.size() == 1 ? best[0] : best[pick(rng)]);
    return out;
}

Action mea_plan(const Game& game, const GameState& state, Player player, const MeaBudget& budget,
                std::mt19937_64& rng) {
    const auto len = static_cast<std::size_t>(budget.seqLength);
    const auto pop = static_cast<std::size_t>(budget.popSize);
    std::uniform_int_distribution<int> anyAction(0, Action::kCount - 1);

    auto evaluate = [&](const std::vector<int>& plan) {
        GameState s = state;
        for (int a : plan) {
            if (game.is_terminal(s)) break;
            advance_as(game, s, player, Action::from_index(a), Action::noop());
        }
        return heuristic_value(game, s, player);
    };

    std::vector<std::vector<int>> plans(pop, std::vector<int>(len));
    std::vector<double> fitness(pop);
    int evals = 0;
    for (std::size_t i = 0; i < pop && evals < budget.evals; ++i, ++evals) {
        for (auto& a : plans[i]) a = anyAction(rng);
        fitness[i] = evaluate(plans[i]);
    }
    // Plans past the budget keep their random genes but were never scored.
    for (std::size_t i = static_cast<std::size_t>(evals); i < pop; ++i) {
        fitness[i] = -std::numeric_limits<double>::infinity();
    }

    std::uniform_int_distribution<std::size_t> pickMember(0, pop - 1);
    std::uniform_int_distribution<std::size_t> pickGene(0, len - 1);
    std::bernoulli_distribution coin(0.5);
    while (evals < budget.evals) {
        const std::size_t i = pickMember(rng);
        std::size_t j = pickMember(rng);
        while (j == i) j = pickMember(rng);
        const std::size_t winner = fitness[i] >= fitness[j] ? i : j;
        const std::size_t loser = winner == i ? j : i;
        for (std::size_t g = 0; g < len; ++g) {
            if (coin(rng)) plans[loser][g] = plans[winner][g];
        }
        plans[loser][pickGene(rng)] = anyAction(rng);
        fitness[loser] = evaluate(plans[loser]);
        ++evals;
    }

    const auto best = static_cast<std::size_t>(std::max_element(fitness.begin(), fitness.end()) - fitness.begin());
    return Action::from_index(plans[best][0]);
}

Action act(AgentId agent, const Game& game, const GameState& state, Player player, const AgentBudgets& budgets,
           std::mt19937_64& rng) {
    switch (agent) {
        case AgentId::do_nothing: return Action::noop();
        case AgentId::random: return random_action(rng);
        case AgentId::osla: return osla_action(game, state, player);
        case AgentId::ras: return Action{Turn::clockwise, false, true};
        case AgentId::mcts: return mcts_search(game, state, player, budgets.mcts, rng).chosen;
        case AgentId::mea: return mea_plan(game, state, player, budgets.mea, rng);
    }
    throw std::invalid_argument("unknown agent id " + std::to_string(static_cast<int>(agent)));
}

}  // namespace sbe
