#include "sbe/fitness.hpp"

#include <future>

#include "sbe/seeding.hpp"

namespace sbe {

double game_score(const GameOutcome& o, double divisor) {
    return (o.s1 / divisor + o.w1) - (o.s2 / divisor + o.w2);
}

PlayedGame play_game(const Game& game, AgentId first, AgentId second, const AgentBudgets& budgets,
                     std::uint64_t seed) {
    std::mt19937_64 rngFirst(derive_seed(seed, 1));
    std::mt19937_64 rngSecond(derive_seed(seed, 2));
    GameState state = game.init(derive_seed(seed, 0));
    while (!game.is_terminal(state)) {
        const Action a1 = act(first, game, state, Player::one, budgets, rngFirst);
        const Action a2 = act(second, game, state, Player::two, budgets, rngSecond);
        game.advance(state, a1, a2);
    }
    const Outcome result = *game.outcome(state);
    const double bonus = game.world().winBonus;
    PlayedGame out{state, {}};
    out.outcome.s1 = state.ships[0].score;
    out.outcome.s2 = state.ships[1].score;
    out.outcome.w1 = result.winner == Player::one ? bonus : 0.0;
    out.outcome.w2 = result.winner == Player::two ? bonus : 0.0;
    return out;
}

FitnessResult evaluate(const Genome& genome, const SearchSpace& space, const FitnessConfig& config,
                       std::uint64_t seed, std::vector<GameRecord>* log, int workers) {
    const GameParams params = decode(genome, space);
    const Game game(params, config.world);
    const AgentId enemy = params.enemyId;

    struct Fixture {
        AgentId first;
        AgentId second;
        std::size_t rung;
        bool skillFirst;
    };
    std::vector<Fixture> fixtures;
    for (std::size_t rung = 0; rung < kSkillLadder.size(); ++rung) {
        if (config.sides != SideMode::skill_second) fixtures.push_back({kSkillLadder[rung], enemy, rung, true});
        if (config.sides != SideMode::skill_first) fixtures.push_back({enemy, kSkillLadder[rung], rung, false});
    }

    std::vector<GameRecord> records(fixtures.size());
    auto play = [&](std::size_t i) {
        const Fixture& f = fixtures[i];
        const std::uint64_t gameSeed = derive_seed(seed, i);
        const PlayedGame played = play_game(game, f.first, f.second, config.budgets, gameSeed);
        const double t = game_score(played.outcome, config.world.scoreDivisor);
        records[i] = GameRecord{static_cast<int>(i), f.first, f.second, gameSeed, played.finalState.tick,
                                played.outcome, f.skillFirst ? t : -t};
    };

    if (workers > 1) {
        std::vector<std::future<void>> pending;
        std::size_t next = 0;
        while (next < fixtures.size() || !pending.empty()) {
            while (next < fixtures.size() && pending.size() < static_cast<std::size_t>(workers)) {
                pending.push_back(std::async(std::launch::async, play, next++));
            }
            pending.front().get();
            pending.erase(pending.begin());
        }
    } else {
        for (std::size_t i = 0; i < fixtures.size(); ++i) play(i);
    }

    std::array<double, 3> sums{};
    std::array<int, 3> counts{};
    for (std::size_t i = 0; i < fixtures.size(); ++i) {
        sums[fixtures[i].rung] += records[i].score;
        ++counts[fixtures[i].rung];
    }
    FitnessResult r;
    r.t1 = sums[0] / counts[0];
    r.t2 = sums[1] / counts[1];
    r.t3 = sums[2] / counts[2];
    r.fitness = skill_depth(r.t1, r.t2, r.t3);
    if (log) *log = std::move(records);
    return r;
}

Evaluator game_evaluator(SearchSpace space, FitnessConfig config) {
    return [space = std::move(space), config](const Genome& genome, std::uint64_t seed) {
        return evaluate(genome, space, config, seed).fitness;
    };
}

}  // namespace sbe
