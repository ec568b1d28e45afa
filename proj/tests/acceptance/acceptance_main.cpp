// Acceptance suite: one pass/fail line per criterion.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sbe/harness.hpp"
#include "sbe/ntuple_model.hpp"
#include "sbe/optimizers.hpp"
#include "sbe/seeding.hpp"
#include "sbe/stats.hpp"
#include "surrogates.hpp"

namespace fs = std::filesystem;
using namespace sbe;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

// Fitness arithmetic against hand-computed values.
Verdict fitness_arithmetic() {
    struct ScoreCase {
        GameOutcome o;
        double expected;
    };
    const std::vector<ScoreCase> scores{
        {{5000, 2000, 1000, 0}, 1030},
        {{700, 700, 0, 0}, 0},
        {{0, 0, 0, 1000}, -1000},
        {{10000, 0, 1000, 0}, 1100},
        {{0, 10000, 0, 1000}, -1100},
        {{-300, 200, 0, 1000}, -1005},
        {{250, 50, 1000, 0}, 1002},
        {{100, 0, 0, 0}, 1},
        {{-2000, -2000, 0, 0}, 0},
        {{1234, 34, 1000, 0}, 1012},
        {{50, 0, 1000, 0}, 1000.5},
        {{0, 25, 0, 1000}, -1000.25},
    };
    struct DepthCase {
        double t1, t2, t3, expected;
    };
    const std::vector<DepthCase> depths{
        {10, 30, 100, 20},     {0, 0, 0, 0},          {100, 50, 200, -50},     {-1100, 0, 1100, 1100},
        {1030, -1000, 0, -2030}, {-5.5, 2.25, 10, 7.75}, {3, 2, 1, -1},          {0, 1000, 1001, 1},
    };
    int bad = 0;
    for (const auto& c : scores) {
        if (std::abs(game_score(c.o) - c.expected) > 1e-12) ++bad;
    }
    for (const auto& c : depths) {
        if (std::abs(skill_depth(c.t1, c.t2, c.t3) - c.expected) > 1e-12) ++bad;
    }
    const std::size_t total = scores.size() + depths.size();
    return {bad == 0, fmt("%zu cases, %d mismatches", total, bad)};
}

// Model statistics against a recomputation from the raw sample log.
Verdict model_oracle() {
    const SearchSpace space = SearchSpace::from_arities({3, 3, 2, 2});
    NTupleModel model = NTupleModel::singletons_and_full(4);
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> noise(0, 3);
    std::vector<std::pair<Genome, double>> log;
    for (int i = 0; i < 500; ++i) {
        Genome g = random_genome(space, rng);
        const double v = std::round(noise(rng) * 16) / 16;
        model_add(model, g, v);
        log.emplace_back(std::move(g), v);
    }
    int bad = 0;
    std::size_t entries = 0;
    for (std::size_t t = 0; t < model.tuple_count(); ++t) {
        std::map<NTupleModel::Pattern, std::vector<double>> groups;
        for (const auto& [g, v] : log) groups[model.restrict(t, g)].push_back(v);
        if (groups.size() != model.table(t).size()) ++bad;
        for (const auto& [pattern, values] : groups) {
            ++entries;
            const auto it = model.table(t).find(pattern);
            if (it == model.table(t).end()) {
                ++bad;
                continue;
            }
            const double n = static_cast<double>(values.size());
            const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
            double ss = 0;
            for (double v : values) ss += (v - mean) * (v - mean);
            const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
            if (it->second.n != values.size() || it->second.mean() != mean ||
                std::abs(it->second.sd() - sd) > 1e-12 * std::max(1.0, sd)) {
                ++bad;
            }
        }
    }
    return {bad == 0, fmt("%zu entries over %zu tuples, %d mismatches", entries, model.tuple_count(), bad)};
}

// NTBEA against RMHC on a noisy separable surrogate.
Verdict surrogate_benchmark() {
    const SearchSpace space = default_search_space();
    const auto target = [&space](const Genome& g) { return test::normalized_score(g, space); };
    const Evaluator f = test::noisy(target, 1.0);
    std::vector<double> ntbea;
    std::vector<double> rmhc;
    int wins = 0;
    for (std::uint64_t pair = 0; pair < 100; ++pair) {
        std::mt19937_64 a(derive_seed(pair, 1));
        std::mt19937_64 b(derive_seed(pair, 2));
        ntbea.push_back(target(ntbea_run(space, f, 100, a).trace.finalGenome));
        rmhc.push_back(target(rmhc_run(space, f, 100, b).finalGenome));
        if (ntbea.back() > rmhc.back()) ++wins;
    }
    const double p = mann_whitney_u(ntbea, rmhc).pTwoTailed;
    return {wins >= 65 && p < 0.01,
            fmt("NTBEA wins %d/100, mean %.3f vs %.3f, p=%.2e", wins, sample_mean(ntbea), sample_mean(rmhc), p)};
}

struct MiniRun {
    bool complete = false;
    std::string missing;
    double ntbeaMean = 0;
    double rmhcMean = 0;
};

MiniRun mini_experiment(std::uint64_t seed, int meaEvals, int workers, const fs::path& out) {
    ExperimentConfig c;
    c.trials = 5;
    c.nEvals = 30;
    c.reevalN = 20;
    c.seed = seed;
    c.workers = workers;
    c.outDir = out;
    c.fitness.budgets.mcts.iterations = 100;
    c.fitness.budgets.mea.evals = meaEvals;
    fs::remove_all(out);
    const ExperimentResult r = run_experiment(c);

    MiniRun run;
    std::vector<std::string> expected{"config.txt", "report.csv", "significance.csv", "extremes.csv", "accounting.csv",
                                      "failures.csv"};
    for (const auto& algo : c.algorithms) {
        for (int t = 0; t < c.trials; ++t) {
            expected.push_back("trace_" + algo + "_" + std::to_string(t) + ".csv");
            expected.push_back("summary_" + algo + "_" + std::to_string(t) + ".csv");
            if (algo == "ntbea") expected.push_back("model_ntbea_" + std::to_string(t) + ".txt");
        }
    }
    for (const auto& name : expected) {
        if (!fs::exists(out / name)) run.missing += name + " ";
    }
    run.complete = run.missing.empty() && r.failures.empty();
    std::map<std::string, std::vector<double>> means;
    for (const auto& t : r.trials) means[t.algo].push_back(t.summary.mean);
    if (!means["ntbea"].empty()) run.ntbeaMean = sample_mean(means["ntbea"]);
    if (!means["rmhc"].empty()) run.rmhcMean = sample_mean(means["rmhc"]);
    return run;
}

// Full-stack run on simulated games, with the two-of-three seed policy on the direction check.
Verdict full_stack(std::uint64_t seed, int meaEvals, int workers) {
    const fs::path root = fs::temp_directory_path() / ("sbe_acceptance_" + std::to_string(::getpid()));
    std::string detail;
    int agree = 0;
    int runs = 0;
    bool complete = true;
    for (std::uint64_t s = seed; s < seed + 3; ++s) {
        const MiniRun run = mini_experiment(s, meaEvals, workers, root / std::to_string(s));
        ++runs;
        complete = complete && run.complete;
        if (!run.missing.empty()) detail += "missing " + run.missing + "; ";
        const bool direction = run.ntbeaMean >= run.rmhcMean;
        agree += direction ? 1 : 0;
        detail += fmt("seed %llu: ntbea %.2f rmhc %.2f%s; ", static_cast<unsigned long long>(s), run.ntbeaMean,
                      run.rmhcMean, direction ? "" : " (reversed)");
        if (runs == 1 && direction) break;
        if (runs == 2 && !direction) break;
    }
    fs::remove_all(root);
    const bool pass = complete && (runs == 1 ? agree == 1 : agree >= 2);
    return {pass, detail + fmt("%d of %d runs in direction", agree, runs)};
}

Genome mid_range_genome(const SearchSpace& space) {
    Genome g;
    for (std::size_t i = 0; i < space.size(); ++i) g.levels.push_back(static_cast<int>((space.arity(i) - 1) / 2));
    return g;
}

// Replay logs identical across runs and worker counts.
Verdict determinism() {
    const SearchSpace space = default_search_space();
    std::mt19937_64 rng(77);
    Genome g = random_genome(space, rng);
    g.levels[gene::kEnemyId] = static_cast<int>(AgentId::mcts);
    ReplayOptions o;
    o.seed = 12345;
    o.evaluations = 1;
    o.fitness.budgets.mcts.iterations = 100;
    std::ostringstream a;
    std::ostringstream b;
    std::ostringstream c;
    replay(g, o, a);
    replay(g, o, b);
    o.workers = 4;
    replay(g, o, c);
    const bool pass = a.str() == b.str() && a.str() == c.str() && !a.str().empty();
    return {pass, fmt("%zu-byte log; rerun %s, 4 workers %s", a.str().size(), a.str() == b.str() ? "equal" : "differs",
                      a.str() == c.str() ? "equal" : "differs")};
}

// MCTS against DoNothing, and RAS missile exhaustion.
Verdict agent_sanity() {
    const SearchSpace space = default_search_space();
    const Game game(decode(mid_range_genome(space), space), WorldConfig{});
    AgentBudgets budgets;
    budgets.mcts.iterations = 100;
    int wins = 0;
    for (std::uint64_t i = 0; i < 50; ++i) {
        const PlayedGame g = play_game(game, AgentId::mcts, AgentId::do_nothing, budgets, derive_seed(606, i));
        if (g.outcome.s1 > g.outcome.s2) ++wins;
    }

    // RAS keeps shooting until its budget is gone; without a pickup it must then fall silent.
    int exhausted = 0;
    int violations = 0;
    for (std::uint64_t i = 0; i < 10; ++i) {
        GameState s = game.init(derive_seed(707, i));
        std::mt19937_64 rasRng(derive_seed(707, i, 1));
        std::mt19937_64 idleRng(derive_seed(707, i, 2));
        bool empty = false;
        while (!game.is_terminal(s)) {
            const Ship before = s.ships[0];
            const Action a = act(AgentId::ras, game, s, Player::one, budgets, rasRng);
            const Action b = act(AgentId::do_nothing, game, s, Player::two, budgets, idleRng);
            game.advance(s, a, b);
            const Ship& after = s.ships[0];
            if (after.packsCollected > 0) break;
            if (before.missilesLeft == 0 && after.shotsFired != before.shotsFired) ++violations;
            if (after.missilesLeft < 0) ++violations;
            if (after.missilesLeft == 0) empty = true;
        }
        if (empty) ++exhausted;
    }
    const bool pass = wins >= 45 && violations == 0 && exhausted > 0;
    return {pass, fmt("MCTS won %d/50; RAS emptied its budget in %d/10 pickup-free games, %d shots after empty", wins,
                      exhausted, violations)};
}

double rank_split_p(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> all(a);
    all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    const std::size_t n = all.size();
    const std::size_t m = a.size();
    auto u_of = [&](const std::vector<bool>& inA) {
        double u = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!inA[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (!inA[j] && all[i] > all[j]) u += 1;
            }
        }
        return u;
    };
    double uObs = 0;
    for (double x : a) {
        for (double y : b) uObs += x > y ? 1 : 0;
    }
    const double centre = static_cast<double>(m * b.size()) / 2;
    std::vector<bool> inA(n, false);
    std::fill(inA.begin(), inA.begin() + static_cast<std::ptrdiff_t>(m), true);
    std::sort(inA.begin(), inA.end());
    std::size_t extreme = 0;
    std::size_t splits = 0;
    do {
        ++splits;
        if (std::abs(u_of(inA) - centre) >= std::abs(uObs - centre) - 1e-9) ++extreme;
    } while (std::next_permutation(inA.begin(), inA.end()));
    return std::min(1.0, static_cast<double>(extreme) / static_cast<double>(splits));
}

// Mann-Whitney p against brute-force enumeration and the normal approximation.
Verdict mann_whitney() {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> value(0, 1);
    int bad = 0;
    int checked = 0;
    double worstExact = 0;
    for (std::size_t n1 = 1; n1 <= 5; ++n1) {
        for (std::size_t n2 = 1; n2 <= 5; ++n2) {
            for (int rep = 0; rep < 20; ++rep) {
                std::vector<double> a(n1);
                std::vector<double> b(n2);
                const double shift = rep % 4 * 0.3;
                for (auto& x : a) x = value(rng) + shift;
                for (auto& x : b) x = value(rng);
                const double expected = rank_split_p(a, b);
                const MannWhitneyResult r = mann_whitney_u(a, b, MwuMethod::exact);
                const double diff = std::abs(r.pTwoTailed - expected);
                worstExact = std::max(worstExact, diff);
                if (!r.exact || diff > 1e-12) ++bad;
                ++checked;
            }
        }
    }
    double worstNormal = 0;
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> a(8);
        std::vector<double> b(8);
        const double shift = rep % 5 * 0.15;
        for (auto& x : a) x = value(rng) + shift;
        for (auto& x : b) x = value(rng);
        worstNormal = std::max(worstNormal, std::abs(mann_whitney_u(a, b, MwuMethod::exact).pTwoTailed -
                                                     mann_whitney_u(a, b, MwuMethod::normal).pTwoTailed));
    }
    const bool pass = bad == 0 && worstNormal <= 0.03;
    return {pass, fmt("%d exact cases, %d mismatches (max diff %.1e); 8x8 normal max diff %.4f", checked, bad,
                      worstExact, worstNormal)};
}

// Evaluator call counts per optimizer.
Verdict budget_accounting() {
    const SearchSpace space = default_search_space();
    const auto target = [&space](const Genome& g) { return test::normalized_score(g, space); };
    test::Counted counter(test::noisy(target, 1.0));
    int bad = 0;
    std::string detail;
    for (int n : {1, 2, 17, 100}) {
        for (bool resample : {false, true}) {
            std::mt19937_64 rng(static_cast<std::uint64_t>(n));
            counter.reset();
            const EvolutionTrace r = rmhc_run(space, counter.evaluator(), n, rng, RmhcOptions{resample});
            if (counter.calls() != n || static_cast<int>(r.records.size()) != n) ++bad;

            counter.reset();
            const ImportanceTables tables = brmhc_preprocess(space, counter.evaluator(), rng);
            const int pre = counter.calls();
            if (pre != brmhc_preprocess_cost(space) || tables.evaluations != pre) ++bad;
            counter.reset();
            BrmhcOptions bo;
            bo.resampleParent = resample;
            const EvolutionTrace br = brmhc_run(space, counter.evaluator(), tables, n, rng, bo);
            if (counter.calls() != n || br.preprocessEvals != pre) ++bad;
        }
        std::mt19937_64 rng(static_cast<std::uint64_t>(n) + 100);
        counter.reset();
        const NtbeaResult nr = ntbea_run(space, counter.evaluator(), n, rng);
        if (counter.calls() != n || nr.model.total_samples() != static_cast<std::uint64_t>(n)) ++bad;
    }
    detail = fmt("budgets 1,2,17,100 x rmhc/brmhc/ntbea; B-RMHC preprocess %d calls reported separately; %d mismatches",
                 brmhc_preprocess_cost(space), bad);
    return {bad == 0, detail};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance suite"};
    std::vector<int> criteria;
    std::uint64_t seed = 1;
    int meaEvals = 100;
    int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    app.add_option("-c,--criterion", criteria, "criteria to run (default: all)")->check(CLI::Range(1, 8));
    app.add_option("--seed", seed, "base seed for the full-stack run");
    app.add_option("--mea-evals", meaEvals, "MEA rollout budget for the full-stack run");
    app.add_option("--workers", workers, "worker threads for the full-stack run");
    CLI11_PARSE(app, argc, argv);
    if (criteria.empty()) criteria = {1, 2, 3, 4, 5, 6, 7, 8};

    const std::map<int, std::pair<std::string, std::function<Verdict()>>> suite{
        {1, {"fitness arithmetic", fitness_arithmetic}},
        {2, {"model oracle", model_oracle}},
        {3, {"surrogate benchmark", surrogate_benchmark}},
        {4, {"full-stack mini-experiment", [&] { return full_stack(seed, meaEvals, workers); }}},
        {5, {"replay determinism", determinism}},
        {6, {"agent sanity", agent_sanity}},
        {7, {"Mann-Whitney correctness", mann_whitney}},
        {8, {"budget accounting", budget_accounting}},
    };
    bool allPass = true;
    for (int id : criteria) {
        const auto& [name, run] = suite.at(id);
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %d %s: %s (%s) [%.1f s]\n", id, name.c_str(), v.pass ? "PASS" : "FAIL", v.detail.c_str(),
                    secs);
        std::fflush(stdout);
        allPass = allPass && v.pass;
    }
    return allPass ? 0 : 1;
}
