#include "sbe/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <variant>

#include "sbe/csv.hpp"
#include "sbe/seeding.hpp"

namespace sbe {

namespace fs = std::filesystem;

namespace {

template <typename T>
T parse_int(std::string_view key, std::string_view text) {
    T v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("bad integer for " + std::string(key) + ": '" + std::string(text) + "'");
    }
    return v;
}

double parse_real(std::string_view key, std::string_view text) {
    try {
        return parse_number(text);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad number for " + std::string(key) + ": '" + std::string(text) + "'");
    }
}

bool parse_bool(std::string_view key, std::string_view text) {
    if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
    if (text == "0" || text == "false" || text == "no" || text == "off") return false;
    throw std::invalid_argument("bad boolean for " + std::string(key) + ": '" + std::string(text) + "'");
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find(',', pos), text.size());
        const std::string_view item = trim(text.substr(pos, end - pos));
        if (!item.empty()) out.emplace_back(item);
        pos = end + 1;
    }
    return out;
}

struct Setting {
    std::function<void(ExperimentConfig&, std::string_view)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

template <typename Field>
Setting int_setting(std::string_view key, Field field) {
    return {[key, field](ExperimentConfig& c, std::string_view v) { field(c) = parse_int<int>(key, v); },
            [field](const ExperimentConfig& c) { return std::to_string(field(c)); }};
}

template <typename Field>
Setting real_setting(std::string_view key, Field field) {
    return {[key, field](ExperimentConfig& c, std::string_view v) { field(c) = parse_real(key, v); },
            [field](const ExperimentConfig& c) { return format_number(field(c)); }};
}

const std::map<std::string, Setting, std::less<>>& settings() {
    static const auto table = [] {
        std::map<std::string, Setting, std::less<>> t;
        auto algo = Setting{[](ExperimentConfig& c, std::string_view v) {
                                c.algorithms = split_list(v);
                                for (const auto& a : c.algorithms) {
                                    if (std::find(kAlgorithms.begin(), kAlgorithms.end(), a) == kAlgorithms.end()) {
                                        throw std::invalid_argument("unknown algorithm '" + a + "'");
                                    }
                                }
                            },
                            [](const ExperimentConfig& c) {
                                std::string out;
                                for (const auto& a : c.algorithms) out += (out.empty() ? "" : ",") + a;
                                return out;
                            }};
        t["algo"] = algo;
        t["trials"] = int_setting("trials", [](auto& c) -> auto& { return c.trials; });
        t["evals"] = int_setting("evals", [](auto& c) -> auto& { return c.nEvals; });
        t["reeval"] = int_setting("reeval", [](auto& c) -> auto& { return c.reevalN; });
        t["workers"] = int_setting("workers", [](auto& c) -> auto& { return c.workers; });
        t["seed"] = {[](ExperimentConfig& c, std::string_view v) { c.seed = parse_int<std::uint64_t>("seed", v); },
                     [](const ExperimentConfig& c) { return std::to_string(c.seed); }};
        t["out"] = {[](ExperimentConfig& c, std::string_view v) { c.outDir = std::string(v); },
                    [](const ExperimentConfig& c) { return c.outDir.string(); }};

        t["world.width"] = real_setting("world.width", [](auto& c) -> auto& { return c.fitness.world.width; });
        t["world.height"] =
            real_setting("world.height", [](auto& c) -> auto& { return c.fitness.world.height; });
        t["world.maxTicks"] =
            int_setting("world.maxTicks", [](auto& c) -> auto& { return c.fitness.world.maxTicks; });
        t["world.startLives"] =
            int_setting("world.startLives", [](auto& c) -> auto& { return c.fitness.world.startLives; });
        t["world.startMissiles"] = int_setting(
            "world.startMissiles", [](auto& c) -> auto& { return c.fitness.world.startMissiles; });
        t["world.rotationRate"] = real_setting(
            "world.rotationRate", [](auto& c) -> auto& { return c.fitness.world.rotationRate; });
        t["world.thrustAccel"] = real_setting(
            "world.thrustAccel", [](auto& c) -> auto& { return c.fitness.world.thrustAccel; });
        t["world.friction"] =
            real_setting("world.friction", [](auto& c) -> auto& { return c.fitness.world.friction; });
        t["world.shipRadius"] =
            real_setting("world.shipRadius", [](auto& c) -> auto& { return c.fitness.world.shipRadius; });
        t["world.hitScore"] =
            real_setting("world.hitScore", [](auto& c) -> auto& { return c.fitness.world.hitScore; });
        t["world.winBonus"] =
            real_setting("world.winBonus", [](auto& c) -> auto& { return c.fitness.world.winBonus; });
        t["world.resourcePackSize"] = int_setting(
            "world.resourcePackSize", [](auto& c) -> auto& { return c.fitness.world.resourcePackSize; });
        t["world.scoreDivisor"] = real_setting(
            "world.scoreDivisor", [](auto& c) -> auto& { return c.fitness.world.scoreDivisor; });
        t["world.resourceRadius"] = real_setting(
            "world.resourceRadius", [](auto& c) -> auto& { return c.fitness.world.resourceRadius; });
        t["world.blackholeAccelScale"] =
            real_setting("world.blackholeAccelScale",
                         [](auto& c) -> auto& { return c.fitness.world.blackholeAccelScale; });
        t["world.safeZone"] = {[](ExperimentConfig& c, std::string_view v) {
                                   if (v == "center") {
                                       c.fitness.world.safeZonePlacement = SafeZonePlacement::center;
                                   } else if (v == "border") {
                                       c.fitness.world.safeZonePlacement = SafeZonePlacement::border;
                                   } else {
                                       throw std::invalid_argument("world.safeZone must be center or border");
                                   }
                               },
                               [](const ExperimentConfig& c) {
                                   return std::string(c.fitness.world.safeZonePlacement == SafeZonePlacement::center
                                                          ? "center"
                                                          : "border");
                               }};

        t["mcts.iterations"] =
            int_setting("mcts.iterations", [](auto& c) -> auto& { return c.fitness.budgets.mcts.iterations; });
        t["mcts.rolloutDepth"] = int_setting(
            "mcts.rolloutDepth", [](auto& c) -> auto& { return c.fitness.budgets.mcts.rolloutDepth; });
        t["mcts.c"] = real_setting("mcts.c", [](auto& c) -> auto& { return c.fitness.budgets.mcts.c; });
        t["mea.popSize"] =
            int_setting("mea.popSize", [](auto& c) -> auto& { return c.fitness.budgets.mea.popSize; });
        t["mea.seqLength"] =
            int_setting("mea.seqLength", [](auto& c) -> auto& { return c.fitness.budgets.mea.seqLength; });
        t["mea.evals"] = int_setting("mea.evals", [](auto& c) -> auto& { return c.fitness.budgets.mea.evals; });

        t["ntbea.k"] = {[](ExperimentConfig& c, std::string_view v) {
                            c.ntbea.neighbours = parse_int<std::size_t>("ntbea.k", v);
                        },
                        [](const ExperimentConfig& c) { return std::to_string(c.ntbea.neighbours); }};
        t["ntbea.c"] = real_setting("ntbea.c", [](auto& c) -> auto& { return c.ntbea.c; });
        t["brmhc.temperature"] =
            real_setting("brmhc.temperature", [](auto& c) -> auto& { return c.brmhc.temperature; });
        t["brmhc.cellWeighting"] = {[](ExperimentConfig& c, std::string_view v) {
                                        if (v == "absolute") {
                                            c.brmhc.cellWeighting = CellWeighting::absolute;
                                        } else if (v == "signed") {
                                            c.brmhc.cellWeighting = CellWeighting::signed_delta;
                                        } else {
                                            throw std::invalid_argument("brmhc.cellWeighting must be absolute or signed");
                                        }
                                    },
                                    [](const ExperimentConfig& c) {
                                        return std::string(c.brmhc.cellWeighting == CellWeighting::absolute ? "absolute"
                                                                                                            : "signed");
                                    }};
        t["rmhc.resampleParent"] = {[](ExperimentConfig& c, std::string_view v) {
                                        c.rmhc.resampleParent = parse_bool("rmhc.resampleParent", v);
                                        c.brmhc.resampleParent = c.rmhc.resampleParent;
                                    },
                                    [](const ExperimentConfig& c) {
                                        return std::string(c.rmhc.resampleParent ? "true" : "false");
                                    }};
        t["fitness.sides"] = {[](ExperimentConfig& c, std::string_view v) {
                                  if (v == "first") {
                                      c.fitness.sides = SideMode::skill_first;
                                  } else if (v == "second") {
                                      c.fitness.sides = SideMode::skill_second;
                                  } else if (v == "both") {
                                      c.fitness.sides = SideMode::both;
                                  } else {
                                      throw std::invalid_argument("fitness.sides must be first, second or both");
                                  }
                              },
                              [](const ExperimentConfig& c) {
                                  switch (c.fitness.sides) {
                                      case SideMode::skill_first: return std::string("first");
                                      case SideMode::skill_second: return std::string("second");
                                      case SideMode::both: break;
                                  }
                                  return std::string("both");
                              }};
        return t;
    }();
    return table;
}

/// Wraps an evaluator and counts its calls.
class CountingEvaluator {
public:
    explicit CountingEvaluator(const Evaluator& inner) : inner_(inner) {}

    Evaluator bind() {
        return [this](const Genome& g, std::uint64_t seed) {
            ++calls_;
            return inner_(g, seed);
        };
    }
    int calls() const { return calls_; }

private:
    const Evaluator& inner_;
    int calls_ = 0;
};

std::string trace_name(const std::string& algo, int trial) {
    return "trace_" + algo + "_" + std::to_string(trial) + ".csv";
}

std::string summary_name(const std::string& algo, int trial) {
    return "summary_" + algo + "_" + std::to_string(trial) + ".csv";
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void write_trace(const fs::path& path, const TrialResult& r, std::size_t genes) {
    std::ofstream os = open_output(path);
    os << "trial,algo,evalIndex,fitness,bestSoFar";
    for (std::size_t g = 0; g < genes; ++g) os << ",g" << g;
    os << '\n';
    for (const EvalRecord& rec : r.trace.records) {
        os << r.trial << ',' << r.algo << ',' << rec.evalIndex << ',' << format_number(rec.fitnessSample) << ','
           << format_number(rec.bestSoFar);
        for (int level : rec.genome.levels) os << ',' << level;
        os << '\n';
    }
}

void write_summary(const fs::path& path, const TrialResult& r) {
    std::ofstream os = open_output(path);
    os << "algo,trial,sample,fitness\n";
    for (std::size_t i = 0; i < r.summary.samples.size(); ++i) {
        os << r.algo << ',' << r.trial << ',' << i << ',' << format_number(r.summary.samples[i]) << '\n';
    }
}

std::vector<std::string> ordered_algorithms(const std::vector<std::string>& names) {
    std::vector<std::string> out;
    for (std::string_view a : kAlgorithms) {
        if (std::find(names.begin(), names.end(), a) != names.end()) out.emplace_back(a);
    }
    std::vector<std::string> rest;
    for (const auto& n : names) {
        if (std::find(out.begin(), out.end(), n) == out.end() &&
            std::find(rest.begin(), rest.end(), n) == rest.end()) {
            rest.push_back(n);
        }
    }
    std::sort(rest.begin(), rest.end());
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (algorithms.empty()) throw std::invalid_argument("at least one algorithm is required");
    std::set<std::string> seen;
    for (const auto& a : algorithms) {
        if (std::find(kAlgorithms.begin(), kAlgorithms.end(), a) == kAlgorithms.end()) {
            throw std::invalid_argument("unknown algorithm '" + a + "'");
        }
        if (!seen.insert(a).second) throw std::invalid_argument("algorithm '" + a + "' listed twice");
    }
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (nEvals < 1) throw std::invalid_argument("evals must be at least 1");
    if (reevalN < 2) throw std::invalid_argument("reeval must be at least 2");
    if (workers < 1) throw std::invalid_argument("workers must be at least 1");
    if (ntbea.neighbours < 1) throw std::invalid_argument("ntbea.k must be at least 1");
    fitness.world.validate();
    fitness.budgets.validate();
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
    if (key == "algorithms") key = "algo";
    const auto it = settings().find(key);
    if (it == settings().end()) throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
    it->second.set(config, trim(value));
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& [k, _] : settings()) keys.push_back(k);
    return keys;
}

void load_config_file(ExperimentConfig& config, const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        std::string_view text = line;
        if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
        text = trim(text);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(lineNo) + ": expected key=value");
        }
        try {
            apply_setting(config, trim(text.substr(0, eq)), text.substr(eq + 1));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(lineNo) + ": " + e.what());
        }
    }
}

std::string format_config(const ExperimentConfig& config) {
    std::string out;
    for (const auto& [key, s] : settings()) out += key + "=" + s.get(config) + "\n";
    return out;
}

std::uint64_t trial_seed(std::uint64_t base, std::string_view algo, int trial) {
    return derive_seed(base, hash_name(algo), static_cast<std::uint64_t>(trial));
}

TrialResult run_trial(const ExperimentConfig& config, const Evaluator& evaluator, std::string_view algo, int trial) {
    const SearchSpace space = default_search_space();
    TrialResult r;
    r.algo = std::string(algo);
    r.trial = trial;
    r.seed = trial_seed(config.seed, algo, trial);
    std::mt19937_64 rng(derive_seed(r.seed, hash_name("evolve")));

    CountingEvaluator evolution(evaluator);
    if (algo == "rmhc") {
        r.trace = rmhc_run(space, evolution.bind(), config.nEvals, rng, config.rmhc);
    } else if (algo == "brmhc") {
        CountingEvaluator pre(evaluator);
        const ImportanceTables tables = brmhc_preprocess(space, pre.bind(), rng);
        r.calls.preprocess = pre.calls();
        if (r.calls.preprocess != brmhc_preprocess_cost(space)) {
            throw std::logic_error("brmhc pre-processing made an unexpected number of calls");
        }
        r.trace = brmhc_run(space, evolution.bind(), tables, config.nEvals, rng, config.brmhc);
    } else if (algo == "ntbea") {
        NtbeaResult nt = ntbea_run(space, evolution.bind(), config.nEvals, rng, config.ntbea);
        r.trace = std::move(nt.trace);
        r.model = std::move(nt.model);
    } else {
        throw std::invalid_argument("unknown algorithm '" + std::string(algo) + "'");
    }
    r.calls.evolution = evolution.calls();
    if (r.calls.evolution != config.nEvals) {
        throw std::logic_error(r.algo + " spent " + std::to_string(r.calls.evolution) + " evaluations, expected " +
                               std::to_string(config.nEvals));
    }

    CountingEvaluator reeval(evaluator);
    r.summary = reevaluate(r.trace.finalGenome, reeval.bind(), config.reevalN, derive_seed(r.seed, hash_name("reeval")));
    r.calls.reevaluation = reeval.calls();
    if (r.calls.reevaluation != config.reevalN) throw std::logic_error("re-evaluation call count mismatch");
    r.calls.games_per_call = config.fitness.sides == SideMode::both ? 6 : 3;
    return r;
}

std::vector<SignificanceRow> significance_table(const std::map<std::string, std::vector<ReevaluationSummary>>& byAlgo,
                                                const std::vector<std::string>& order) {
    struct Digest {
        std::vector<double> means;
        const ReevaluationSummary* worst = nullptr;
        const ReevaluationSummary* best = nullptr;
    };
    std::map<std::string, Digest> digests;
    for (const auto& [algo, summaries] : byAlgo) {
        Digest d;
        for (const auto& s : summaries) {
            d.means.push_back(s.mean);
            if (!d.worst || s.mean < d.worst->mean) d.worst = &s;
            if (!d.best || s.mean > d.best->mean) d.best = &s;
        }
        if (!summaries.empty()) digests.emplace(algo, std::move(d));
    }

    std::vector<SignificanceRow> rows;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const auto a = digests.find(order[i]);
            const auto b = digests.find(order[j]);
            if (a == digests.end() || b == digests.end()) continue;
            const std::string pair = order[i] + "_vs_" + order[j];
            auto add = [&](const std::string& what, std::span<const double> x, std::span<const double> y) {
                const MannWhitneyResult m = mann_whitney_u(x, y);
                rows.push_back({pair + ":" + what, m.u, m.pTwoTailed});
            };
            add("trial_means", a->second.means, b->second.means);
            add("worst_game", a->second.worst->samples, b->second.worst->samples);
            add("best_game", a->second.best->samples, b->second.best->samples);
        }
    }
    return rows;
}

void write_significance_csv(std::ostream& os, const std::vector<SignificanceRow>& rows) {
    os << "comparison,U,p\n";
    for (const auto& r : rows) os << csv_field(r.comparison) << ',' << format_number(r.u) << ',' << format_number(r.p) << '\n';
}

ExperimentResult run_experiment(const ExperimentConfig& config, const EvaluatorFactory& factory) {
    config.validate();
    std::error_code ec;
    fs::create_directories(config.outDir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + config.outDir.string() + ": " + ec.message());
    {
        std::ofstream probe = open_output(config.outDir / "config.txt");
        probe << format_config(config);
        if (!probe) throw std::runtime_error("cannot write to output directory " + config.outDir.string());
    }

    const Evaluator evaluator = factory ? factory(config) : game_evaluator(default_search_space(), config.fitness);
    const std::size_t genes = default_search_space().size();

    struct Job {
        std::string algo;
        int trial;
    };
    std::vector<Job> jobs;
    for (const auto& algo : config.algorithms) {
        for (int t = 0; t < config.trials; ++t) jobs.push_back({algo, t});
    }

    using Slot = std::variant<std::monostate, TrialResult, TrialFailure>;
    std::vector<Slot> slots(jobs.size());
    std::mutex mutex;
    std::condition_variable ready;
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            Slot result;
            try {
                result = run_trial(config, evaluator, jobs[i].algo, jobs[i].trial);
            } catch (const std::exception& e) {
                result = TrialFailure{jobs[i].algo, jobs[i].trial, e.what()};
            }
            {
                std::lock_guard lock(mutex);
                slots[i] = std::move(result);
            }
            ready.notify_all();
        }
    };
    std::vector<std::jthread> pool;
    const int threads = std::min<int>(config.workers, static_cast<int>(jobs.size()));
    for (int w = 0; w < threads; ++w) pool.emplace_back(work);

    // Single collector: files are written in job order regardless of finish order.
    ExperimentResult out;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        Slot slot;
        {
            std::unique_lock lock(mutex);
            ready.wait(lock, [&] { return slots[i].index() != 0; });
            slot = std::move(slots[i]);
        }
        if (auto* failure = std::get_if<TrialFailure>(&slot)) {
            out.failures.push_back(std::move(*failure));
            continue;
        }
        TrialResult& r = std::get<TrialResult>(slot);
        write_trace(config.outDir / trace_name(r.algo, r.trial), r, genes);
        write_summary(config.outDir / summary_name(r.algo, r.trial), r);
        if (r.model) {
            std::ofstream os = open_output(config.outDir / ("model_" + r.algo + "_" + std::to_string(r.trial) + ".txt"));
            r.model->dump(os);
        }
        out.trials.push_back(std::move(r));
    }
    pool.clear();

    std::vector<TrialSummary> summaries;
    std::map<std::string, std::vector<ReevaluationSummary>> byAlgo;
    for (const auto& r : out.trials) {
        summaries.push_back({r.algo, r.trial, r.summary});
        byAlgo[r.algo].push_back(r.summary);
    }
    out.report = sort_and_tabulate(summaries);
    out.significance = significance_table(byAlgo, ordered_algorithms(config.algorithms));

    {
        std::ofstream os = open_output(config.outDir / "report.csv");
        write_report_csv(os, out.report);
    }
    {
        std::ofstream os = open_output(config.outDir / "significance.csv");
        write_significance_csv(os, out.significance);
    }
    {
        const SearchSpace space = default_search_space();
        std::ofstream os = open_output(config.outDir / "extremes.csv");
        os << "algo,kind,trial,mean,stderr,genome,values\n";
        for (const auto& series : out.report) {
            if (series.rows.empty()) continue;
            auto put = [&](std::string_view kind, const TabulatedRow& row) {
                std::string values;
                for (std::size_t g = 0; g < row.genome.levels.size(); ++g) {
                    if (g) values += ' ';
                    values += format_number(space.gene(g).values[static_cast<std::size_t>(row.genome.levels[g])]);
                }
                os << series.algo << ',' << kind << ',' << row.trial << ',' << format_number(row.mean) << ','
                   << format_number(row.standardError) << ',' << csv_field(format_genome(row.genome)) << ','
                   << values << '\n';
            };
            put("best", series.rows.back());
            put("worst", series.rows.front());
        }
    }
    {
        std::ofstream os = open_output(config.outDir / "accounting.csv");
        os << "algo,trial,evolution_calls,preprocess_calls,reeval_calls,games\n";
        for (const auto& r : out.trials) {
            const int games = (r.calls.evolution + r.calls.preprocess + r.calls.reevaluation) * r.calls.games_per_call;
            os << r.algo << ',' << r.trial << ',' << r.calls.evolution << ',' << r.calls.preprocess << ','
               << r.calls.reevaluation << ',' << games << '\n';
        }
    }
    {
        std::ofstream os = open_output(config.outDir / "failures.csv");
        os << "algo,trial,message\n";
        for (const auto& f : out.failures) os << f.algo << ',' << f.trial << ',' << csv_field(f.message) << '\n';
    }
    return out;
}

std::vector<SignificanceRow> compare_directory(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
    std::map<std::string, std::map<int, std::vector<double>>> samples;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.starts_with("summary_") && name.ends_with(".csv")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        std::ifstream in(path);
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto f = split_csv_line(line);
            if (f.size() != 4) throw std::runtime_error("malformed row in " + path.string());
            samples[f[0]][parse_int<int>("trial", f[1])].push_back(parse_number(f[3]));
        }
    }

    std::vector<std::string> names;
    ExperimentConfig stored;
    if (fs::exists(dir / "config.txt")) {
        load_config_file(stored, dir / "config.txt");
        names = stored.algorithms;
    }
    for (const auto& [algo, _] : samples) names.push_back(algo);

    std::map<std::string, std::vector<ReevaluationSummary>> byAlgo;
    for (auto& [algo, trials] : samples) {
        for (auto& [trial, xs] : trials) byAlgo[algo].push_back(summarize(Genome{}, std::move(xs)));
    }
    return significance_table(byAlgo, ordered_algorithms(names));
}

void replay(const Genome& genome, const ReplayOptions& options, std::ostream& os) {
    if (options.evaluations < 1) throw std::invalid_argument("replay needs at least one evaluation");
    if (options.workers < 1) throw std::invalid_argument("workers must be at least 1");
    const SearchSpace space = default_search_space();
    validate(genome, space);

    std::vector<std::vector<GameRecord>> logs(static_cast<std::size_t>(options.evaluations));
    std::vector<FitnessResult> results(logs.size());
    for (std::size_t e = 0; e < logs.size(); ++e) {
        results[e] = evaluate(genome, space, options.fitness, derive_seed(options.seed, e), &logs[e], options.workers);
    }

    os << "evaluation,game,first,second,seed,ticks,s1,s2,w1,w2,score\n";
    for (std::size_t e = 0; e < logs.size(); ++e) {
        for (const GameRecord& g : logs[e]) {
            os << e << ',' << g.gameIndex << ',' << to_string(g.first) << ',' << to_string(g.second) << ','
               << g.seed << ',' << g.ticks << ',' << format_number(g.outcome.s1) << ','
               << format_number(g.outcome.s2) << ',' << format_number(g.outcome.w1) << ','
               << format_number(g.outcome.w2) << ',' << format_number(g.score) << '\n';
        }
    }
    os << "\nevaluation,t1,t2,t3,fitness\n";
    for (std::size_t e = 0; e < results.size(); ++e) {
        os << e << ',' << format_number(results[e].t1) << ',' << format_number(results[e].t2) << ','
           << format_number(results[e].t3) << ',' << format_number(results[e].fitness) << '\n';
    }
}

}  // namespace sbe
