#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sbe/fitness.hpp"
#include "sbe/optimizers.hpp"
#include "sbe/params.hpp"
#include "sbe/stats.hpp"

namespace sbe {

inline constexpr std::array<std::string_view, 3> kAlgorithms{"rmhc", "brmhc", "ntbea"};

struct ExperimentConfig {
    std::vector<std::string> algorithms{"rmhc", "brmhc", "ntbea"};
    int trials = 50;
    int nEvals = 100;
    int reevalN = 100;
    std::uint64_t seed = 1;
    std::filesystem::path outDir = "results";
    int workers = 1;
    FitnessConfig fitness;
    RmhcOptions rmhc;
    BrmhcOptions brmhc;
    NtbeaOptions ntbea;

    void validate() const;
};

/// Applies one key=value setting; keys match the CLI flag names
/// (algo, trials, evals, reeval, seed, out, workers, world.*, mcts.*, mea.*,
/// ntbea.k, ntbea.c, brmhc.temperature, brmhc.cellWeighting,
/// rmhc.resampleParent, fitness.sides). Throws std::invalid_argument on an
/// unknown key or bad value.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Every key accepted by apply_setting.
std::vector<std::string> config_keys();

/// Reads a flat key=value file ('#' starts a comment) into config.
void load_config_file(ExperimentConfig& config, const std::filesystem::path& path);

/// Canonical key=value dump of every setting.
std::string format_config(const ExperimentConfig& config);

/// Seed for one trial; depends only on (base, algorithm, trial).
std::uint64_t trial_seed(std::uint64_t base, std::string_view algo, int trial);

struct CallAccounting {
    int evolution = 0;
    int preprocess = 0;
    int reevaluation = 0;
    int games_per_call = 3;
};

struct TrialResult {
    std::string algo;
    int trial = 0;
    std::uint64_t seed = 0;
    EvolutionTrace trace;
    ReevaluationSummary summary;
    CallAccounting calls;
    std::optional<NTupleModel> model;
};

struct TrialFailure {
    std::string algo;
    int trial = 0;
    std::string message;
};

struct SignificanceRow {
    std::string comparison;
    double u = 0;
    double p = 1;
};

struct ExperimentResult {
    std::vector<TrialResult> trials;  // algorithm-major, trial order
    std::vector<TrialFailure> failures;
    std::vector<TabulatedSeries> report;
    std::vector<SignificanceRow> significance;
};

/// Builds the evaluator used for one trial; the default simulates games.
using EvaluatorFactory = std::function<Evaluator(const ExperimentConfig&)>;

/// Runs every algorithm x trial, re-evaluates each final genome and writes
/// all CSV outputs under config.outDir. Same config gives byte-identical files.
ExperimentResult run_experiment(const ExperimentConfig& config, const EvaluatorFactory& factory = {});

/// Runs a single trial without writing anything.
TrialResult run_trial(const ExperimentConfig& config, const Evaluator& evaluator, std::string_view algo, int trial);

/// Pairwise tests between algorithms: trial means, and the re-evaluation
/// samples of each algorithm's worst and best game.
std::vector<SignificanceRow> significance_table(const std::map<std::string, std::vector<ReevaluationSummary>>& byAlgo,
                                                const std::vector<std::string>& order);

void write_significance_csv(std::ostream& os, const std::vector<SignificanceRow>& rows);

/// Rebuilds the significance table from the summary_*.csv files in dir.
std::vector<SignificanceRow> compare_directory(const std::filesystem::path& dir);

struct ReplayOptions {
    std::uint64_t seed = 1;
    int evaluations = 1;
    int workers = 1;
    FitnessConfig fitness;
};

/// Re-simulates a genome and writes one CSV line per game plus a fitness
/// line per evaluation. Output does not depend on the worker count.
void replay(const Genome& genome, const ReplayOptions& options, std::ostream& os);

}  // namespace sbe
