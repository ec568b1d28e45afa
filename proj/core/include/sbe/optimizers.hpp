#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "sbe/fitness.hpp"
#include "sbe/ntuple_model.hpp"
#include "sbe/params.hpp"

namespace sbe {

struct EvalRecord {
    int evalIndex = 0;
    Genome genome;         // the genome that was evaluated
    double fitnessSample = 0;
    double bestSoFar = 0;  // incumbent's recorded (or, for NTBEA, estimated) fitness afterwards
};

struct EvolutionTrace {
    std::vector<EvalRecord> records;  // one per budgeted evaluator call
    Genome finalGenome;
    int preprocessEvals = 0;          // charged outside the evolution budget
};

struct RmhcOptions {
    /// Re-evaluate the parent next to each offspring instead of reusing its
    /// recorded fitness. Each generation then costs two calls.
    bool resampleParent = false;
};

/// Random mutation hill climber. Starts from a random genome with no recorded
/// fitness, so exactly nEvals calls are spent, each on a one-gene mutant; the
/// mutant replaces the incumbent when its sample is >= the incumbent's.
EvolutionTrace rmhc_run(const SearchSpace& space, const Evaluator& evaluator, int nEvals, std::mt19937_64& rng,
                        const RmhcOptions& options = {});

/// Per-gene importance measured before biased evolution. Requires the
/// default 30-gene layout.
struct ImportanceTables {
    std::map<std::size_t, double> scalarImportance;  // gene -> SD of probe fitnesses
    /// [gridSize-1]: cell index -> fitnessOff - fitnessOn
    std::array<std::map<std::size_t, double>, 4> blackHoleImportance;
    int evaluations = 0;
};

ImportanceTables brmhc_preprocess(const SearchSpace& space, const Evaluator& evaluator, std::mt19937_64& rng);

/// Number of evaluator calls brmhc_preprocess makes for this space.
int brmhc_preprocess_cost(const SearchSpace& space);

/// Samples index g with probability exp(I_g/t) / sum_h exp(I_h/t).
std::size_t softmax_select(std::span<const double> importances, double temperature, std::mt19937_64& rng);

enum class CellWeighting : std::uint8_t { absolute, signed_delta };

struct BrmhcOptions {
    double temperature = 0;  // <= 0 selects max(importance)/3
    CellWeighting cellWeighting = CellWeighting::absolute;
    bool resampleParent = false;
};

/// Mutation weights for every gene given the current genome's grid size.
std::vector<double> brmhc_gene_weights(const ImportanceTables& tables, const Genome& current,
                                       const SearchSpace& space, CellWeighting weighting);

/// RMHC whose mutated gene is drawn by softmax over importance weights.
EvolutionTrace brmhc_run(const SearchSpace& space, const Evaluator& evaluator, const ImportanceTables& tables,
                         int nEvals, std::mt19937_64& rng, const BrmhcOptions& options = {});

struct NtbeaOptions {
    std::size_t neighbours = 30;
    double c = 1.0;
};

struct NtbeaResult {
    EvolutionTrace trace;
    NTupleModel model;
};

/// N-tuple bandit EA: evaluate the current point, add it to the landscape
/// model, then move to the neighbour with the highest model UCB. Recommends
/// the genome with the best c=0 estimate among everything evaluated and the
/// final neighbour set.
NtbeaResult ntbea_run(const SearchSpace& space, const Evaluator& evaluator, int nEvals, std::mt19937_64& rng,
                      const NtbeaOptions& options = {});

}  // namespace sbe
