#include "sbe/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "sbe/seeding.hpp"
#include "sbe/stats.hpp"

namespace sbe {

namespace {

constexpr double kTieTolerance = 1e-9;

bool clearly_above(double value, double than) {
    return std::isinf(than) ? value > than : value > than + kTieTolerance * std::max(1.0, std::abs(than));
}

void require_budget(int nEvals) {
    if (nEvals < 1) throw std::invalid_argument("nEvals must be at least 1");
}

void require_game_layout(const SearchSpace& space) {
    if (space.size() != gene::kCount) {
        throw std::invalid_argument("biased mutation needs the 30-gene game layout");
    }
}

/// Evaluator calls with seeds derived from one stream so runs replay exactly.
class SeededCalls {
public:
    SeededCalls(const Evaluator& evaluator, std::mt19937_64& rng) : evaluator_(evaluator), stream_(rng()) {}

    double operator()(const Genome& g) { return evaluator_(g, derive_seed(stream_, calls_++)); }
    int calls() const { return static_cast<int>(calls_); }

private:
    const Evaluator& evaluator_;
    std::uint64_t stream_;
    std::uint64_t calls_ = 0;
};

template <typename ChooseGene>
EvolutionTrace hill_climb(const SearchSpace& space, const Evaluator& evaluator, int nEvals, std::mt19937_64& rng,
                          bool resampleParent, ChooseGene chooseGene) {
    require_budget(nEvals);
    EvolutionTrace trace;
    trace.records.reserve(static_cast<std::size_t>(nEvals));

    Genome current = random_genome(space, rng);
    double best = -std::numeric_limits<double>::infinity();
    bool evaluatedOnce = false;
    SeededCalls fitness(evaluator, rng);

    auto record = [&](const Genome& g, double sample) {
        trace.records.push_back({fitness.calls() - 1, g, sample, best});
    };

    while (fitness.calls() < nEvals) {
        Genome child = mutate(current, space, rng, chooseGene(current));
        if (resampleParent && evaluatedOnce && nEvals - fitness.calls() >= 2) {
            best = fitness(current);
            record(current, best);
        }
        const double sample = fitness(child);
        if (sample >= best) {
            current = child;
            best = sample;
        }
        evaluatedOnce = true;
        record(child, sample);
    }
    trace.finalGenome = current;
    return trace;
}

}  // namespace

EvolutionTrace rmhc_run(const SearchSpace& space, const Evaluator& evaluator, int nEvals, std::mt19937_64& rng,
                        const RmhcOptions& options) {
    return hill_climb(space, evaluator, nEvals, rng, options.resampleParent,
                      [&](const Genome&) { return std::optional<std::size_t>{}; });
}

int brmhc_preprocess_cost(const SearchSpace& space) {
    require_game_layout(space);
    int total = 0;
    for (std::size_t g = 0; g < space.size(); ++g) {
        if (!gene::is_cell(g)) total += static_cast<int>(space.arity(g));
    }
    for (int grid = 1; grid <= 4; ++grid) total += 1 + grid * grid;
    return total;
}

ImportanceTables brmhc_preprocess(const SearchSpace& space, const Evaluator& evaluator, std::mt19937_64& rng) {
    require_game_layout(space);
    ImportanceTables tables;
    SeededCalls fitness(evaluator, rng);

    // Group A: every non-cell gene swept over all its values in a random context.
    for (std::size_t g = 0; g < space.size(); ++g) {
        if (gene::is_cell(g)) continue;
        Genome probe = random_genome(space, rng);
        std::vector<double> values;
        for (int level = 0; level < static_cast<int>(space.arity(g)); ++level) {
            probe.levels[g] = level;
            values.push_back(fitness(probe));
        }
        tables.scalarImportance[g] = sample_sd(values);
    }

    // Group B: per grid size, each cell enabled alone against the all-off layout.
    Genome probe = random_genome(space, rng);
    for (int grid = 1; grid <= 4; ++grid) {
        for (std::size_t c = 0; c < gene::kCellCount; ++c) probe.levels[gene::kFirstCell + c] = 0;
        probe.levels[gene::kGridSize] = grid - 1;
        const double fitnessOff = fitness(probe);
        auto& deltas = tables.blackHoleImportance[static_cast<std::size_t>(grid - 1)];
        for (int b = 0; b < grid * grid; ++b) {
            const std::size_t cell = gene::kFirstCell + static_cast<std::size_t>(b);
            probe.levels[cell] = 1;
            deltas[static_cast<std::size_t>(b)] = fitnessOff - fitness(probe);
            probe.levels[cell] = 0;
        }
    }
    tables.evaluations = fitness.calls();
    return tables;
}

std::size_t softmax_select(std::span<const double> importances, double temperature, std::mt19937_64& rng) {
    if (importances.empty()) throw std::invalid_argument("softmax_select: no candidates");
    if (!(temperature > 0)) throw std::invalid_argument("softmax_select: temperature must be positive");
    const double peak = *std::max_element(importances.begin(), importances.end());
    std::vector<double> weights;
    weights.reserve(importances.size());
    for (double v : importances) weights.push_back(std::exp((v - peak) / temperature));
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    return pick(rng);
}

std::vector<double> brmhc_gene_weights(const ImportanceTables& tables, const Genome& current,
                                       const SearchSpace& space, CellWeighting weighting) {
    require_game_layout(space);
    std::vector<double> w(space.size(), 0.0);
    double scalarMax = 0;
    for (const auto& [g, importance] : tables.scalarImportance) {
        w.at(g) = importance;
        scalarMax = std::max(scalarMax, importance);
    }

    const int grid = static_cast<int>(space.gene(gene::kGridSize).values[static_cast<std::size_t>(
        current.levels[gene::kGridSize])]);
    const auto& deltas = tables.blackHoleImportance.at(static_cast<std::size_t>(grid - 1));
    double cellMax = 0;
    for (const auto& [cell, delta] : deltas) cellMax = std::max(cellMax, std::abs(delta));
    const double rescale = (cellMax > 0 && scalarMax > 0) ? scalarMax / cellMax : 1.0;
    for (const auto& [cell, delta] : deltas) {
        const double raw = weighting == CellWeighting::absolute ? std::abs(delta) : delta;
        w.at(gene::kFirstCell + cell) = raw * rescale;
    }
    return w;
}

EvolutionTrace brmhc_run(const SearchSpace& space, const Evaluator& evaluator, const ImportanceTables& tables,
                         int nEvals, std::mt19937_64& rng, const BrmhcOptions& options) {
    require_game_layout(space);
    auto choose = [&](const Genome& current) -> std::optional<std::size_t> {
        const std::vector<double> w = brmhc_gene_weights(tables, current, space, options.cellWeighting);
        double temperature = options.temperature;
        if (temperature <= 0) {
            const double peak = *std::max_element(w.begin(), w.end());
            temperature = peak > 0 ? peak / 3.0 : 1.0;
        }
        return softmax_select(w, temperature, rng);
    };
    EvolutionTrace trace = hill_climb(space, evaluator, nEvals, rng, options.resampleParent, choose);
    trace.preprocessEvals = tables.evaluations;
    return trace;
}

NtbeaResult ntbea_run(const SearchSpace& space, const Evaluator& evaluator, int nEvals, std::mt19937_64& rng,
                      const NtbeaOptions& options) {
    require_budget(nEvals);
    if (options.neighbours < 1) throw std::invalid_argument("ntbea: neighbourhood size must be at least 1");

    NtbeaResult result{{}, NTupleModel::singletons_and_full(space.size())};
    NTupleModel& model = result.model;
    EvolutionTrace& trace = result.trace;
    trace.records.reserve(static_cast<std::size_t>(nEvals));

    Genome current = random_genome(space, rng);
    SeededCalls fitness(evaluator, rng);
    std::vector<Genome> evaluated;
    std::vector<Genome> frontier;
    Genome incumbent;
    double incumbentEstimate = -std::numeric_limits<double>::infinity();

    for (int i = 0; i < nEvals; ++i) {
        const double sample = fitness(current);
        model.add(current, sample);
        evaluated.push_back(current);

        // The incumbent is re-scored each step since new samples move every estimate.
        incumbentEstimate = -std::numeric_limits<double>::infinity();
        for (const Genome& g : evaluated) {
            const double e = model.estimate(g);
            if (clearly_above(e, incumbentEstimate)) {
                incumbentEstimate = e;
                incumbent = g;
            }
        }
        trace.records.push_back({i, current, sample, incumbentEstimate});

        frontier = neighbours(current, space, options.neighbours, rng);
        std::vector<double> values(frontier.size());
        for (std::size_t n = 0; n < frontier.size(); ++n) values[n] = model.ucb(frontier[n], options.c);
        const double top = *std::max_element(values.begin(), values.end());
        // Equal UCBs summed in a different order can differ in the last bits.
        const double slack = kTieTolerance * std::max(1.0, std::abs(top));
        std::vector<std::size_t> best;
        for (std::size_t n = 0; n < values.size(); ++n) {
            if (values[n] >= top - slack) best.push_back(n);
        }
        std::size_t pick = best.front();
        if (best.size() > 1) {
            std::uniform_int_distribution<std::size_t> tie(0, best.size() - 1);
            pick = best[tie(rng)];
        }
        current = frontier[pick];
    }

    Genome recommended = incumbent;
    double recommendedEstimate = incumbentEstimate;
    for (const Genome& g : frontier) {
        const double e = model.estimate(g);
        if (clearly_above(e, recommendedEstimate)) {
            recommendedEstimate = e;
            recommended = g;
        }
    }
    trace.finalGenome = std::move(recommended);
    return result;
}

}  // namespace sbe
