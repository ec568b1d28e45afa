#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <random>

#include "sbe/fitness.hpp"
#include "sbe/params.hpp"

namespace sbe::test {

inline double level_sum(const Genome& g) {
    double s = 0;
    for (int level : g.levels) s += level;
    return s;
}

/// Monotone separable target on [0, 10]: ten times the mean normalised level.
inline double normalized_score(const Genome& g, const SearchSpace& space) {
    double s = 0;
    for (std::size_t i = 0; i < g.levels.size(); ++i) {
        s += static_cast<double>(g.levels[i]) / static_cast<double>(space.arity(i) - 1);
    }
    return 10.0 * s / static_cast<double>(g.levels.size());
}

/// target(genome) + N(0, sigma^2) noise drawn from the call's seed.
inline Evaluator noisy(std::function<double(const Genome&)> target, double sigma) {
    return [target = std::move(target), sigma](const Genome& g, std::uint64_t seed) {
        if (sigma == 0) return target(g);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, sigma);
        return target(g) + noise(rng);
    };
}

inline Evaluator deterministic(std::function<double(const Genome&)> target) {
    return [target = std::move(target)](const Genome& g, std::uint64_t) { return target(g); };
}

/// Evaluator wrapper counting calls; copies share the counter.
class Counted {
public:
    explicit Counted(Evaluator inner) : inner_(std::move(inner)), calls_(std::make_shared<std::atomic<int>>(0)) {}

    Evaluator evaluator() const {
        return [inner = inner_, calls = calls_](const Genome& g, std::uint64_t seed) {
            ++*calls;
            return inner(g, seed);
        };
    }
    int calls() const { return calls_->load(); }
    void reset() { *calls_ = 0; }

private:
    Evaluator inner_;
    std::shared_ptr<std::atomic<int>> calls_;
};

}  // namespace sbe::test
