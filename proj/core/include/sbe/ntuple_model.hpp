#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "sbe/params.hpp"

namespace sbe {

/// Running sample summary kept per look-up table entry.
struct TupleStats {
    std::uint64_t n = 0;
    double sum = 0;
    double sumSq = 0;

    void add(double v) {
        ++n;
        sum += v;
        sumSq += v * v;
    }
    double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
    /// Sample variance (n-1 denominator); zero below two samples.
    double variance() const {
        if (n < 2) return 0.0;
        const double dn = static_cast<double>(n);
        const double v = (sumSq - sum * sum / dn) / (dn - 1.0);
        return v > 0 ? v : 0.0;
    }
    double sd() const { return std::sqrt(variance()); }
    double standard_error() const { return n ? sd() / std::sqrt(static_cast<double>(n)) : 0.0; }
};

/// Fitness landscape model over a set of N-tuples (subsets of gene indices).
/// Each tuple owns a look-up table keyed by the genome restricted to it.
class NTupleModel {
public:
    using Tuple = std::vector<std::size_t>;
    using Pattern = std::vector<int>;

    struct PatternHash {
        std::size_t operator()(const Pattern& p) const noexcept { return GenomeHash{}(Genome{p}); }
    };
    using Table = std::unordered_map<Pattern, TupleStats, PatternHash>;

    /// Visit count charged to a pattern the model has never seen.
    static constexpr double kUnseenVisits = 0.5;

    explicit NTupleModel(std::vector<Tuple> tuples);
    /// Every 1-tuple plus the single full tuple.
    static NTupleModel singletons_and_full(std::size_t geneCount);

    void add(const Genome& genome, double value);

    /// Mean over tuples of mean + c*sqrt(ln N / n). A pattern without an
    /// entry scores the global sample mean with n = kUnseenVisits.
    double ucb(const Genome& genome, double c) const;
    double estimate(const Genome& genome) const { return ucb(genome, 0.0); }

    const TupleStats* lookup(std::size_t tuple, const Genome& genome) const;
    Pattern restrict(std::size_t tuple, const Genome& genome) const;

    std::size_t tuple_count() const { return tuples_.size(); }
    const Tuple& tuple(std::size_t t) const { return tuples_.at(t); }
    const Table& table(std::size_t t) const { return tables_.at(t); }
    std::uint64_t total_samples() const { return totalSamples_; }
    double global_mean() const { return totalSamples_ ? totalSum_ / static_cast<double>(totalSamples_) : 0.0; }

    /// Text dump of every table, entries sorted by pattern.
    void dump(std::ostream& os) const;

private:
    std::vector<Tuple> tuples_;
    std::vector<Table> tables_;
    std::uint64_t totalSamples_ = 0;
    double totalSum_ = 0;
};

inline void model_add(NTupleModel& model, const Genome& genome, double value) { model.add(genome, value); }
inline double model_ucb(const NTupleModel& model, const Genome& genome, double c) { return model.ucb(genome, c); }

}  // namespace sbe
