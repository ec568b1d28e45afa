#include "sbe/ntuple_model.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace sbe {

NTupleModel::NTupleModel(std::vector<Tuple> tuples) : tuples_(std::move(tuples)), tables_(tuples_.size()) {
    if (tuples_.empty()) throw std::invalid_argument("NTupleModel needs at least one tuple");
    for (const auto& t : tuples_) {
        if (t.empty()) throw std::invalid_argument("NTupleModel: empty tuple");
    }
}

NTupleModel NTupleModel::singletons_and_full(std::size_t geneCount) {
    std::vector<Tuple> tuples;
    tuples.reserve(geneCount + 1);
    Tuple full;
    for (std::size_t g = 0; g < geneCount; ++g) {
        tuples.push_back({g});
        full.push_back(g);
    }
    tuples.push_back(std::move(full));
    return NTupleModel(std::move(tuples));
}

NTupleModel::Pattern NTupleModel::restrict(std::size_t tuple, const Genome& genome) const {
    const Tuple& t = tuples_.at(tuple);
    Pattern p;
    p.reserve(t.size());
    for (std::size_t g : t) p.push_back(genome.levels.at(g));
    return p;
}

void NTupleModel::add(const Genome& genome, double value) {
    for (std::size_t t = 0; t < tuples_.size(); ++t) tables_[t][restrict(t, genome)].add(value);
    ++totalSamples_;
    totalSum_ += value;
}

const TupleStats* NTupleModel::lookup(std::size_t tuple, const Genome& genome) const {
    const auto& table = tables_.at(tuple);
    const auto it = table.find(restrict(tuple, genome));
    return it == table.end() ? nullptr : &it->second;
}

double NTupleModel::ucb(const Genome& genome, double c) const {
    if (totalSamples_ == 0) throw std::logic_error("model_ucb on an empty model");
    const double logN = std::log(static_cast<double>(totalSamples_));
    const double optimistic = global_mean();
    double total = 0;
    for (std::size_t t = 0; t < tuples_.size(); ++t) {
        if (const TupleStats* s = lookup(t, genome)) {
            total += s->mean() + c * std::sqrt(logN / static_cast<double>(s->n));
        } else {
            total += optimistic + c * std::sqrt(logN / kUnseenVisits);
        }
    }
    return total / static_cast<double>(tuples_.size());
}

void NTupleModel::dump(std::ostream& os) const {
    os << "# total_samples " << totalSamples_ << " global_mean " << global_mean() << '\n';
    for (std::size_t t = 0; t < tuples_.size(); ++t) {
        os << "tuple " << t << " genes";
        for (std::size_t g : tuples_[t]) os << ' ' << g;
        os << '\n';
        std::vector<const Table::value_type*> entries;
        entries.reserve(tables_[t].size());
        for (const auto& e : tables_[t]) entries.push_back(&e);
        std::sort(entries.begin(), entries.end(), [](auto* a, auto* b) { return a->first < b->first; });
        for (const auto* e : entries) {
            os << "  ";
            for (std::size_t i = 0; i < e->first.size(); ++i) os << (i ? "," : "") << e->first[i];
            os << " n=" << e->second.n << " mean=" << e->second.mean() << " sd=" << e->second.sd() << '\n';
        }
    }
}

}  // namespace sbe
