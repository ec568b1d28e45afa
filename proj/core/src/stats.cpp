#include "sbe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "sbe/csv.hpp"
#include "sbe/seeding.hpp"

namespace sbe {

double sample_mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double mean = sample_mean(xs);
    double ss = 0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

ReevaluationSummary summarize(Genome genome, std::vector<double> samples) {
    ReevaluationSummary s{std::move(genome), std::move(samples), 0, 0};
    s.mean = sample_mean(s.samples);
    s.standardError = s.samples.empty() ? 0.0 : sample_sd(s.samples) / std::sqrt(static_cast<double>(s.samples.size()));
    return s;
}

ReevaluationSummary reevaluate(const Genome& genome, const Evaluator& evaluator, int n, std::uint64_t seedBase) {
    if (n < 2) throw std::invalid_argument("reevaluate: n must be at least 2");
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) samples.push_back(evaluator(genome, derive_seed(seedBase, static_cast<std::uint64_t>(i))));
    return summarize(genome, std::move(samples));
}

namespace {

struct Ranked {
    std::vector<double> ranks;  // pooled midranks, a's entries first
    double tieTerm = 0;         // sum of t^3 - t over tie groups
};

Ranked midranks(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size() + b.size();
    std::vector<double> pooled;
    pooled.reserve(n);
    pooled.insert(pooled.end(), a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });

    Ranked r;
    r.ranks.assign(n, 0.0);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        const double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) r.ranks[order[k]] = mid;
        const double t = static_cast<double>(j - i + 1);
        r.tieTerm += t * t * t - t;
        i = j + 1;
    }
    return r;
}

double exact_p(const std::vector<double>& ranks, std::size_t n1, double u) {
    const std::size_t n = ranks.size();
    if (n > 30) throw std::invalid_argument("exact Mann-Whitney limited to 30 pooled samples");
    const double n1d = static_cast<double>(n1);
    const double offset = n1d * (n1d + 1) / 2;
    const double centre = n1d * static_cast<double>(n - n1) / 2;
    const double observed = std::abs(u - centre);

    std::vector<char> inA(n, 0);
    std::fill(inA.begin(), inA.begin() + static_cast<std::ptrdiff_t>(n1), 1);
    std::uint64_t extreme = 0;
    std::uint64_t total = 0;
    do {
        double rankSum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (inA[i]) rankSum += ranks[i];
        }
        if (std::abs(rankSum - offset - centre) >= observed - 1e-9) ++extreme;
        ++total;
    } while (std::prev_permutation(inA.begin(), inA.end()));
    return static_cast<double>(extreme) / static_cast<double>(total);
}

double normal_p(std::size_t n1, std::size_t n2, double u, double tieTerm) {
    const double a = static_cast<double>(n1);
    const double b = static_cast<double>(n2);
    const double n = a + b;
    const double variance = a * b / 12.0 * ((n + 1) - tieTerm / (n * (n - 1)));
    if (!(variance > 0)) return 1.0;
    const double z = std::max(std::abs(u - a * b / 2) - 0.5, 0.0) / std::sqrt(variance);
    return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

}  // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b, MwuMethod method) {
    if (a.empty() || b.empty()) throw std::invalid_argument("mann_whitney_u: both samples need at least one value");
    const Ranked r = midranks(a, b);
    const double n1 = static_cast<double>(a.size());
    double rankSum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) rankSum += r.ranks[i];

    MannWhitneyResult out;
    out.u = rankSum - n1 * (n1 + 1) / 2;

    const double first = a.front();
    const bool allEqual = std::all_of(a.begin(), a.end(), [&](double v) { return v == first; }) &&
                          std::all_of(b.begin(), b.end(), [&](double v) { return v == first; });
    if (allEqual) {
        out.degenerate = true;
        out.pTwoTailed = 1.0;
        return out;
    }

    const bool useExact = method == MwuMethod::exact ||
                          (method == MwuMethod::automatic && a.size() <= kExactMwuLimit && b.size() <= kExactMwuLimit);
    out.exact = useExact;
    out.pTwoTailed = useExact ? exact_p(r.ranks, a.size(), out.u) : normal_p(a.size(), b.size(), out.u, r.tieTerm);
    return out;
}

std::vector<TabulatedSeries> sort_and_tabulate(const std::vector<TrialSummary>& summaries) {
    std::vector<TabulatedSeries> series;
    for (const auto& s : summaries) {
        auto it = std::find_if(series.begin(), series.end(), [&](const auto& x) { return x.algo == s.algo; });
        if (it == series.end()) {
            series.push_back({s.algo, {}});
            it = series.end() - 1;
        }
        it->rows.push_back({0, s.trial, s.summary.mean, s.summary.standardError, s.summary.samples.size(),
                            s.summary.genome});
    }
    for (auto& s : series) {
        std::stable_sort(s.rows.begin(), s.rows.end(), [](const auto& x, const auto& y) { return x.mean < y.mean; });
        for (std::size_t i = 0; i < s.rows.size(); ++i) s.rows[i].rank = static_cast<int>(i);
    }
    return series;
}

void write_report_csv(std::ostream& os, const std::vector<TabulatedSeries>& report) {
    os << "algo,trial,mean,stderr,n,genome\n";
    for (const auto& s : report) {
        for (const auto& row : s.rows) {
            os << csv_field(s.algo) << ',' << row.trial << ',' << format_number(row.mean) << ','
               << format_number(row.standardError) << ',' << row.n << ',' << csv_field(format_genome(row.genome))
               << '\n';
        }
    }
}

}  // namespace sbe
