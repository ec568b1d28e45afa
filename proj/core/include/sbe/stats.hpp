#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sbe/fitness.hpp"
#include "sbe/params.hpp"

namespace sbe {

double sample_mean(std::span<const double> xs);
/// Standard deviation with the n-1 denominator; zero for fewer than two samples.
double sample_sd(std::span<const double> xs);

struct ReevaluationSummary {
    Genome genome;
    std::vector<double> samples;
    double mean = 0;
    double standardError = 0;
};

ReevaluationSummary summarize(Genome genome, std::vector<double> samples);

/// n independent fitness samples with seeds derived from seedBase.
ReevaluationSummary reevaluate(const Genome& genome, const Evaluator& evaluator, int n, std::uint64_t seedBase);

enum class MwuMethod : std::uint8_t { automatic, exact, normal };

struct MannWhitneyResult {
    double u = 0;            // U statistic of the first sample
    double pTwoTailed = 1;
    bool exact = false;
    bool degenerate = false; // every pooled value identical
};

/// Largest per-sample size for which automatic mode enumerates exactly.
inline constexpr std::size_t kExactMwuLimit = 8;

/// Two-tailed Mann-Whitney U with midranks for ties. Exact mode enumerates
/// every split of the pooled ranks; normal mode uses tie and continuity
/// corrections.
MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                                 MwuMethod method = MwuMethod::automatic);

struct TrialSummary {
    std::string algo;
    int trial = 0;
    ReevaluationSummary summary;
};

struct TabulatedRow {
    int rank = 0;  // position after sorting, from 0
    int trial = 0;
    double mean = 0;
    double standardError = 0;
    std::size_t n = 0;
    Genome genome;
};

struct TabulatedSeries {
    std::string algo;
    std::vector<TabulatedRow> rows;  // ascending by mean
};

/// Groups summaries by algorithm (first-seen order) and sorts each series
/// ascending by mean; equal means keep their input order.
std::vector<TabulatedSeries> sort_and_tabulate(const std::vector<TrialSummary>& summaries);

/// CSV with columns algo,trial,mean,stderr,n,genome.
void write_report_csv(std::ostream& os, const std::vector<TabulatedSeries>& report);

}  // namespace sbe
