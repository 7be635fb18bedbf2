#ifndef OBMRR_VERIFY_HPP
#define OBMRR_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "obmrr/numeric.hpp"
#include "obmrr/ocr.hpp"
#include "obmrr/query.hpp"

namespace obmrr {

/// Match-probability table with one cell per queried (vertex, round) pair;
/// the cell layout itself records which vertices each round proposed.
template <class Value>
struct DmuTable {
    struct Cell {
        int vertex;
        Value dmu;
        double se = 0.0;  // standard error, 0 for exact tables
    };
    std::vector<std::vector<Cell>> rounds;
    long trials = 0;  // 0 for exact tables

    const Cell* find(long round, int vertex) const {
        if (round < 0 || round >= static_cast<long>(rounds.size())) return nullptr;
        for (const auto& c : rounds[round])
            if (c.vertex == vertex) return &c;
        return nullptr;
    }
};

using ExactDmu = DmuTable<Rat>;
using DmuEstimate = DmuTable<double>;

/// Exact joint enumeration of all selector coin outcomes, weighting each
/// leaf by the product of consumed coin probabilities. Branches the coins
/// Algorithm-style: a receiver that reads a live non-Unknown tag consumes
/// no extra coin. Throws when the trace has more than `max_randomized`
/// randomized rounds.
ExactDmu enumerate_exact_dmu(const QueryTrace& queries, long duration,
                             int max_randomized = 12);

/// Monte Carlo estimate over independent seeded trials; cell standard error
/// is sqrt(mean(1-mean)/trials). Deterministic given (seed, trials); jobs
/// only splits the trial range.
DmuEstimate estimate_dmu(const QueryTrace& queries, long duration, long trials,
                         std::uint64_t seed, SelectorKind kind, int jobs = 1);

struct GuaranteeCell {
    long round;      // 0-based
    int vertex;
    int case_id;     // 2 deterministic, 3 randomized fresh, 4 randomized carry
    double bound, value, sigma;
    bool pass;
};

struct GuaranteeReport {
    std::vector<GuaranteeCell> cells;
    bool pass = true;
    std::string notes;
};

/// Check every cell against its selector-guarantee lower bound, with p and
/// the previous occurrence reconstructed from the table itself. Exact
/// tables use zero tolerance.
GuaranteeReport check_ocr_guarantee(const ExactDmu& table, long duration, const Rat& gamma);

/// Monte Carlo variant: flags a cell when its value falls below the bound by
/// more than z combined standard errors (root-sum-square over the estimate
/// terms entering the bound, correlations ignored).
GuaranteeReport check_ocr_guarantee(const DmuEstimate& table, long duration, double gamma,
                                    double z);

struct ReversalRow {
    int vertex;
    double mu_forward, mu_backward, sigma;  // sigma 0 in exact mode
    bool pass;
};

struct ReversalReport {
    std::vector<ReversalRow> rows;
    bool pass = true;
};

/// Total expected match count per vertex on the sequence and its reversal;
/// exact equality via enumeration.
ReversalReport check_reversal_exact(const QueryTrace& queries, long duration,
                                    int max_randomized = 12);

/// Monte Carlo variant; forward and backward runs draw from disjoint derived
/// streams and must agree within z combined standard errors.
ReversalReport check_reversal_mc(const QueryTrace& queries, long duration, long trials,
                                 std::uint64_t seed, double z, int jobs = 1);

/// CSV dump of a guarantee report (1-based round/vertex columns).
std::string guarantee_report_csv(const GuaranteeReport& report);

}  // namespace obmrr

#endif
