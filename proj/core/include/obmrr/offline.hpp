#ifndef OBMRR_OFFLINE_HPP
#define OBMRR_OFFLINE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "obmrr/instance.hpp"
#include "obmrr/simplex.hpp"

namespace obmrr {

/// Raised when d^|V| * |U| exceeds the state limit; callers fall back to the
/// LP bound.
struct StateLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Maximum number of matched online vertices over all feasible integral
/// schedules. Depth-first search over rounds memoized on the vector of
/// per-vertex remaining busy times (each in [0, d-1]).
long exact_opt(const Instance& ins, std::uint64_t state_limit = 10'000'000);

/// Row metadata for the relaxation built by build_matching_lp.
struct MatchingLpRow {
    enum class Kind { Online, Window } kind;
    long online = -1;   // j for Online rows
    int vertex = -1;    // i for Window rows
    long start = -1;    // t for Window rows: covers rounds [t, t+d-1]
};

struct MatchingLp {
    LpProblem problem;
    std::vector<std::pair<int, long>> edges;  // variable k is edge (i, j)
    std::vector<MatchingLpRow> row_meta;
};

/// One variable per edge; one <=1 row per online vertex and one <=1 row per
/// (offline vertex, window start t) for every t in [1, |U|], truncated
/// windows included.
MatchingLp build_matching_lp(const Instance& ins);

struct LpBound {
    double value = 0.0;
    bool optimal = true;  // false when the simplex hit its iteration cap
    LpSolution solution;
};

/// Optimal value of the relaxation; at least exact_opt up to solver
/// tolerance.
LpBound lp_upper_bound(const Instance& ins);

}  // namespace obmrr

#endif
