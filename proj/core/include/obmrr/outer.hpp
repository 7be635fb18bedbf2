#ifndef OBMRR_OUTER_HPP
#define OBMRR_OUTER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "obmrr/accounting.hpp"
#include "obmrr/instance.hpp"
#include "obmrr/ocr.hpp"

namespace obmrr {

/// Argmax-beta_j query for this round. Tie-breaks are frozen: pairs beat
/// singletons at equal score, then the lexicographically smallest vertex
/// set. Degrees above 64 use the separable top-2 shortcut, which picks the
/// same maximizer because a pair's score is the sum of its legs' randomized
/// scores.
template <class Num>
Query pick_query(const Ledger<Num>& ledger, long round, const std::vector<int>& neighbors,
                 const Params<Num>& params) {
    if (neighbors.empty())
        throw std::invalid_argument("pick_query: neighbors must be nonempty");
    std::vector<int> vs(neighbors);
    std::sort(vs.begin(), vs.end());

    if (vs.size() == 1) return Query(vs[0]);

    if (vs.size() <= 64) {
        const auto cands = score_candidates(ledger, round, vs, params);
        const Candidate<Num>* best = &cands.front();
        for (const auto& c : cands) {
            if (c.beta > best->beta ||
                (c.beta == best->beta && c.query.size() > best->query.size()) ||
                (c.beta == best->beta && c.query.size() == best->query.size() &&
                 c.query.lex_less(best->query)))
                best = &c;
        }
        return best->query;
    }

    // top-2 legs by randomized score, smallest index on ties
    int first = -1, second = -1;
    std::vector<Num> rand_beta(vs.size());
    for (std::size_t k = 0; k < vs.size(); ++k) {
        rand_beta[k] = ledger.hypothetical_row(vs[k], round, false, params).dbeta;
        if (first < 0 || rand_beta[k] > rand_beta[first])
            second = first, first = static_cast<int>(k);
        else if (second < 0 || rand_beta[k] > rand_beta[second])
            second = static_cast<int>(k);
    }
    const Query pair(vs[first], vs[second]);
    const Num pair_score = rand_beta[first] + rand_beta[second];

    int best_single = -1;
    Num single_score(0);
    for (std::size_t k = 0; k < vs.size(); ++k) {
        const Num s = ledger.hypothetical_row(vs[k], round, true, params).dbeta;
        if (best_single < 0 || s > single_score) {
            best_single = static_cast<int>(k);
            single_score = s;
        }
    }
    return pair_score >= single_score ? pair : Query(vs[best_single]);
}

/// The selector-independent part of a run: committed query trace and ledger.
/// Depends only on (instance, params), never on selector coins.
template <class Num>
struct PdPlan {
    QueryTrace queries;
    Ledger<Num> ledger;
};

template <class Num>
PdPlan<Num> build_pd_plan(const Instance& ins, const Params<Num>& params) {
    ins.validate();
    params.validate();
    PdPlan<Num> plan{QueryTrace(ins.num_online()), Ledger<Num>(ins.num_offline, ins.duration)};
    for (long j = 0; j < ins.num_online(); ++j) {
        if (ins.arrivals[j].empty()) continue;  // no query, clock still advances
        const Query q = pick_query(plan.ledger, j, ins.arrivals[j], params);
        plan.ledger.accounting_update(j, q, params);
        plan.queries[j] = q;
    }
    return plan;
}

/// Minimum over edges (i,j) of beta_j + sum_{t in [max(j-d+1,1), j]}
/// alpha_{i,t} - Gamma; empty when the instance has no edges. The run
/// satisfies approximate dual feasibility iff the minimum is >= 0.
template <class Num>
std::optional<Num> dual_feasibility_audit(const Ledger<Num>& ledger, const Instance& ins,
                                          const Num& Gamma) {
    std::optional<Num> worst;
    for (long j = 0; j < ins.num_online(); ++j) {
        for (int i : ins.arrivals[j]) {
            const long lo = std::max(j - ledger.duration() + 1, 0L);
            const Num residual = ledger.beta(j) + ledger.alpha_window_sum(i, lo, j) - Gamma;
            if (!worst || residual < *worst) worst = residual;
        }
    }
    return worst;
}

template <class Num>
struct RunResult {
    long matched_count = 0;            // realized matching size for this coin sample
    Num primal, dual;                  // equal by construction
    QueryTrace query_trace;
    std::optional<Num> audit_min;      // empty for edgeless instances
    std::uint64_t seed = 0;
};

template <class Num>
RunResult<Num> run_primal_dual(const Instance& ins, const Params<Num>& params,
                               SelectorKind kind, std::uint64_t seed) {
    PdPlan<Num> plan = build_pd_plan(ins, params);
    const SelectionTrace trace =
        run_selector(plan.queries, ins.duration, kind, seed, ins.num_offline);
    const AvailabilityResult avail = apply_availability(trace, ins.duration, ins.num_offline);

    RunResult<Num> res;
    res.matched_count = avail.total();
    res.primal = plan.ledger.primal();
    res.dual = plan.ledger.dual();
    res.query_trace = std::move(plan.queries);
    res.audit_min = dual_feasibility_audit(plan.ledger, ins, params.Gamma);
    res.seed = seed;
    return res;
}

/// Realized matching size of one seeded selector pass over a fixed query
/// trace; the fast path for sampling many seeds against one plan.
long sample_matched_count(const QueryTrace& queries, long duration, SelectorKind kind,
                          std::uint64_t seed, int num_vertices);

enum class GreedyTieRule { LowestIndex, SeededRandom };

/// Match each arrival to an available neighbor when one exists.
long run_greedy(const Instance& ins, GreedyTieRule rule, std::uint64_t seed = 0);

}  // namespace obmrr

#endif
