#include "obmrr/offline.hpp"

#include <algorithm>
#include <unordered_map>

namespace obmrr {

namespace {

// busy digits are in [0, d-1]; key packs them base-d with the round on top
class OptSearch {
public:
    OptSearch(const Instance& ins) : ins_(ins), d_(std::max(ins.duration, 2L)) {}

    long run() {
        std::vector<long> busy(ins_.num_offline, 0);
        return go(0, busy);
    }

private:
    long go(long j, std::vector<long>& busy) {
        if (j >= ins_.num_online()) return 0;
        const std::uint64_t key = pack(j, busy);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        long best;
        {
            auto next = busy;
            tick(next);
            best = go(j + 1, next);  // leave j unmatched
        }
        for (int i : ins_.arrivals[j]) {
            if (busy[i] != 0) continue;
            auto next = busy;
            next[i] = ins_.duration;
            tick(next);
            best = std::max(best, 1 + go(j + 1, next));
        }
        memo_.emplace(key, best);
        return best;
    }

    static void tick(std::vector<long>& busy) {
        for (auto& b : busy)
            if (b > 0) --b;
    }

    std::uint64_t pack(long j, const std::vector<long>& busy) const {
        std::uint64_t key = static_cast<std::uint64_t>(j);
        for (long b : busy) key = key * static_cast<std::uint64_t>(d_) + static_cast<std::uint64_t>(b);
        return key;
    }

    const Instance& ins_;
    long d_;
    std::unordered_map<std::uint64_t, long> memo_;
};

}  // namespace

long exact_opt(const Instance& ins, std::uint64_t state_limit) {
    ins.validate();
    if (ins.num_online() == 0) return 0;
    // state space bound: d^|V| * |U|
    const std::uint64_t base = static_cast<std::uint64_t>(std::max(ins.duration, 2L));
    std::uint64_t states = static_cast<std::uint64_t>(ins.num_online());
    for (int i = 0; i < ins.num_offline; ++i) {
        if (states > state_limit / base + 1)
            throw StateLimitError("exact_opt: state space d^|V|*|U| exceeds limit");
        states *= base;
    }
    if (states > state_limit)
        throw StateLimitError("exact_opt: state space d^|V|*|U| exceeds limit");
    return OptSearch(ins).run();
}

MatchingLp build_matching_lp(const Instance& ins) {
    ins.validate();
    MatchingLp lp;
    const long u = ins.num_online();

    // variable per edge, in (round, neighbor-order) order
    std::vector<std::vector<std::size_t>> var_of(u);
    for (long j = 0; j < u; ++j) {
        for (int i : ins.arrivals[j]) {
            var_of[j].push_back(lp.edges.size());
            lp.edges.emplace_back(i, j);
        }
    }
    const std::size_t n = lp.edges.size();
    lp.problem.objective.assign(n, 1.0);

    // online rows: sum of edges at round j <= 1
    for (long j = 0; j < u; ++j) {
        std::vector<double> row(n, 0.0);
        for (std::size_t k : var_of[j]) row[k] = 1.0;
        lp.problem.rows.push_back(std::move(row));
        lp.problem.rhs.push_back(1.0);
        lp.row_meta.push_back({MatchingLpRow::Kind::Online, j, -1, -1});
    }

    // window rows: per offline vertex and window [t, t+d-1], all t in [0, u)
    for (int i = 0; i < ins.num_offline; ++i) {
        for (long t = 0; t < u; ++t) {
            std::vector<double> row(n, 0.0);
            for (long j = t; j < std::min(u, t + ins.duration); ++j)
                for (std::size_t k : var_of[j])
                    if (lp.edges[k].first == i) row[k] = 1.0;
            lp.problem.rows.push_back(std::move(row));
            lp.problem.rhs.push_back(1.0);
            lp.row_meta.push_back({MatchingLpRow::Kind::Window, -1, i, t});
        }
    }
    return lp;
}

LpBound lp_upper_bound(const Instance& ins) {
    const MatchingLp lp = build_matching_lp(ins);
    LpBound bound;
    bound.solution = solve_lp(lp.problem);
    bound.value = bound.solution.value;
    bound.optimal = bound.solution.status == LpStatus::Optimal;
    if (bound.solution.status == LpStatus::Infeasible ||
        bound.solution.status == LpStatus::Unbounded)
        throw std::logic_error("matching relaxation must be feasible and bounded");
    return bound;
}

}  // namespace obmrr
