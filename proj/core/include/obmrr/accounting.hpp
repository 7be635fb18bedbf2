#ifndef OBMRR_ACCOUNTING_HPP
#define OBMRR_ACCOUNTING_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "obmrr/numeric.hpp"
#include "obmrr/query.hpp"

namespace obmrr {

/// Dual split weights and the selector's correlation constant. Gamma is the
/// ratio the feasibility audit checks against.
template <class Num>
struct Params {
    Num gamma;
    Num beta1;
    Num beta2;
    Num Gamma;

    void validate() const {
        if (!(beta1 >= beta2 && beta2 >= Num(0)))
            throw std::invalid_argument("params: need beta1 >= beta2 >= 0");
        if (!(gamma >= Num(0) && gamma <= Num(1)))
            throw std::invalid_argument("params: need gamma in [0, 1]");
        if (!(Gamma > Num(0) && Gamma <= Num(1)))
            throw std::invalid_argument("params: need Gamma in (0, 1]");
    }
};

enum class RowKind { Deterministic, RandomizedFresh, Randomized };

inline const char* to_string(RowKind k) {
    switch (k) {
        case RowKind::Deterministic: return "deterministic";
        case RowKind::RandomizedFresh: return "fresh";
        case RowKind::Randomized: return "randomized";
    }
    return "?";
}

/// One (vertex, round) accounting entry. Invariants: p = u + r,
/// dalpha + dbeta = dmu, 0 <= dmu <= p <= 1, r >= 0, u >= 0.
template <class Num>
struct LedgerRow {
    int vertex = -1;
    long round = -1;
    Num p, r, u, dmu, dbeta, dalpha;
    RowKind kind = RowKind::Deterministic;
};

/// min{1 - p, (1 - r)/2}: the cap on past released mass chargeable against
/// an edge in the feasibility analysis.
template <class Num>
Num phi(const Num& p, const Num& r) {
    if (!(Num(0) <= r && r <= p && p <= Num(1)))
        throw std::domain_error("phi: need 0 <= r <= p <= 1");
    const Num a = Num(1) - p;
    const Num b = (Num(1) - r) / 2;
    return a < b ? a : b;
}

/// Deterministic probability ledger driven by the chosen queries. The match
/// increment dmu is booked at the selector guarantee's lower bound, so the
/// ledger never looks at selector coins: p for a deterministic round, p/2 +
/// gamma*u for a randomized one (u = 0 when the previous occurrence has
/// released, i.e. prev <= round - d).
///
/// A ledger belongs to one run; share read-only snapshots for auditing.
template <class Num>
class Ledger {
public:
    Ledger(int num_offline, long duration)
        : duration_(duration), rows_(num_offline) {
        if (duration < 1) throw std::invalid_argument("duration must be >= 1");
        if (num_offline < 0) throw std::invalid_argument("num_offline must be >= 0");
    }

    long duration() const { return duration_; }
    int num_vertices() const { return static_cast<int>(rows_.size()); }
    long last_round() const { return last_round_; }

    /// p = 1 - sum of dmu over rounds [round-d+1, round-1], clamped to [0,1];
    /// 1 when the vertex has no rows in the window.
    Num availability(int vertex, long round) const {
        Num s(0);
        for (auto it = rows_.at(vertex).rbegin(); it != rows_.at(vertex).rend(); ++it) {
            if (it->round <= round - duration_) break;
            if (it->round < round) s += it->dmu;
        }
        Num p = Num(1) - s;
        if (p < Num(0)) p = Num(0);
        if (p > Num(1)) p = Num(1);
        return p;
    }

    /// Largest round' < round with a row for this vertex.
    std::optional<long> prev_round(int vertex, long round) const {
        for (auto it = rows_.at(vertex).rbegin(); it != rows_.at(vertex).rend(); ++it)
            if (it->round < round) return it->round;
        return std::nullopt;
    }

    /// Row this vertex would receive at `round` in a deterministic or
    /// randomized query, without mutating the ledger.
    LedgerRow<Num> hypothetical_row(int vertex, long round, bool deterministic,
                                    const Params<Num>& params) const {
        LedgerRow<Num> row;
        row.vertex = vertex;
        row.round = round;
        row.p = availability(vertex, round);

        const auto prev = prev_round(vertex, round);
        const bool fresh = !prev || *prev <= round - duration_;
        if (fresh) {
            row.u = Num(0);
            row.r = row.p;
        } else {
            const LedgerRow<Num>& pr = row_at(vertex, *prev);
            row.u = pr.p - pr.dmu;
            row.r = row.p - row.u;
        }
        row.kind = deterministic ? RowKind::Deterministic
                                 : (fresh ? RowKind::RandomizedFresh : RowKind::Randomized);
        row.dmu = deterministic ? row.p : row.p / 2 + params.gamma * row.u;
        row.dbeta = params.beta1 * row.r / 2 + params.beta2 * (row.dmu - row.r / 2);
        row.dalpha = row.dmu - row.dbeta;
#ifndef NDEBUG
        check_release_identity(row, prev);
#endif
        return row;
    }

    /// Commit the rows of one round's query. Rounds must arrive in strictly
    /// increasing order; the ledger must be finalized through round-1.
    std::vector<LedgerRow<Num>> accounting_update(long round, const Query& q,
                                                  const Params<Num>& params) {
        if (round <= last_round_)
            throw std::logic_error("accounting_update: rounds must be strictly increasing");
        std::vector<LedgerRow<Num>> out;
        for (int k = 0; k < q.size(); ++k) {
            const int v = q[k];
            if (v < 0 || v >= num_vertices())
                throw std::out_of_range("accounting_update: query vertex out of range");
            out.push_back(hypothetical_row(v, round, q.deterministic(), params));
        }
        Num round_beta(0);
        for (const auto& row : out) {
            rows_[row.vertex].push_back(row);
            round_beta += row.dbeta;
            primal_ += row.dmu;
            alpha_total_ += row.dalpha;
        }
        if (static_cast<long>(beta_.size()) <= round) beta_.resize(round + 1, Num(0));
        beta_[round] = round_beta;
        beta_total_ += round_beta;
        last_round_ = round;
        return out;
    }

    /// beta_j: the committed query's score at round j (0 for empty rounds).
    Num beta(long round) const {
        if (round < 0 || round >= static_cast<long>(beta_.size())) return Num(0);
        return beta_[round];
    }

    /// Sum of alpha_{vertex,t} for t in [first, last] (inclusive).
    Num alpha_window_sum(int vertex, long first, long last) const {
        Num s(0);
        for (auto it = rows_.at(vertex).rbegin(); it != rows_.at(vertex).rend(); ++it) {
            if (it->round < first) break;
            if (it->round <= last) s += it->dalpha;
        }
        return s;
    }

    Num primal() const { return primal_; }
    Num dual() const { return alpha_total_ + beta_total_; }

    const std::vector<LedgerRow<Num>>& rows(int vertex) const { return rows_.at(vertex); }

    std::vector<LedgerRow<Num>> all_rows() const {
        std::vector<LedgerRow<Num>> out;
        for (const auto& v : rows_) out.insert(out.end(), v.begin(), v.end());
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
            return a.round != b.round ? a.round < b.round : a.vertex < b.vertex;
        });
        return out;
    }

    /// Dump for offline inspection. Vertex and round columns are 1-based.
    std::string to_csv() const {
        std::ostringstream os;
        os << "vertex,round,kind,p,r,u,dmu,dbeta,dalpha\n";
        for (const auto& row : all_rows()) {
            os << row.vertex + 1 << ',' << row.round + 1 << ',' << to_string(row.kind) << ','
               << num_to_string(row.p) << ',' << num_to_string(row.r) << ','
               << num_to_string(row.u) << ',' << num_to_string(row.dmu) << ','
               << num_to_string(row.dbeta) << ',' << num_to_string(row.dalpha) << '\n';
        }
        return os.str();
    }

private:
    const LedgerRow<Num>& row_at(int vertex, long round) const {
        for (auto it = rows_[vertex].rbegin(); it != rows_[vertex].rend(); ++it)
            if (it->round == round) return *it;
        throw std::logic_error("ledger: missing row");
    }

#ifndef NDEBUG
    // r must equal the released window mass sum_{t in [prev-d+1, round-d]} dmu_t;
    // fresh rows carry r = p by convention instead
    void check_release_identity(const LedgerRow<Num>& row,
                                const std::optional<long>& prev) const {
        if (!prev || *prev <= row.round - duration_) return;
        Num released(0);
        for (const auto& old : rows_[row.vertex])
            if (old.round >= *prev - duration_ + 1 && old.round <= row.round - duration_)
                released += old.dmu;
        assert(close_enough(row.r, released));
        (void)released;
    }
    static bool close_enough(const Rat& a, const Rat& b) { return a == b; }
    static bool close_enough(double a, double b) { return std::abs(a - b) <= 1e-9; }
#endif

    long duration_;
    std::vector<std::vector<LedgerRow<Num>>> rows_;  // per vertex, round-ascending
    std::vector<Num> beta_;                          // per round
    Num primal_{0}, alpha_total_{0}, beta_total_{0};
    long last_round_ = -1;
};

template <class Num>
struct Candidate {
    Query query;
    Num beta;
};

/// All candidate queries at this round with their beta_j scores: every
/// singleton (deterministic score) and every unordered pair (sum of the two
/// randomized leg scores). Purely hypothetical; the ledger is not touched.
template <class Num>
std::vector<Candidate<Num>> score_candidates(const Ledger<Num>& ledger, long round,
                                             const std::vector<int>& neighbors,
                                             const Params<Num>& params) {
    if (neighbors.empty())
        throw std::invalid_argument("score_candidates: neighbors must be nonempty");
    std::vector<int> vs(neighbors);
    std::sort(vs.begin(), vs.end());

    std::vector<Candidate<Num>> out;
    std::vector<Num> rand_beta;
    rand_beta.reserve(vs.size());
    for (int v : vs) {
        out.push_back({Query(v), ledger.hypothetical_row(v, round, true, params).dbeta});
        rand_beta.push_back(ledger.hypothetical_row(v, round, false, params).dbeta);
    }
    for (std::size_t a = 0; a < vs.size(); ++a)
        for (std::size_t b = a + 1; b < vs.size(); ++b)
            out.push_back({Query(vs[a], vs[b]), rand_beta[a] + rand_beta[b]});
    return out;
}

}  // namespace obmrr

#endif
