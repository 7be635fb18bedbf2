#include "obmrr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

namespace obmrr {

namespace {

// Enumeration state per tracked vertex: rounds of busyness left, tag kind,
// rounds of tag readability left. Values decrement on every round advance
// and saturate at the remaining horizon, which merges states that only
// differ beyond the end of the trace.
struct SlotCodec {
    static constexpr int kFields = 3;

    static std::uint16_t busy(const std::vector<std::uint16_t>& s, int slot) {
        return s[kFields * slot];
    }
    static std::uint16_t kind(const std::vector<std::uint16_t>& s, int slot) {
        return s[kFields * slot + 1];
    }
    static std::uint16_t left(const std::vector<std::uint16_t>& s, int slot) {
        return s[kFields * slot + 2];
    }
    static void set_busy(std::vector<std::uint16_t>& s, int slot, long v) {
        s[kFields * slot] = clamp16(v);
    }
    static void set_tag(std::vector<std::uint16_t>& s, int slot, TagKind k, long v) {
        s[kFields * slot + 1] = static_cast<std::uint16_t>(k);
        s[kFields * slot + 2] = clamp16(v);
    }
    static TagKind read_tag(const std::vector<std::uint16_t>& s, int slot) {
        return left(s, slot) >= 1 ? static_cast<TagKind>(kind(s, slot)) : TagKind::Unknown;
    }
    static void advance(std::vector<std::uint16_t>& s, long cap) {
        for (std::size_t k = 0; k < s.size(); k += kFields) {
            std::uint16_t& b = s[k];
            std::uint16_t& t = s[k + 2];
            b = b > 0 ? static_cast<std::uint16_t>(b - 1) : 0;
            t = t > 0 ? static_cast<std::uint16_t>(t - 1) : 0;
            if (b > cap) b = static_cast<std::uint16_t>(cap);
            if (t > cap) t = static_cast<std::uint16_t>(cap);
            if (t == 0) s[k + 1] = static_cast<std::uint16_t>(TagKind::Unknown);
        }
    }
    static std::uint16_t clamp16(long v) {
        return static_cast<std::uint16_t>(std::min<long>(v, 0xffff));
    }
};

std::vector<int> tracked_vertices(const QueryTrace& queries) {
    std::vector<int> verts;
    for (const auto& q : queries)
        if (q)
            for (int v : q->vertices()) verts.push_back(v);
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    return verts;
}

long count_randomized(const QueryTrace& queries) {
    long n = 0;
    for (const auto& q : queries)
        if (q && q->size() == 2) ++n;
    return n;
}

// Reconstruct p, prev and the guarantee case for each cell of a table; the
// cell layout records which vertices each round proposed. Value math is
// generic so the exact path stays rational.
template <class Value, class OnCell>
void walk_guarantee_cells(const DmuTable<Value>& table, long d, const Value& gamma,
                          OnCell&& on_cell) {
    std::map<int, std::vector<long>> occur;  // vertex -> rounds with a cell
    for (long j = 0; j < static_cast<long>(table.rounds.size()); ++j)
        for (const auto& c : table.rounds[j]) occur[c.vertex].push_back(j);

    auto window_p = [&](int vertex, long round) {
        Value s(0);
        for (long t = std::max(round - d + 1, 0L); t < round; ++t)
            if (const auto* c = table.find(t, vertex)) s += c->dmu;
        return Value(1) - s;
    };

    for (long j = 0; j < static_cast<long>(table.rounds.size()); ++j) {
        const int qsize = static_cast<int>(table.rounds[j].size());
        for (const auto& cell : table.rounds[j]) {
            const Value p = window_p(cell.vertex, j);
            const auto& rounds = occur[cell.vertex];
            long prev = -1;
            for (long t : rounds) {
                if (t >= j) break;
                prev = t;
            }
            int case_id;
            Value bound;
            if (qsize == 1) {
                case_id = 2;
                bound = p;
            } else if (prev < 0 || prev <= j - d) {
                case_id = 3;
                bound = p / 2;
            } else {
                case_id = 4;
                const Value p_prev = window_p(cell.vertex, prev);
                const Value dmu_prev = table.find(prev, cell.vertex)->dmu;
                bound = p / 2 + gamma * (p_prev - dmu_prev);
            }
            on_cell(j, cell, case_id, bound, prev);
        }
    }
}

const char* kGuaranteeNotes =
    "singleton rounds are held to the deterministic bound dmu >= p regardless of the "
    "previous occurrence; for gamma <= 1/2 that bound dominates the carry bound "
    "p/2 + gamma*u";

}  // namespace

ExactDmu enumerate_exact_dmu(const QueryTrace& queries, long duration, int max_randomized) {
    if (duration < 1) throw std::invalid_argument("duration must be >= 1");
    if (count_randomized(queries) > max_randomized)
        throw std::invalid_argument("enumerate_exact_dmu: too many randomized rounds for "
                                    "exact coin enumeration");
    const std::vector<int> verts = tracked_vertices(queries);
    std::map<int, int> slot;
    for (std::size_t k = 0; k < verts.size(); ++k) slot[verts[k]] = static_cast<int>(k);

    const long L = static_cast<long>(queries.size());
    ExactDmu table;
    table.rounds.resize(L);
    std::map<std::pair<long, int>, Rat> acc;
    for (long j = 0; j < L; ++j)
        if (queries[j])
            for (int v : queries[j]->vertices()) {
                table.rounds[j].push_back({v, Rat(0), 0.0});
                acc[{j, v}] = Rat(0);
            }

    using Key = std::vector<std::uint16_t>;
    std::map<Key, Rat> cur;
    cur.emplace(Key(SlotCodec::kFields * verts.size(), 0), Rat(1));

    for (long j = 0; j < L; ++j) {
        std::map<Key, Rat> next;
        const long cap = std::max(L - (j + 1), 1L);
        auto emit = [&](Key s, const Rat& w) {
            SlotCodec::advance(s, cap);
            next[std::move(s)] += w;
        };
        auto select = [&](Key& s, int vertex, long round, const Rat& w) {
            const int sl = slot.at(vertex);
            if (SlotCodec::busy(s, sl) == 0) {
                acc[{round, vertex}] += w;
                SlotCodec::set_busy(s, sl, duration);
            }
        };

        for (const auto& [state, w] : cur) {
            if (!queries[j]) {
                emit(state, w);
                continue;
            }
            const Query& q = *queries[j];
            if (q.deterministic()) {
                Key s = state;
                SlotCodec::set_tag(s, slot.at(q[0]), TagKind::Unknown, duration);
                select(s, q[0], j, w);
                emit(std::move(s), w);
                continue;
            }
            const auto leg = [&](int k) { return q[k - 1]; };
            // sender: role (1/2), l (1/2), m (1/2)
            for (int l = 1; l <= 2; ++l) {
                for (int m = 1; m <= 2; ++m) {
                    const Rat w8 = w / 8;
                    Key s = state;
                    SlotCodec::set_tag(s, slot.at(leg(3 - m)), TagKind::Unknown, duration);
                    SlotCodec::set_tag(s, slot.at(leg(m)),
                                       l == m ? TagKind::Selected : TagKind::NotSelected,
                                       duration);
                    select(s, leg(l), j, w8);
                    emit(std::move(s), w8);
                }
            }
            // receiver: role (1/2), m (1/2), then l only on an Unknown read
            for (int m = 1; m <= 2; ++m) {
                const TagKind read = SlotCodec::read_tag(state, slot.at(leg(m)));
                std::vector<std::pair<int, Rat>> branches;
                if (read == TagKind::Selected)
                    branches.emplace_back(3 - m, w / 4);
                else if (read == TagKind::NotSelected)
                    branches.emplace_back(m, w / 4);
                else {
                    branches.emplace_back(1, w / 8);
                    branches.emplace_back(2, w / 8);
                }
                for (const auto& [l, bw] : branches) {
                    Key s = state;
                    SlotCodec::set_tag(s, slot.at(q[0]), TagKind::Unknown, duration);
                    SlotCodec::set_tag(s, slot.at(q[1]), TagKind::Unknown, duration);
                    select(s, leg(l), j, bw);
                    emit(std::move(s), bw);
                }
            }
        }
        cur = std::move(next);
    }

    for (long j = 0; j < L; ++j)
        for (auto& c : table.rounds[j]) c.dmu = acc[{j, c.vertex}];
    return table;
}

DmuEstimate estimate_dmu(const QueryTrace& queries, long duration, long trials,
                         std::uint64_t seed, SelectorKind kind, int jobs) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    const int nv = max_vertex(queries) + 1;
    const long L = static_cast<long>(queries.size());

    // flat cell layout: per round offset into the counts array
    std::vector<long> offset(L + 1, 0);
    for (long j = 0; j < L; ++j)
        offset[j + 1] = offset[j] + (queries[j] ? queries[j]->size() : 0);
    const long num_cells = offset[L];

    auto worker = [&](long t0, long t1, std::vector<long>& counts) {
        counts.assign(num_cells, 0);
        SelectorState state(nv, duration, 0);
        Rng rng(0);
        std::vector<long> next_free(nv);
        for (long t = t0; t < t1; ++t) {
            const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(t));
            state.reset(s);
            rng.reseed(s);
            std::fill(next_free.begin(), next_free.end(), 0L);
            for (long j = 0; j < L; ++j) {
                if (!queries[j]) continue;
                const Query& q = *queries[j];
                const int v = kind == SelectorKind::Ocr ? ocr_step(state, j, q)
                                                        : uniform_step(rng, q);
                if (j >= next_free[v]) {
                    next_free[v] = j + duration;
                    ++counts[offset[j] + (q[0] == v ? 0 : 1)];
                }
            }
        }
    };

    const int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(trials)));
    std::vector<std::vector<long>> partial(nthreads);
    if (nthreads == 1) {
        worker(0, trials, partial[0]);
    } else {
        std::vector<std::thread> threads;
        for (int k = 0; k < nthreads; ++k) {
            const long t0 = trials * k / nthreads;
            const long t1 = trials * (k + 1) / nthreads;
            threads.emplace_back(worker, t0, t1, std::ref(partial[k]));
        }
        for (auto& th : threads) th.join();
    }

    std::vector<long> counts(num_cells, 0);
    for (const auto& part : partial)
        for (long c = 0; c < num_cells; ++c) counts[c] += part[c];

    DmuEstimate est;
    est.trials = trials;
    est.rounds.resize(L);
    for (long j = 0; j < L; ++j) {
        if (!queries[j]) continue;
        const Query& q = *queries[j];
        for (int k = 0; k < q.size(); ++k) {
            const double mean =
                static_cast<double>(counts[offset[j] + k]) / static_cast<double>(trials);
            const double se = std::sqrt(mean * (1.0 - mean) / static_cast<double>(trials));
            est.rounds[j].push_back({q[k], mean, se});
        }
    }
    return est;
}

GuaranteeReport check_ocr_guarantee(const ExactDmu& table, long duration, const Rat& gamma) {
    GuaranteeReport report;
    report.notes = kGuaranteeNotes;
    walk_guarantee_cells<Rat>(table, duration, gamma,
                              [&](long j, const ExactDmu::Cell& cell, int case_id,
                                  const Rat& bound, long) {
                                  const bool pass = cell.dmu >= bound;
                                  report.cells.push_back({j, cell.vertex, case_id,
                                                          to_double(bound), to_double(cell.dmu),
                                                          0.0, pass});
                                  report.pass = report.pass && pass;
                              });
    return report;
}

GuaranteeReport check_ocr_guarantee(const DmuEstimate& table, long duration, double gamma,
                                    double z) {
    GuaranteeReport report;
    report.notes = kGuaranteeNotes;

    // combined standard error of (bound - value): root-sum-square over every
    // estimate term with its coefficient
    auto cell_sigma = [&](long j, int vertex, int case_id, long prev) {
        std::map<std::pair<long, int>, double> coef;
        coef[{j, vertex}] += 1.0;  // the value term
        const double wj = case_id == 2 ? 1.0 : 0.5;
        for (long t = std::max(j - duration + 1, 0L); t < j; ++t)
            if (table.find(t, vertex)) coef[{t, vertex}] += wj;
        if (case_id == 4) {
            coef[{prev, vertex}] += gamma;
            for (long t = std::max(prev - duration + 1, 0L); t < prev; ++t)
                if (table.find(t, vertex)) coef[{t, vertex}] += gamma;
        }
        double var = 0.0;
        for (const auto& [key, c] : coef) {
            const auto* cell = table.find(key.first, key.second);
            if (cell) var += c * c * cell->se * cell->se;
        }
        return std::sqrt(var);
    };

    walk_guarantee_cells<double>(table, duration, gamma,
                                 [&](long j, const DmuEstimate::Cell& cell, int case_id,
                                     double bound, long prev) {
                                     const double sigma = cell_sigma(j, cell.vertex, case_id, prev);
                                     const bool pass = cell.dmu >= bound - z * sigma;
                                     report.cells.push_back({j, cell.vertex, case_id, bound,
                                                             cell.dmu, sigma, pass});
                                     report.pass = report.pass && pass;
                                 });
    return report;
}

namespace {

template <class Value>
std::map<int, Value> per_vertex_totals(const DmuTable<Value>& table) {
    std::map<int, Value> totals;
    for (const auto& round : table.rounds)
        for (const auto& c : round) totals[c.vertex] += c.dmu;
    return totals;
}

}  // namespace

ReversalReport check_reversal_exact(const QueryTrace& queries, long duration,
                                    int max_randomized) {
    const ExactDmu fwd = enumerate_exact_dmu(queries, duration, max_randomized);
    QueryTrace reversed(queries.rbegin(), queries.rend());
    const ExactDmu bwd = enumerate_exact_dmu(reversed, duration, max_randomized);

    const auto tf = per_vertex_totals(fwd);
    const auto tb = per_vertex_totals(bwd);
    ReversalReport report;
    for (const auto& [v, mu_f] : tf) {
        const Rat mu_b = tb.count(v) ? tb.at(v) : Rat(0);
        const bool pass = mu_f == mu_b;
        report.rows.push_back({v, to_double(mu_f), to_double(mu_b), 0.0, pass});
        report.pass = report.pass && pass;
    }
    return report;
}

ReversalReport check_reversal_mc(const QueryTrace& queries, long duration, long trials,
                                 std::uint64_t seed, double z, int jobs) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    const int nv = max_vertex(queries) + 1;
    QueryTrace reversed(queries.rbegin(), queries.rend());

    struct Moments {
        std::vector<double> sum, sumsq;
    };

    // forward trials draw stream 2t, backward 2t+1
    auto run_side = [&](const QueryTrace& side, std::uint64_t stream_offset) {
        auto worker = [&](long t0, long t1, Moments& m) {
            m.sum.assign(nv, 0.0);
            m.sumsq.assign(nv, 0.0);
            SelectorState state(nv, duration, 0);
            std::vector<long> next_free(nv);
            std::vector<long> matches(nv);
            for (long t = t0; t < t1; ++t) {
                state.reset(derive_seed(seed, 2 * static_cast<std::uint64_t>(t) + stream_offset));
                std::fill(next_free.begin(), next_free.end(), 0L);
                std::fill(matches.begin(), matches.end(), 0L);
                for (long j = 0; j < static_cast<long>(side.size()); ++j) {
                    if (!side[j]) continue;
                    const int v = ocr_step(state, j, *side[j]);
                    if (j >= next_free[v]) {
                        next_free[v] = j + duration;
                        ++matches[v];
                    }
                }
                for (int v = 0; v < nv; ++v) {
                    m.sum[v] += static_cast<double>(matches[v]);
                    m.sumsq[v] += static_cast<double>(matches[v]) * static_cast<double>(matches[v]);
                }
            }
        };
        const int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(trials)));
        std::vector<Moments> partial(nthreads);
        if (nthreads == 1) {
            worker(0, trials, partial[0]);
        } else {
            std::vector<std::thread> threads;
            for (int k = 0; k < nthreads; ++k)
                threads.emplace_back(worker, trials * k / nthreads, trials * (k + 1) / nthreads,
                                     std::ref(partial[k]));
            for (auto& th : threads) th.join();
        }
        Moments total;
        total.sum.assign(nv, 0.0);
        total.sumsq.assign(nv, 0.0);
        for (const auto& part : partial)
            for (int v = 0; v < nv; ++v) {
                total.sum[v] += part.sum[v];
                total.sumsq[v] += part.sumsq[v];
            }
        return total;
    };

    const Moments fwd = run_side(queries, 0);
    const Moments bwd = run_side(reversed, 1);

    ReversalReport report;
    const double n = static_cast<double>(trials);
    for (int v : tracked_vertices(queries)) {
        const double mf = fwd.sum[v] / n;
        const double mb = bwd.sum[v] / n;
        const double var_f = std::max(fwd.sumsq[v] / n - mf * mf, 0.0);
        const double var_b = std::max(bwd.sumsq[v] / n - mb * mb, 0.0);
        const double sigma = std::sqrt((var_f + var_b) / n);
        const bool pass = std::fabs(mf - mb) <= z * sigma;
        report.rows.push_back({v, mf, mb, sigma, pass});
        report.pass = report.pass && pass;
    }
    return report;
}

std::string guarantee_report_csv(const GuaranteeReport& report) {
    std::ostringstream os;
    os << "round,vertex,case,bound,value,sigma,pass\n";
    for (const auto& c : report.cells)
        os << c.round + 1 << ',' << c.vertex + 1 << ',' << c.case_id << ','
           << num_to_string(c.bound) << ',' << num_to_string(c.value) << ','
           << num_to_string(c.sigma) << ',' << (c.pass ? 1 : 0) << '\n';
    if (!report.notes.empty()) os << "# " << report.notes << '\n';
    return os.str();
}

}  // namespace obmrr
