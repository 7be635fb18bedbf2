#ifndef OBMRR_OCR_HPP
#define OBMRR_OCR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "obmrr/query.hpp"
#include "obmrr/rng.hpp"

namespace obmrr {

enum class TagKind : std::uint8_t { Unknown, Selected, NotSelected };

/// Message left on an offline vertex, readable through round `expiry`
/// (inclusive). A tag written at round j covers the interval [j+1, j+d-1];
/// expired tags read as Unknown. With d = 1 the interval is empty and the
/// selector degenerates to uniform.
struct Tag {
    TagKind kind = TagKind::Unknown;
    long expiry = -1;
};

enum class RoundRole : std::uint8_t { None, Deterministic, Sender, Receiver };

enum class SelectorKind { Ocr, Uniform };

/// Tag store plus coin stream for one selector run. Single-owner: concurrent
/// trials each hold an independent state and seed.
///
/// Coin order per randomized round is frozen so a fixed seed reproduces the
/// trace: role coin first; a sender then draws l, then m; a receiver draws m,
/// then l only when the probed tag reads Unknown.
class SelectorState {
public:
    SelectorState(int num_vertices, long duration, std::uint64_t seed)
        : tags_(num_vertices), duration_(duration), rng_(seed) {
        if (duration < 1) throw std::invalid_argument("duration must be >= 1");
    }

    void reset(std::uint64_t seed) {
        std::fill(tags_.begin(), tags_.end(), Tag{});
        rng_.reseed(seed);
        last_round_ = -1;
    }

    long duration() const { return duration_; }
    const Tag& tag(int vertex) const { return tags_.at(vertex); }

    // instrumentation for the most recent randomized step
    RoundRole last_role() const { return last_role_; }
    std::optional<int> last_probe() const { return last_probe_; }

    friend int ocr_step(SelectorState& state, long round, const Query& q);

private:
    TagKind read(int vertex, long round) const {
        const Tag& t = tags_[vertex];
        return round <= t.expiry ? t.kind : TagKind::Unknown;
    }
    void write(int vertex, TagKind kind, long round) {
        tags_[vertex] = Tag{kind, round + duration_ - 1};
    }

    std::vector<Tag> tags_;
    long duration_;
    Rng rng_;
    long last_round_ = -1;
    RoundRole last_role_ = RoundRole::None;
    std::optional<int> last_probe_;
};

/// One transition of the 1/32-OCR state machine. Rounds must be strictly
/// increasing across calls; throws std::logic_error otherwise.
int ocr_step(SelectorState& state, long round, const Query& q);

/// Memoryless baseline: the singleton, or either leg with probability 1/2.
int uniform_step(Rng& rng, const Query& q);

struct SelectionRound {
    std::optional<Query> query;
    std::optional<int> selected;
    RoundRole role = RoundRole::None;
    std::optional<int> probe;  // vertex the m coin pointed at, when randomized
};

/// Per-round record of queries and selections; availability is applied
/// separately by apply_availability.
using SelectionTrace = std::vector<SelectionRound>;

/// Feed the queries in order to the chosen selector. Rounds holding
/// std::nullopt advance time without a selection. Deterministic given seed.
SelectionTrace run_selector(const QueryTrace& queries, long duration,
                            SelectorKind kind, std::uint64_t seed,
                            int num_vertices = -1);

struct AvailabilityResult {
    std::vector<bool> matched;      // per round
    std::vector<long> match_count;  // per vertex

    long total() const {
        long t = 0;
        for (long c : match_count) t += c;
        return t;
    }
};

/// Greedy realization of the selections: a selected vertex is matched iff it
/// was not matched at any round in [j-d+1, j-1].
AvailabilityResult apply_availability(const SelectionTrace& trace, long duration,
                                      int num_vertices = -1);

/// Query-trace document format: a JSON array with one entry per round, each
/// null or an array of 1-2 vertex indices. An object wrapper
/// {"duration": d, "rounds": [...]} is also accepted; the bare array form
/// leaves *duration_out untouched.
QueryTrace load_query_trace(const std::string& text, long* duration_out = nullptr);
std::string serialize_query_trace(const QueryTrace& trace,
                                  std::optional<long> duration = std::nullopt);
QueryTrace load_query_trace_file(const std::string& path, long* duration_out = nullptr);
void save_query_trace_file(const QueryTrace& trace, std::optional<long> duration,
                           const std::string& path);

}  // namespace obmrr

#endif
