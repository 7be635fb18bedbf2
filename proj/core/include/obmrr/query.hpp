#ifndef OBMRR_QUERY_HPP
#define OBMRR_QUERY_HPP

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

namespace obmrr {

// A proposal handed to the inner selector: one offline vertex (deterministic
// round) or two distinct offline vertices (randomized round). The pair is
// stored sorted ascending, so q[0] is the lower-indexed leg.
class Query {
public:
    explicit Query(int single) : v_{single, -1}, size_(1) {
        if (single < 0) throw std::invalid_argument("query vertex must be >= 0");
    }

    Query(int a, int b) : size_(2) {
        if (a < 0 || b < 0) throw std::invalid_argument("query vertex must be >= 0");
        if (a == b) throw std::invalid_argument("query legs must be distinct");
        v_[0] = a < b ? a : b;
        v_[1] = a < b ? b : a;
    }

    static Query from_vertices(const std::vector<int>& vs) {
        if (vs.size() == 1) return Query(vs[0]);
        if (vs.size() == 2) return Query(vs[0], vs[1]);
        throw std::invalid_argument("query must contain 1 or 2 vertices");
    }

    int size() const { return size_; }
    bool deterministic() const { return size_ == 1; }
    int operator[](int k) const { return v_[k]; }

    bool contains(int vertex) const {
        return v_[0] == vertex || (size_ == 2 && v_[1] == vertex);
    }

    // the other leg of a pair
    int other(int vertex) const { return v_[0] == vertex ? v_[1] : v_[0]; }

    std::vector<int> vertices() const {
        return size_ == 1 ? std::vector<int>{v_[0]} : std::vector<int>{v_[0], v_[1]};
    }

    bool operator==(const Query& o) const {
        return size_ == o.size_ && v_[0] == o.v_[0] && (size_ == 1 || v_[1] == o.v_[1]);
    }

    // lexicographic on the sorted vertex list, shorter-first on prefixes
    bool lex_less(const Query& o) const {
        if (v_[0] != o.v_[0]) return v_[0] < o.v_[0];
        if (size_ != o.size_) return size_ < o.size_;
        return size_ == 2 && v_[1] < o.v_[1];
    }

private:
    int v_[2];
    int size_;
};

// One entry per round; empty rounds advance time without a proposal.
using QueryTrace = std::vector<std::optional<Query>>;

inline int max_vertex(const QueryTrace& trace) {
    int m = -1;
    for (const auto& q : trace)
        if (q)
            for (int k = 0; k < q->size(); ++k) m = std::max(m, (*q)[k]);
    return m;
}

}  // namespace obmrr

#endif
