#include "obmrr/outer.hpp"

namespace obmrr {

long sample_matched_count(const QueryTrace& queries, long duration, SelectorKind kind,
                          std::uint64_t seed, int num_vertices) {
    if (num_vertices < 0) num_vertices = max_vertex(queries) + 1;
    SelectorState state(num_vertices, duration, seed);
    Rng rng(seed);
    std::vector<long> next_free(num_vertices, 0);
    long matched = 0;
    for (std::size_t j = 0; j < queries.size(); ++j) {
        if (!queries[j]) continue;
        const int v = kind == SelectorKind::Ocr
                          ? ocr_step(state, static_cast<long>(j), *queries[j])
                          : uniform_step(rng, *queries[j]);
        if (static_cast<long>(j) >= next_free[v]) {
            ++matched;
            next_free[v] = static_cast<long>(j) + duration;
        }
    }
    return matched;
}

long run_greedy(const Instance& ins, GreedyTieRule rule, std::uint64_t seed) {
    ins.validate();
    Rng rng(seed);
    std::vector<long> next_free(ins.num_offline, 0);
    long matched = 0;
    std::vector<int> avail;
    for (long j = 0; j < ins.num_online(); ++j) {
        avail.clear();
        for (int i : ins.arrivals[j])
            if (j >= next_free[i]) avail.push_back(i);
        if (avail.empty()) continue;
        int pick;
        if (rule == GreedyTieRule::LowestIndex) {
            pick = *std::min_element(avail.begin(), avail.end());
        } else {
            pick = avail[static_cast<std::size_t>(rng.uniform01() * avail.size())];
        }
        next_free[pick] = j + ins.duration;
        ++matched;
    }
    return matched;
}

}  // namespace obmrr
