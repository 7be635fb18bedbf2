#include "obmrr/ocr.hpp"

#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "obmrr/instance.hpp"

namespace obmrr {

int ocr_step(SelectorState& state, long round, const Query& q) {
    if (round <= state.last_round_)
        throw std::logic_error("ocr_step: round index must be strictly increasing");
    state.last_round_ = round;
    state.last_probe_.reset();

    if (q.deterministic()) {
        state.last_role_ = RoundRole::Deterministic;
        state.write(q[0], TagKind::Unknown, round);
        return q[0];
    }

    // q[0] is i1, q[1] is i2; l and m index into {1, 2}
    const auto leg = [&](int k) { return q[k - 1]; };

    if (state.rng_.flip()) {  // sender
        state.last_role_ = RoundRole::Sender;
        const int l = state.rng_.pick12();
        const int m = state.rng_.pick12();
        state.write(leg(3 - m), TagKind::Unknown, round);
        state.write(leg(m), m == l ? TagKind::Selected : TagKind::NotSelected, round);
        state.last_probe_ = leg(m);
        return leg(l);
    }

    // receiver
    state.last_role_ = RoundRole::Receiver;
    const int m = state.rng_.pick12();
    state.last_probe_ = leg(m);
    int l;
    switch (state.read(leg(m), round)) {
        case TagKind::Selected: l = 3 - m; break;
        case TagKind::NotSelected: l = m; break;
        default: l = state.rng_.pick12(); break;
    }
    state.write(q[0], TagKind::Unknown, round);
    state.write(q[1], TagKind::Unknown, round);
    return leg(l);
}

int uniform_step(Rng& rng, const Query& q) {
    if (q.deterministic()) return q[0];
    return q[rng.flip() ? 1 : 0];
}

SelectionTrace run_selector(const QueryTrace& queries, long duration,
                            SelectorKind kind, std::uint64_t seed, int num_vertices) {
    if (duration < 1) throw std::invalid_argument("duration must be >= 1");
    if (num_vertices < 0) num_vertices = max_vertex(queries) + 1;

    SelectionTrace trace(queries.size());
    if (kind == SelectorKind::Ocr) {
        SelectorState state(num_vertices, duration, seed);
        for (std::size_t j = 0; j < queries.size(); ++j) {
            if (!queries[j]) continue;
            trace[j].query = queries[j];
            trace[j].selected = ocr_step(state, static_cast<long>(j), *queries[j]);
            trace[j].role = state.last_role();
            trace[j].probe = state.last_probe();
        }
    } else {
        Rng rng(seed);
        for (std::size_t j = 0; j < queries.size(); ++j) {
            if (!queries[j]) continue;
            trace[j].query = queries[j];
            trace[j].selected = uniform_step(rng, *queries[j]);
            trace[j].role = queries[j]->deterministic() ? RoundRole::Deterministic
                                                        : RoundRole::None;
        }
    }
    return trace;
}

AvailabilityResult apply_availability(const SelectionTrace& trace, long duration,
                                      int num_vertices) {
    if (duration < 1) throw std::invalid_argument("duration must be >= 1");
    if (num_vertices < 0) {
        for (const auto& r : trace)
            if (r.query)
                for (int v : r.query->vertices()) num_vertices = std::max(num_vertices, v + 1);
        num_vertices = std::max(num_vertices, 0);
    }
    AvailabilityResult res;
    res.matched.assign(trace.size(), false);
    res.match_count.assign(num_vertices, 0);
    std::vector<long> next_free(num_vertices, 0);
    for (std::size_t j = 0; j < trace.size(); ++j) {
        if (!trace[j].selected) continue;
        const int v = *trace[j].selected;
        if (static_cast<long>(j) >= next_free[v]) {
            res.matched[j] = true;
            ++res.match_count[v];
            next_free[v] = static_cast<long>(j) + duration;
        }
    }
    return res;
}

QueryTrace load_query_trace(const std::string& text, long* duration_out) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("query trace: ") + e.what());
    }
    const nlohmann::json* rounds = &doc;
    if (doc.is_object()) {
        if (!doc.contains("rounds"))
            throw ParseError("query trace: object form requires a \"rounds\" array");
        try {
            if (duration_out && doc.contains("duration"))
                *duration_out = doc.at("duration").get<long>();
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("query trace: ") + e.what());
        }
        rounds = &doc.at("rounds");
    }
    if (!rounds->is_array()) throw ParseError("query trace: expected an array of rounds");
    QueryTrace trace;
    for (std::size_t j = 0; j < rounds->size(); ++j) {
        const auto& entry = (*rounds)[j];
        if (entry.is_null()) {
            trace.emplace_back(std::nullopt);
            continue;
        }
        if (!entry.is_array())
            throw ParseError("query trace: round " + std::to_string(j) +
                             " must be null or an array");
        try {
            trace.emplace_back(Query::from_vertices(entry.get<std::vector<int>>()));
        } catch (const std::exception& e) {
            throw ParseError("query trace: round " + std::to_string(j) + ": " + e.what());
        }
    }
    return trace;
}

std::string serialize_query_trace(const QueryTrace& trace, std::optional<long> duration) {
    nlohmann::json rounds = nlohmann::json::array();
    for (const auto& q : trace) {
        if (!q)
            rounds.push_back(nullptr);
        else
            rounds.push_back(q->vertices());
    }
    if (!duration) return rounds.dump(2) + "\n";
    nlohmann::json doc;
    doc["duration"] = *duration;
    doc["rounds"] = std::move(rounds);
    return doc.dump(2) + "\n";
}

QueryTrace load_query_trace_file(const std::string& path, long* duration_out) {
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return load_query_trace(ss.str(), duration_out);
    }
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open trace file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_query_trace(ss.str(), duration_out);
}

void save_query_trace_file(const QueryTrace& trace, std::optional<long> duration,
                           const std::string& path) {
    const std::string text = serialize_query_trace(trace, duration);
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace file: " + path);
    out << text;
}

}  // namespace obmrr
