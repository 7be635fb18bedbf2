#include "obmrr/instance.hpp"

#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_set>

#include "obmrr/rng.hpp"

namespace obmrr {

void Instance::validate() const {
    if (duration < 1)
        throw ValidationError("duration must be >= 1, got " + std::to_string(duration));
    if (num_offline < 0)
        throw ValidationError("num_offline must be >= 0, got " + std::to_string(num_offline));
    for (std::size_t j = 0; j < arrivals.size(); ++j) {
        std::unordered_set<int> seen;
        for (int i : arrivals[j]) {
            if (i < 0 || i >= num_offline)
                throw ValidationError("arrivals[" + std::to_string(j) + "]: neighbor index " +
                                      std::to_string(i) + " out of range [0, " +
                                      std::to_string(num_offline) + ")");
            if (!seen.insert(i).second)
                throw ValidationError("arrivals[" + std::to_string(j) +
                                      "]: duplicate neighbor " + std::to_string(i));
        }
    }
}

Instance load_instance(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("instance: ") + e.what());
    }
    Instance ins;
    try {
        ins.num_offline = doc.at("num_offline").get<int>();
        ins.duration = doc.at("duration").get<long>();
        const auto& arr = doc.at("arrivals");
        if (!arr.is_array()) throw ParseError("instance: \"arrivals\" must be an array");
        for (const auto& n : arr) ins.arrivals.push_back(n.get<std::vector<int>>());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("instance: ") + e.what());
    }
    ins.validate();
    return ins;
}

std::string serialize_instance(const Instance& ins) {
    nlohmann::json doc;
    doc["num_offline"] = ins.num_offline;
    doc["duration"] = ins.duration;
    doc["arrivals"] = ins.arrivals;
    return doc.dump(2) + "\n";
}

Instance load_instance_file(const std::string& path) {
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return load_instance(ss.str());
    }
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_instance(ss.str());
}

void save_instance_file(const Instance& ins, const std::string& path) {
    const std::string text = serialize_instance(ins);
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file: " + path);
    out << text;
}

Instance gen_integrality_gap() {
    Instance ins;
    ins.num_offline = 3;
    ins.duration = 3;
    ins.arrivals = {{0, 2}, {0, 1}, {2}, {1, 2}};
    ins.validate();
    return ins;
}

Instance gen_random(int num_offline, long num_online, double edge_prob,
                    long duration, std::uint64_t seed) {
    if (edge_prob < 0.0 || edge_prob > 1.0)
        throw ValidationError("edge_prob must be in [0, 1], got " + std::to_string(edge_prob));
    if (duration < 1)
        throw ValidationError("duration must be >= 1, got " + std::to_string(duration));
    if (num_offline < 0 || num_online < 0)
        throw ValidationError("vertex counts must be >= 0");
    Instance ins;
    ins.num_offline = num_offline;
    ins.duration = duration;
    ins.arrivals.resize(num_online);
    Rng rng(seed);
    for (long j = 0; j < num_online; ++j)
        for (int i = 0; i < num_offline; ++i)
            if (rng.uniform01() < edge_prob) ins.arrivals[j].push_back(i);
    ins.validate();
    return ins;
}

Instance gen_upper_triangular(int n, long duration) {
    if (n < 1) throw ValidationError("upper-triangular size must be >= 1, got " + std::to_string(n));
    Instance ins;
    ins.num_offline = n;
    ins.duration = duration;
    ins.arrivals.resize(n);
    for (int j = 0; j < n; ++j)
        for (int i = j; i < n; ++i) ins.arrivals[j].push_back(i);
    ins.validate();
    return ins;
}

}  // namespace obmrr
