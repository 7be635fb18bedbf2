#ifndef OBMRR_INSTANCE_HPP
#define OBMRR_INSTANCE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace obmrr {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One problem instance. `num_offline` reusable resources serve a stream of
/// online vertices; a resource matched at round j is busy for the following
/// duration-1 rounds and free again at round j+duration. `arrivals[j]` is the
/// neighbor set N(j) of the j-th online vertex and may be empty.
///
/// Offline indices and rounds are 0-based internally; all human-facing
/// reports print them 1-based.
struct Instance {
    int num_offline = 0;
    long duration = 1;
    std::vector<std::vector<int>> arrivals;

    long num_online() const { return static_cast<long>(arrivals.size()); }

    long num_edges() const {
        long m = 0;
        for (const auto& n : arrivals) m += static_cast<long>(n.size());
        return m;
    }

    /// Throws ValidationError naming the offending arrival on duplicate
    /// neighbors, out-of-range indices, or duration < 1.
    void validate() const;

    bool operator==(const Instance&) const = default;
};

/// Parse the JSON instance document format:
///   {"num_offline": N, "duration": D, "arrivals": [[...], ...]}
/// Indices in `arrivals` are 0-based. Throws ParseError / ValidationError.
Instance load_instance(const std::string& text);
std::string serialize_instance(const Instance& ins);

/// File variants; path "-" reads stdin / writes stdout.
Instance load_instance_file(const std::string& path);
void save_instance_file(const Instance& ins, const std::string& path);

/// The 3x4 gap example: d=3, seven edges, integral optimum 3 and a feasible
/// half-integral LP point of value 3.5.
Instance gen_integrality_gap();

/// Each (i,j) edge present independently with probability edge_prob;
/// deterministic given seed.
Instance gen_random(int num_offline, long num_online, double edge_prob,
                    long duration, std::uint64_t seed);

/// n-by-n instance with N(j) = {j, ..., n} (1-based), the classic adversarial
/// family for the d = |U| special case.
Instance gen_upper_triangular(int n, long duration);

}  // namespace obmrr

#endif
