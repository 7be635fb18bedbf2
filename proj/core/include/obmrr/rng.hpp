#ifndef OBMRR_RNG_HPP
#define OBMRR_RNG_HPP

#include <cstdint>
#include <random>

namespace obmrr {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stream seed for trial `index` under a master seed. The mixer is frozen:
// mix64(master + (index+1) * golden_gamma). Every trial gets the same derived
// seed whether trials run serially or split across workers.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

// Coin and uniform draws for the selectors. One engine draw per coin; the
// consumption order is part of each selector's documented contract.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    void reseed(std::uint64_t seed) { eng_.seed(seed); }

    // fair coin from the top bit
    bool flip() { return (eng_() >> 63) != 0; }

    // uniform over {1, 2}
    int pick12() { return flip() ? 2 : 1; }

    // uniform in [0, 1) with 53 random bits
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace obmrr

#endif
