// random.hpp - seeding contract for reproducible Monte Carlo
//
// Every stochastic object takes an explicit 64-bit seed. Work item i of a run
// seeded with s draws from derive_seed(s, i), so results do not depend on
// execution order or thread count.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rcet::rng {

// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Sub-seed for work item `index`: splitmix64(seed ^ splitmix64(index)).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index));
}

// mt19937_64 with platform-independent mappings to uniform and exponential
// variates (the std distributions are implementation-defined).
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    // Uniform on (0, 1].
    double uniform() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

    // Exponential waiting time with the given rate.
    double exponential(double rate) { return -std::log(uniform()) / rate; }

    bool coin() { return (engine_() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
};

}  // namespace rcet::rng
