#pragma once

#include <cstdint>
#include <random>

namespace synlab {

// Thin wrapper over mt19937_64 that derives all variates from raw 64-bit
// draws.  std::uniform_*_distribution is implementation-defined, so using it
// would make frozen test values compiler-dependent.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    bool coin(double p = 0.5) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace synlab
