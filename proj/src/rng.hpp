#pragma once

#include <array>
#include <cstdint>

namespace jumpmil {

// Identifies one reproducible random source. Every draw made for a path is
// a pure function of (master_seed, path_index, stream, draw index), so
// results do not depend on scheduling or thread count.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t path_index = 0;
};

// Stream tags keep substreams of the same path independent.
inline constexpr std::uint32_t kStreamPath = 1;           // sample_fine_path draws
inline constexpr std::uint32_t kStreamCoinBase = 0x1000;  // + fine level, coarsening coins

// One Philox4x32-10 block. Exposed for the known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

// Counter-based generator (Philox4x32-10, Salmon et al. 2011).
// The 64-bit key is derived from (master_seed, stream); the 128-bit counter
// holds (draw counter, path_index). Distinct (seed, path, stream) triples
// therefore index non-overlapping blocks of the same keyed permutation.
class CounterRng {
public:
    CounterRng(const SeedSpec& seed, std::uint32_t stream);

    std::uint64_t next_u64();

    double uniform01();                    // [0, 1)
    double uniform_open01();               // (0, 1)
    double uniform(double a, double b);    // [a, b)
    double normal();                       // standard normal, Box-Muller
    std::uint64_t poisson(double mean);

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t path_index_ = 0;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int block_pos_ = 4;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace jumpmil
