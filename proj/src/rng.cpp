#include "rng.hpp"

#include <cmath>
#include <stdexcept>

namespace jumpmil {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

inline void philox_round(std::array<std::uint32_t, 4>& ctr, const std::array<std::uint32_t, 2>& key) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mul_hi_lo(kPhiloxM0, ctr[0], hi0, lo0);
    mul_hi_lo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

// splitmix64 finalizer; used only to derive per-stream Philox keys.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

} // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        philox_round(counter, key);
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return counter;
}

CounterRng::CounterRng(const SeedSpec& seed, std::uint32_t stream)
    : path_index_(seed.path_index) {
    const std::uint64_t derived = mix64(mix64(seed.master_seed) + stream);
    key_ = {static_cast<std::uint32_t>(derived), static_cast<std::uint32_t>(derived >> 32)};
}

void CounterRng::refill() {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(counter_),
        static_cast<std::uint32_t>(counter_ >> 32),
        static_cast<std::uint32_t>(path_index_),
        static_cast<std::uint32_t>(path_index_ >> 32),
    };
    block_ = philox4x32_10(ctr, key_);
    ++counter_;
    block_pos_ = 0;
}

std::uint64_t CounterRng::next_u64() {
    if (block_pos_ > 2) refill();
    const std::uint64_t lo = block_[static_cast<std::size_t>(block_pos_)];
    const std::uint64_t hi = block_[static_cast<std::size_t>(block_pos_ + 1)];
    block_pos_ += 2;
    return lo | (hi << 32);
}

double CounterRng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform_open01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::uniform(double a, double b) {
    return a + (b - a) * uniform01();
}

double CounterRng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform_open01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = kTwoPi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t CounterRng::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("poisson mean must be finite and non-negative");
    }
    if (mean == 0.0) return 0;
    // Splitting keeps exp(-mean) well away from underflow; each half is an
    // independent Poisson variate, so the sum has the exact distribution.
    if (mean > 30.0) {
        const double half = 0.5 * mean;
        const std::uint64_t left = poisson(half);
        return left + poisson(half);
    }
    // Knuth product method.
    const double threshold = std::exp(-mean);
    double product = 1.0;
    std::uint64_t count = 0;
    for (;;) {
        product *= uniform01();
        if (product <= threshold) return count;
        ++count;
    }
}

} // namespace jumpmil
