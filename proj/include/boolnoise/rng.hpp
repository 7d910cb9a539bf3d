/*
 * rng.hpp: counter-based random streams (Philox4x32-10).
 *
 * Every Monte Carlo sample draws from its own stream keyed by
 * (seed, stream index). The value a sample sees therefore depends only on
 * the seed and its index, never on the order in which workers run.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace boolnoise {

class Philox {
public:
    using result_type = std::uint64_t;

    Philox(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (cursor_ == 2) refill();
        return buffer_[cursor_++];
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Bernoulli(p) draw; p <= 0 never fires, p >= 1 always fires.
    bool bernoulli(double p) { return uniform() < p; }

    // Uniform integer in [0, bound) by Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t bound) {
        for (;;) {
            unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
            auto low = static_cast<std::uint64_t>(m);
            if (low >= bound || low >= (-bound) % bound) {
                return static_cast<std::uint64_t>(m >> 64);
            }
        }
    }

    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    void refill() {
        std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(block_),
                                         static_cast<std::uint32_t>(block_ >> 32),
                                         static_cast<std::uint32_t>(stream_),
                                         static_cast<std::uint32_t>(stream_ >> 32)};
        std::array<std::uint32_t, 2> key = key_;
        for (int round = 0; round < 10; ++round) {
            std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        ++block_;
        buffer_[0] = (static_cast<std::uint64_t>(ctr[1]) << 32) | ctr[0];
        buffer_[1] = (static_cast<std::uint64_t>(ctr[3]) << 32) | ctr[2];
        cursor_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int cursor_ = 2;
};

// Default seed used when a caller does not supply one.
inline constexpr std::uint64_t kDefaultSeed = 20011997u;

}  // namespace boolnoise
