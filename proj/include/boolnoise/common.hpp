/*
 * common.hpp: shared vocabulary for boolnoise.
 *
 * Configurations of the n-cube are packed into integers: bit j (0-based) of
 * the index holds x_{j+1}. Subsets of [n] use the same packing, so a subset
 * mask and a configuration mask are interchangeable.
 */

#pragma once

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#ifndef BOOLNOISE_MAX_N
#define BOOLNOISE_MAX_N 28
#endif

namespace boolnoise {

using Mask = std::uint64_t;

// Caller violated a documented precondition.
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Request exceeds a configured memory/time cap.
class ResourceError : public std::length_error {
public:
    using std::length_error::length_error;
};

namespace detail {
inline std::atomic<int>& max_n_slot() {
    static std::atomic<int> slot{BOOLNOISE_MAX_N};
    return slot;
}
}  // namespace detail

// Largest n for which a dense 2^n table may be materialized. Operations
// that hold two tables at once honour max_n() - 1.
inline int max_n() { return detail::max_n_slot().load(std::memory_order_relaxed); }

// Runtime cap; cannot exceed the build-time BOOLNOISE_MAX_N.
inline void set_max_n(int cap) {
    if (cap < 1 || cap > BOOLNOISE_MAX_N) {
        throw ContractError("max_n must lie in [1, " + std::to_string(BOOLNOISE_MAX_N) + "]");
    }
    detail::max_n_slot().store(cap, std::memory_order_relaxed);
}

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ContractError(what);
}

inline void require_table_size(int n, int cap, const char* op) {
    if (n > cap) {
        throw ResourceError(std::string(op) + ": n=" + std::to_string(n) +
                            " exceeds the table cap " + std::to_string(cap));
    }
}

inline int popcount(Mask m) { return std::popcount(m); }

inline constexpr Mask full_mask(int n) {
    return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1;
}

// Monte Carlo result. `exact` marks values obtained by enumeration, in
// which case std_error is 0.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    bool exact = false;

    // |value - target| <= k standard errors (exact values compare with 1e-12).
    bool within(double target, double k) const {
        double tol = exact ? 1e-12 : k * std_error;
        return std::abs(value - target) <= tol;
    }
};

// Bernoulli proportion estimate from a success count.
inline Estimate proportion(std::uint64_t hits, std::uint64_t samples, std::uint64_t seed) {
    Estimate e;
    e.samples = samples;
    e.seed = seed;
    if (samples == 0) return e;
    double p = static_cast<double>(hits) / static_cast<double>(samples);
    e.value = p;
    e.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    return e;
}

}  // namespace boolnoise
