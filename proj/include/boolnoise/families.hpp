/*
 * families.hpp: named Boolean function families.
 *
 *   dictator          {x_1 = 1}
 *   parity            {Σ x_j odd}
 *   majority          {Σ x_j > n/2}
 *   tribes(t, s)      some block of s consecutive variables is all ones
 *   recmaj3(depth)    ternary majority tree over 3^depth leaves
 *   runs(threshold)   R(x) = 1 + #{i : x_i ≠ x_{i+1}} > threshold
 *   weighted          {Σ (2x_j − 1) w_j > s}
 */

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "boolnoise/function.hpp"
#include "boolnoise/majority.hpp"

namespace boolnoise {

enum class FamilyKind { dictator, parity, majority, tribes, recursive_majority3, runs, weighted_majority };

inline const char* family_name(FamilyKind k) {
    switch (k) {
        case FamilyKind::dictator: return "dictator";
        case FamilyKind::parity: return "parity";
        case FamilyKind::majority: return "majority";
        case FamilyKind::tribes: return "tribes";
        case FamilyKind::recursive_majority3: return "recmaj3";
        case FamilyKind::runs: return "runs";
        case FamilyKind::weighted_majority: return "weighted";
    }
    return "?";
}

inline FamilyKind parse_family(const std::string& s) {
    for (auto k : {FamilyKind::dictator, FamilyKind::parity, FamilyKind::majority, FamilyKind::tribes,
                   FamilyKind::recursive_majority3, FamilyKind::runs, FamilyKind::weighted_majority}) {
        if (s == family_name(k)) return k;
    }
    throw ContractError("unknown family '" + s + "'");
}

struct FamilySpec {
    FamilyKind kind = FamilyKind::dictator;
    int n = 0;
    int t = 0;      // tribes: number of tribes
    int s = 0;      // tribes: tribe size
    int depth = 0;  // recmaj3
    std::optional<int> threshold;  // runs; the median when absent
    WeightedMajority weighted;     // weighted

    static FamilySpec dictator(int n) { return of(FamilyKind::dictator, n); }
    static FamilySpec parity(int n) { return of(FamilyKind::parity, n); }
    static FamilySpec majority(int n) { return of(FamilyKind::majority, n); }

    // n may exceed t·s; the extra variables are dummies.
    static FamilySpec tribes(int t, int s, int n = 0) {
        auto f = of(FamilyKind::tribes, n == 0 ? t * s : n);
        f.t = t;
        f.s = s;
        return f;
    }

    static FamilySpec recursive_majority3(int depth) {
        auto f = of(FamilyKind::recursive_majority3, 0);
        f.depth = depth;
        f.n = depth >= 0 && depth <= 40 ? static_cast<int>(std::lround(std::pow(3.0, depth))) : -1;
        return f;
    }

    static FamilySpec runs(int n, std::optional<int> threshold = std::nullopt) {
        auto f = of(FamilyKind::runs, n);
        f.threshold = threshold;
        return f;
    }

    static FamilySpec weighted_majority(WeightedMajority wm) {
        auto f = of(FamilyKind::weighted_majority, wm.n());
        f.weighted = std::move(wm);
        return f;
    }

    static FamilySpec of(FamilyKind kind, int n) {
        FamilySpec f;
        f.kind = kind;
        f.n = n;
        return f;
    }

    void validate() const {
        require(n >= 1, std::string(family_name(kind)) + ": n must be at least 1");
        switch (kind) {
            case FamilyKind::tribes:
                require(t >= 1 && s >= 1, "tribes: t and s must be positive");
                require(static_cast<long long>(t) * s <= n, "tribes: t*s exceeds n");
                break;
            case FamilyKind::recursive_majority3:
                require(depth >= 1, "recmaj3: depth must be at least 1");
                break;
            case FamilyKind::weighted_majority:
                weighted.validate();
                break;
            default: break;
        }
    }
};

// P[R > T] with R − 1 ~ Binomial(n − 1, 1/2).
inline double runs_upper_tail(int n, int threshold) {
    const int m = n - 1;
    double p = 0.0;
    for (int k = std::max(0, threshold); k <= m; ++k) {
        p += std::exp(detail::log_binom(m, k) - m * std::log(2.0));
    }
    return p;
}

// Smallest T with P[R > T] ≤ 1/2. R − 1 is Binomial(n − 1, 1/2), and its
// symmetry puts the answer at ⌈n/2⌉; then P[R ≥ T] > 1/2.
inline int runs_median_threshold(int n) {
    require(n >= 1, "runs: n must be at least 1");
    return (n + 1) / 2;
}

inline int runs_count(Mask x, int n) {
    const Mask diff = (x ^ (x >> 1)) & full_mask(n - 1 > 0 ? n - 1 : 0);
    return 1 + (n > 1 ? popcount(diff) : 0);
}

inline BooleanFunction make_family(const FamilySpec& spec) {
    spec.validate();
    const int n = spec.n;
    require_table_size(n, max_n(), "make_family");
    switch (spec.kind) {
        case FamilyKind::dictator:
            return BooleanFunction::tabulate(n, [](Mask x) { return x & 1u; }, Kind::indicator);
        case FamilyKind::parity:
            return BooleanFunction::tabulate(n, [](Mask x) { return popcount(x) & 1; }, Kind::indicator);
        case FamilyKind::majority:
            return BooleanFunction::tabulate(n, [n](Mask x) { return 2 * popcount(x) > n; }, Kind::indicator);
        case FamilyKind::tribes: {
            const Mask block = full_mask(spec.s);
            return BooleanFunction::tabulate(
                n,
                [&](Mask x) {
                    for (int i = 0; i < spec.t; ++i) {
                        if (((x >> (i * spec.s)) & block) == block) return true;
                    }
                    return false;
                },
                Kind::indicator);
        }
        case FamilyKind::recursive_majority3: {
            // level-by-level reduction of the leaf bits
            std::vector<double> t(std::size_t{1} << n);
            std::vector<std::uint8_t> level(n);
            for (Mask x = 0; x < t.size(); ++x) {
                for (int j = 0; j < n; ++j) level[j] = (x >> j) & 1u;
                for (int width = n; width > 1; width /= 3) {
                    for (int i = 0; i < width / 3; ++i) {
                        level[i] = level[3 * i] + level[3 * i + 1] + level[3 * i + 2] >= 2;
                    }
                }
                t[x] = level[0];
            }
            return BooleanFunction(n, std::move(t), Kind::indicator);
        }
        case FamilyKind::runs: {
            const int thr = spec.threshold.value_or(runs_median_threshold(n));
            return BooleanFunction::tabulate(n, [&](Mask x) { return runs_count(x, n) > thr; }, Kind::indicator);
        }
        case FamilyKind::weighted_majority:
            return weighted_event(spec.weighted, n);
    }
    throw ContractError("make_family: unknown kind");
}

inline double tribes_probability(int t, int s) { return 1.0 - std::pow(1.0 - std::ldexp(1.0, -s), t); }

// Influence of each variable inside a tribe.
inline double tribes_influence(int t, int s) {
    return std::ldexp(1.0, -(s - 1)) * std::pow(1.0 - std::ldexp(1.0, -s), t - 1);
}

struct TribesParams {
    int t = 0;
    int s = 0;
};

// s near log₂n − log₂log₂n − log₂ln2, chosen so that 1 − (1 − 2^{−s})^{n/s}
// is as close to 1/2 as any neighbouring integer; t = ⌊n/s⌋.
inline TribesParams tribes_params(int n) {
    require(n >= 4, "tribes_params: n must be at least 4");
    const double ln2 = std::log(2.0);
    const double l2n = std::log2(static_cast<double>(n));
    const double sigma = l2n - std::log2(l2n) - std::log2(ln2);
    auto miss = [&](int s) {
        const double p = 1.0 - std::pow(1.0 - std::ldexp(1.0, -s), static_cast<double>(n) / s);
        return std::abs(p - 0.5);
    };
    int s = std::max(1, static_cast<int>(std::floor(sigma)));
    if (miss(s + 1) < miss(s)) ++s;
    while (s + 1 <= n && miss(s + 1) < miss(s)) ++s;
    while (s > 1 && miss(s - 1) < miss(s)) --s;
    return {n / s, s};
}

// Per-variable influence of the depth-d ternary majority tree.
inline double recursive_majority_influence(int depth) { return std::ldexp(1.0, -depth); }

}  // namespace boolnoise
