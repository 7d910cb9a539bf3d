/*
 * majority.hpp: majority and weighted-majority functions.
 *
 *   M_K(x)     = sign Σ_{j∈K} (2x_j − 1)          (0 on an exact split)
 *   M_{w,s}    = {x : Σ_j (2x_j − 1) w_j > s}      (strict)
 *   Λ(f)       = max_K |E(f M_K)|
 *   Λ̃(f)       = max_{w∈[0,1]^n} |E(f M_w)|       (lower bound via candidates)
 *
 * The linear form Σ_j (2x_j − 1) w_j is evaluated as (Σ_{j∈x} w_j) −
 * (Σ_{j∉x} w_j), both partial sums accumulated in the same order, so that
 * symmetric weight vectors produce exact ties.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "boolnoise/function.hpp"
#include "boolnoise/influence.hpp"
#include "boolnoise/noise.hpp"
#include "boolnoise/parallel.hpp"
#include "boolnoise/rng.hpp"

namespace boolnoise {

inline int majority_sign(Mask x, Mask subset) {
    const int size = popcount(subset);
    const int ones = popcount(x & subset);
    const int diff = 2 * ones - size;
    return (diff > 0) - (diff < 0);
}

struct WeightedMajority {
    std::vector<double> weights;
    double threshold = 0.0;

    int n() const { return static_cast<int>(weights.size()); }

    void validate() const {
        require(!weights.empty(), "WeightedMajority: weights must be nonempty");
        bool any = false;
        for (double w : weights) {
            require(std::isfinite(w), "WeightedMajority: weights must be finite");
            any |= (w != 0.0);
        }
        require(any, "WeightedMajority: weights must not all be zero");
    }

    bool nonnegative() const {
        return std::all_of(weights.begin(), weights.end(), [](double w) { return w >= 0.0; });
    }

    bool uniform() const {
        return std::all_of(weights.begin(), weights.end(), [&](double w) { return w == weights[0]; });
    }

    static WeightedMajority uniform_weights(int n, double threshold = 0.0) {
        return {std::vector<double>(n, 1.0), threshold};
    }
};

namespace detail {
// Σ_{j∈x} w_j for every x.
inline std::vector<double> subset_sums(std::span<const double> w) {
    const int n = static_cast<int>(w.size());
    std::vector<double> sums(std::size_t{1} << n);
    sums[0] = 0.0;
    for (Mask x = 1; x < sums.size(); ++x) {
        sums[x] = sums[x & (x - 1)] + w[std::countr_zero(x)];
    }
    return sums;
}

struct LinearForm {
    std::vector<double> ones;  // Σ_{j∈x} w_j
    Mask full = 0;
    double at(Mask x) const { return ones[x] - ones[~x & full]; }
    // compares Σ_{j∈x} w_j against Σ_{j∉x} w_j + s without forming the difference
    int sign(Mask x, double s) const {
        const double lhs = ones[x];
        const double rhs = ones[~x & full] + s;
        return (lhs > rhs) - (lhs < rhs);
    }
};

inline LinearForm linear_form(std::span<const double> w) {
    require_table_size(static_cast<int>(w.size()), max_n(), "linear_form");
    return {subset_sums(w), full_mask(static_cast<int>(w.size()))};
}
}  // namespace detail

inline BooleanFunction weighted_event(const WeightedMajority& wm, int n) {
    wm.validate();
    require(wm.n() == n, "weighted_event: weights length must equal n");
    const auto form = detail::linear_form(wm.weights);
    return BooleanFunction::tabulate(
        n, [&](Mask x) { return form.sign(x, wm.threshold) > 0 ? 1.0 : 0.0; }, Kind::indicator);
}

// M_w = sign(Σ (2x_j − 1) w_j − s) as a {−1, 0, 1} table.
inline BooleanFunction weighted_sign(const WeightedMajority& wm) {
    wm.validate();
    const auto form = detail::linear_form(wm.weights);
    return BooleanFunction::tabulate(
        wm.n(), [&](Mask x) { return static_cast<double>(form.sign(x, wm.threshold)); }, Kind::signed_unit);
}

struct CorrelationReport {
    double value = 0.0;  // E(f M_K)
    Mask subset = 0;
    // √|K| E(fM_K) (1 + √(−log E(fM_K))) with unit constant; set only for
    // monotone f with values in [0,1] and positive correlation
    std::optional<double> bound_rhs;
    std::optional<double> influence_sum;  // I_K(f)
};

inline CorrelationReport correlation_with_majority(const BooleanFunction& f, Mask subset) {
    require(subset <= full_mask(f.n()), "correlation_with_majority: subset has bits beyond n");
    CorrelationReport r;
    r.subset = subset;
    const auto t = f.table();
    double s = 0.0;
    for (Mask x = 0; x < t.size(); ++x) s += t[x] * majority_sign(x, subset);
    r.value = s / static_cast<double>(t.size());

    const bool unit_range =
        std::all_of(t.begin(), t.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
    if (unit_range && r.value > 0.0 && subset != 0 && is_monotone(f)) {
        r.bound_rhs = std::sqrt(static_cast<double>(popcount(subset))) * r.value *
                      (1.0 + std::sqrt(-std::log(r.value)));
        double ik = 0.0;
        for (Mask rest = subset; rest; rest &= rest - 1) ik += influence(f, std::countr_zero(rest));
        r.influence_sum = ik;
    }
    return r;
}

enum class LambdaMode { exact, heuristic };

struct LambdaResult {
    double value = 0.0;
    Mask best_subset = 0;               // exact mode
    std::vector<double> best_weights;   // heuristic mode
};

inline constexpr int kLambdaExactMaxN = 12;

// E(f M_w) with threshold 0 and ties scored 0.
inline double weighted_correlation(const BooleanFunction& f, std::span<const double> w) {
    require(static_cast<int>(w.size()) == f.n(), "weighted_correlation: weight length must equal n");
    const auto form = detail::linear_form(w);
    const auto t = f.table();
    double s = 0.0;
    for (Mask x = 0; x < t.size(); ++x) s += t[x] * form.sign(x, 0.0);
    return s / static_cast<double>(t.size());
}

inline LambdaResult lambda(const BooleanFunction& f, LambdaMode mode) {
    LambdaResult best;
    const int n = f.n();
    if (mode == LambdaMode::exact) {
        if (n > kLambdaExactMaxN) {
            throw ResourceError("lambda: exact mode is limited to n <= " + std::to_string(kLambdaExactMaxN) +
                                "; use the heuristic mode");
        }
        const auto t = f.table();
        for (Mask k = 1; k <= full_mask(n); ++k) {
            double s = 0.0;
            for (Mask x = 0; x < t.size(); ++x) s += t[x] * majority_sign(x, k);
            const double v = std::abs(s) / static_cast<double>(t.size());
            if (v > best.value) {
                best.value = v;
                best.best_subset = k;
            }
        }
        return best;
    }

    // candidates: uniform over [n]; uniform over the k most influential
    // variables for every k; the influence vector scaled into [0,1]^n
    const auto prof = influence_profile(f);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return prof.per_var[a] > prof.per_var[b]; });

    auto consider = [&](std::vector<double> w) {
        if (std::none_of(w.begin(), w.end(), [](double v) { return v > 0.0; })) return;
        const double v = std::abs(weighted_correlation(f, w));
        if (v > best.value || best.best_weights.empty()) {
            best.value = std::max(best.value, v);
            best.best_weights = std::move(w);
        }
    };
    consider(std::vector<double>(n, 1.0));
    for (int k = 1; k <= n; ++k) {
        std::vector<double> w(n, 0.0);
        for (int i = 0; i < k; ++i) w[order[i]] = 1.0;
        consider(std::move(w));
    }
    const double top = prof.per_var[order[0]];
    if (top > 0.0) {
        std::vector<double> w(n);
        for (int j = 0; j < n; ++j) w[j] = prof.per_var[j] / top;
        consider(std::move(w));
    }
    return best;
}

inline constexpr int kDeficitExactMaxN = 12;

// P[x ∈ M △ N_ε(x) ∈ M]. Exact for n ≤ 12; otherwise sampled, using the
// exchangeable count representation when all weights are equal.
inline Estimate stability_deficit(const WeightedMajority& wm, double eps, std::uint64_t samples,
                                  std::uint64_t seed, unsigned workers = 1) {
    wm.validate();
    require_probability(eps, "stability_deficit");
    const int n = wm.n();
    if (n <= kDeficitExactMaxN) {
        const auto chi = weighted_event(wm, n);
        const auto q = noised_values(chi, eps);
        double pm = 0.0, cross = 0.0;
        for (Mask x = 0; x < chi.size(); ++x) {
            pm += chi[x];
            cross += chi[x] * q[x];
        }
        const double size = static_cast<double>(chi.size());
        Estimate e;
        e.value = std::max(0.0, 2.0 * (pm - cross) / size);
        e.seed = seed;
        e.exact = true;
        return e;
    }
    require(samples >= 1, "stability_deficit: samples must be positive");

    const unsigned lanes = std::max(1u, workers);
    std::vector<std::uint64_t> hits(lanes, 0);
    const std::uint64_t chunk = (samples + lanes - 1) / lanes;

    if (wm.uniform()) {
        const double w = wm.weights[0];
        const double s = wm.threshold;
        auto inside = [&](long long ones) { return static_cast<double>(2 * ones - n) * w > s; };
        parallel_for(lanes, lanes, [&](std::uint64_t lane) {
            const std::uint64_t lo = lane * chunk;
            const std::uint64_t hi = std::min(samples, lo + chunk);
            std::uint64_t h = 0;
            for (std::uint64_t i = lo; i < hi; ++i) {
                Philox rng(seed, i);
                const int k = std::binomial_distribution<int>(n, 0.5)(rng);
                const int lost = std::binomial_distribution<int>(k, eps)(rng);
                const int gained = std::binomial_distribution<int>(n - k, eps)(rng);
                h += inside(k) != inside(static_cast<long long>(k) - lost + gained);
            }
            hits[lane] = h;
        });
    } else {
        parallel_for(lanes, lanes, [&](std::uint64_t lane) {
            const std::uint64_t lo = lane * chunk;
            const std::uint64_t hi = std::min(samples, lo + chunk);
            std::uint64_t h = 0;
            for (std::uint64_t i = lo; i < hi; ++i) {
                Philox rng(seed, i);
                double ones_x = 0.0, zeros_x = 0.0, ones_y = 0.0, zeros_y = 0.0;
                std::uint64_t word = 0;
                for (int j = 0; j < n; ++j) {
                    if (j % 64 == 0) word = rng();
                    const bool xj = (word >> (j % 64)) & 1u;
                    const bool yj = xj != rng.bernoulli(eps);
                    (xj ? ones_x : zeros_x) += wm.weights[j];
                    (yj ? ones_y : zeros_y) += wm.weights[j];
                }
                h += (ones_x > zeros_x + wm.threshold) != (ones_y > zeros_y + wm.threshold);
            }
            hits[lane] = h;
        });
    }
    return proportion(std::accumulate(hits.begin(), hits.end(), std::uint64_t{0}), samples, seed);
}

// For w ≥ 0 the sign function is monotone and ip = 2·abs_mean.
struct InnerProduct {
    double ip = 0.0;        // Σ_j w_j I_j(M_w)
    double abs_mean = 0.0;  // E|Σ_j w_j (2x_j − 1)|
};

inline InnerProduct influence_inner_product(std::span<const double> w) {
    const int n = static_cast<int>(w.size());
    require(n >= 1, "influence_inner_product: weights must be nonempty");
    double norm2 = 0.0;
    for (double v : w) {
        require(v >= 0.0, "influence_inner_product: weights must be nonnegative");
        norm2 += v * v;
    }
    require(norm2 > 0.0, "influence_inner_product: weights must not all be zero");

    WeightedMajority wm{std::vector<double>(w.begin(), w.end()), 0.0};
    const auto sign = weighted_sign(wm);
    const auto form = detail::linear_form(w);
    InnerProduct r;
    for (int j = 0; j < n; ++j) r.ip += w[j] * influence(sign, j);
    double s = 0.0;
    for (Mask x = 0; x < sign.size(); ++x) s += std::abs(form.at(x));
    r.abs_mean = s / static_cast<double>(sign.size());
    return r;
}

inline constexpr int kMomentExactMaxN = 20;

struct MomentCheck {
    double fourth_moment = 0.0;  // E[(Σ w_j (2x_j − 1))⁴]
    double identity_rhs = 0.0;   // 3‖w‖₂⁴ − 2‖w‖₄⁴
    double std_error = 0.0;
    bool exact = false;
};

inline MomentCheck moment_check(std::span<const double> w, std::uint64_t samples = 100000,
                                std::uint64_t seed = kDefaultSeed) {
    const int n = static_cast<int>(w.size());
    require(n >= 1, "moment_check: weights must be nonempty");
    double l2 = 0.0, l4 = 0.0;
    for (double v : w) {
        l2 += v * v;
        l4 += v * v * v * v;
    }
    require(l2 > 0.0, "moment_check: weights must not all be zero");

    MomentCheck r;
    r.identity_rhs = 3.0 * l2 * l2 - 2.0 * l4;
    if (n <= kMomentExactMaxN) {
        double s = 0.0;
        for (Mask x = 0; x <= full_mask(n); ++x) {
            double f = 0.0;
            for (int j = 0; j < n; ++j) f += ((x >> j) & 1u) ? w[j] : -w[j];
            s += f * f * f * f;
        }
        r.fourth_moment = std::ldexp(s, -n);
        r.exact = true;
        return r;
    }
    require(samples >= 2, "moment_check: sampling path needs at least two samples");
    double sum = 0.0, sum2 = 0.0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        Philox rng(seed, i);
        double f = 0.0;
        std::uint64_t word = 0;
        for (int j = 0; j < n; ++j) {
            if (j % 64 == 0) word = rng();
            f += ((word >> (j % 64)) & 1u) ? w[j] : -w[j];
        }
        const double f4 = f * f * f * f;
        sum += f4;
        sum2 += f4 * f4;
    }
    const double m = sum / static_cast<double>(samples);
    r.fourth_moment = m;
    r.std_error = std::sqrt(std::max(0.0, sum2 / static_cast<double>(samples) - m * m) /
                            static_cast<double>(samples - 1));
    return r;
}

// P[|f| >= t‖w‖₂] and P[|f| <= t‖w‖₂] by enumeration (n ≤ 20).
struct TailProbabilities {
    double upper = 0.0;
    double lower = 0.0;
};

inline TailProbabilities tail_probabilities(std::span<const double> w, double t) {
    const int n = static_cast<int>(w.size());
    require(n >= 1 && n <= kMomentExactMaxN, "tail_probabilities: n must lie in [1, 20]");
    double l2 = 0.0;
    for (double v : w) l2 += v * v;
    require(l2 > 0.0, "tail_probabilities: weights must not all be zero");
    const double cut = t * std::sqrt(l2);
    std::uint64_t up = 0, low = 0;
    for (Mask x = 0; x <= full_mask(n); ++x) {
        double f = 0.0;
        for (int j = 0; j < n; ++j) f += ((x >> j) & 1u) ? w[j] : -w[j];
        up += std::abs(f) >= cut;
        low += std::abs(f) <= cut;
    }
    const double size = std::ldexp(1.0, n);
    return {static_cast<double>(up) / size, static_cast<double>(low) / size};
}

// P[|Σ z_j v_j − s| <= b] for independent signs z_j.
inline Estimate sums_concentration(std::span<const double> v, double s, double b, std::uint64_t samples,
                                   std::uint64_t seed) {
    require(!v.empty() && b > 0.0 && samples >= 1, "sums_concentration: need v nonempty, b > 0, samples >= 1");
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        Philox rng(seed, i);
        double g = 0.0;
        std::uint64_t word = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (j % 64 == 0) word = rng();
            g += ((word >> (j % 64)) & 1u) ? v[j] : -v[j];
        }
        hits += std::abs(g - s) <= b;
    }
    return proportion(hits, samples, seed);
}

// P[f_w ≥ 0 | f_u ≥ 0] with w_j = 1/√(j log n) and u uniform on the first k
// coordinates. The estimate's sample count is the number of conditioning hits.
inline Estimate conditional_majority_agreement(int n, int k, std::uint64_t samples, std::uint64_t seed) {
    require(n >= 2 && k >= 1 && k <= n && samples >= 1, "conditional_majority_agreement: bad arguments");
    const double logn = std::log(static_cast<double>(n));
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) w[j] = 1.0 / std::sqrt((j + 1) * logn);
    double total = 0.0;
    for (double v : w) total += v;

    std::uint64_t cond = 0, both = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        Philox rng(seed, i);
        int su = 0;
        double ones = 0.0;
        for (int base = 0; base < n; base += 64) {
            std::uint64_t word = rng();
            if (n - base < 64) word &= full_mask(n - base);
            for (std::uint64_t bits = word; bits; bits &= bits - 1) {
                const int j = base + std::countr_zero(bits);
                ones += w[j];
                if (j < k) ++su;
            }
        }
        if (2 * su - k >= 0) {
            ++cond;
            both += 2.0 * ones - total >= 0.0;
        }
    }
    Estimate e = proportion(both, cond, seed);
    return e;
}

}  // namespace boolnoise
