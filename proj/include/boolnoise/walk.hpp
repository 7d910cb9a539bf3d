/*
 * walk.hpp: lazy random walk on the n-cube started uniformly on an event A.
 *
 * One step stays put with probability 1/2 and otherwise flips a uniform
 * coordinate. The density f_t = 2^n P_A^t evolves diagonally in the
 * Fourier–Walsh basis:
 *
 *   f̂_t(S) = (1 − |S|/n)^t f̂_0(S),   f_0 = χ_A / P[A]
 *
 * Distances are total mass 2^{−n} Σ_x |f_t(x) − 1|, so disjoint supports are
 * at distance 2.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "boolnoise/function.hpp"

namespace boolnoise {

struct WalkState {
    int n = 0;
    std::vector<double> density;
    std::uint64_t t = 0;

    double mass() const {
        double s = 0.0;
        for (double v : density) s += v;
        return s / static_cast<double>(density.size());
    }
};

namespace detail {
inline void require_event(const BooleanFunction& a, const char* op) {
    require(a.kind() == Kind::indicator, std::string(op) + ": the start set must be an indicator");
    require(a.mean() > 0.0, std::string(op) + ": the start set is empty");
    require_table_size(a.n(), max_n() - 1, op);
}

inline std::vector<double> walk_eigenvalues(int n) {
    std::vector<double> lam(n + 1);
    for (int k = 0; k <= n; ++k) lam[k] = static_cast<double>(n - k) / n;
    return lam;
}
}  // namespace detail

inline WalkState walk_start(const BooleanFunction& a) {
    detail::require_event(a, "walk_start");
    const double p = a.mean();
    WalkState s;
    s.n = a.n();
    s.density.assign(a.table().begin(), a.table().end());
    for (double& v : s.density) v /= p;
    return s;
}

inline WalkState walk_evolve(const WalkState& s, std::uint64_t steps) {
    if (steps == 0) return s;
    const auto lam = detail::walk_eigenvalues(s.n);
    const auto sp = transform(BooleanFunction(s.n, s.density));
    const auto out = sp.scaled_by_level([&](int k) { return std::pow(lam[k], static_cast<double>(steps)); });
    return {s.n, inverse_table(out), s.t + steps};
}

// f_{t+1} = f_t/2 + (2n)^{−1} Σ_j f_t ∘ σ_j
inline WalkState walk_step_direct(const WalkState& s) {
    WalkState out{s.n, std::vector<double>(s.density.size()), s.t + 1};
    const double w = 1.0 / (2.0 * s.n);
    for (Mask x = 0; x < s.density.size(); ++x) {
        double acc = 0.0;
        for (int j = 0; j < s.n; ++j) acc += s.density[x ^ (Mask{1} << j)];
        out.density[x] = 0.5 * s.density[x] + w * acc;
    }
    return out;
}

inline double tv_distance(const WalkState& s) {
    double d = 0.0;
    for (double v : s.density) d += std::abs(v - 1.0);
    return d / static_cast<double>(s.density.size());
}

struct MixingResult {
    std::uint64_t t = 0;                  // min{t : distance < eps}
    std::optional<std::uint64_t> l2_t;    // first t at which the L² bound drops below eps
};

inline constexpr std::uint64_t kMixingSearchCap = std::uint64_t{1} << 40;

inline MixingResult mixing_time(const BooleanFunction& a, double eps) {
    detail::require_event(a, "mixing_time");
    require(eps > 0.0, "mixing_time: eps must be positive");
    const int n = a.n();
    const double p = a.mean();
    const auto chi_hat = transform(a);
    const auto lam = detail::walk_eigenvalues(n);

    std::vector<double> f0(chi_hat.coeffs().begin(), chi_hat.coeffs().end());
    for (double& c : f0) c /= p;
    const Spectrum start(n, std::move(f0));

    auto distance = [&](std::uint64_t t) {
        const auto sp = start.scaled_by_level([&](int k) { return std::pow(lam[k], static_cast<double>(t)); });
        const auto f = inverse_table(sp);
        double d = 0.0;
        for (double v : f) d += std::abs(v - 1.0);
        return d / static_cast<double>(f.size());
    };
    // ‖f_t − 1‖₂ = P[A]^{−1} (Σ_{S≠∅} λ_S^{2t} χ̂_A(S)²)^{1/2} bounds the distance
    const auto levels = chi_hat.level_weights();
    auto l2_bound = [&](std::uint64_t t) {
        double s = 0.0;
        for (int k = 1; k <= n; ++k) s += std::pow(lam[k], 2.0 * static_cast<double>(t)) * levels[k];
        return std::sqrt(s) / p;
    };

    auto first_below = [&](auto&& metric) -> std::optional<std::uint64_t> {
        if (metric(0) < eps) return 0;
        std::uint64_t hi = 1;
        while (!(metric(hi) < eps)) {
            if (hi >= kMixingSearchCap) return std::nullopt;
            hi <<= 1;
        }
        std::uint64_t lo = hi / 2;  // metric(lo) >= eps
        while (hi - lo > 1) {
            const std::uint64_t mid = lo + (hi - lo) / 2;
            (metric(mid) < eps ? hi : lo) = mid;
        }
        return hi;
    };

    MixingResult r;
    const auto t = first_below(distance);
    if (!t) throw ResourceError("mixing_time: distance did not fall below eps within 2^40 steps");
    r.t = *t;
    r.l2_t = first_below(l2_bound);
    return r;
}

}  // namespace boolnoise
