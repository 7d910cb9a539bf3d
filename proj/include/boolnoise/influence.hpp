/*
 * influence.hpp: influences, level weights, and the shifting operator.
 *
 *   I_k(f)  = E|f(x) − f(σ_k x)|
 *   I(f)    = Σ_k I_k(f),   II(f) = Σ_k I_k(f)²
 *   J(f)    = Σ_{S≠∅} f̂(S)² / |S|
 *   α       = log I / log n,   β = −log J / log n     (natural logs)
 *
 * κ_j (the j-shift) sorts each pair {x, σ_j x}: the larger value goes to the
 * point with x_j = 1.
 */

#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "boolnoise/function.hpp"

namespace boolnoise {

struct InfluenceProfile {
    std::vector<double> per_var;
    double total_I = 0.0;
    double total_II = 0.0;
    double J = 0.0;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::vector<double> level_weights;
};

// E|f(x) − f(σ_k x)| by direct traversal; `var` is 0-based.
inline double influence(const BooleanFunction& f, int var) {
    require(var >= 0 && var < f.n(), "influence: variable index out of range");
    const auto t = f.table();
    const Mask bit = Mask{1} << var;
    double s = 0.0;
    for (Mask x = 0; x < t.size(); ++x) {
        if (x & bit) continue;
        s += std::abs(t[x] - t[x | bit]);
    }
    // each unordered pair stands for two points x, σ_k x
    return s * std::ldexp(1.0, 1 - f.n());
}

inline InfluenceProfile influence_profile(const BooleanFunction& f, const Spectrum& sp) {
    require(sp.n() == f.n(), "influence_profile: spectrum does not match function");
    InfluenceProfile p;
    const int n = f.n();
    p.per_var.resize(n);
    for (int k = 0; k < n; ++k) {
        p.per_var[k] = influence(f, k);
        p.total_I += p.per_var[k];
        p.total_II += p.per_var[k] * p.per_var[k];
    }
    p.level_weights = sp.level_weights();
    for (int k = 1; k <= n; ++k) p.J += p.level_weights[k] / k;
    if (n > 1) {
        const double logn = std::log(static_cast<double>(n));
        if (p.total_I > 0.0) p.alpha = std::log(p.total_I) / logn;
        if (p.J > 0.0) p.beta = -std::log(p.J) / logn;
    }
    return p;
}

inline InfluenceProfile influence_profile(const BooleanFunction& f) {
    return influence_profile(f, transform(f));
}

// Indicator identity I_k = 4 Σ_{S∋k} f̂(S)².
inline std::vector<double> spectral_influences(const Spectrum& sp) {
    std::vector<double> out(sp.n(), 0.0);
    for (Mask s = 1; s < sp.size(); ++s) {
        const double w = 4.0 * sp[s] * sp[s];
        for (Mask rest = s; rest; rest &= rest - 1) out[std::countr_zero(rest)] += w;
    }
    return out;
}

// κ_j f; `var` is 0-based.
inline BooleanFunction shift(const BooleanFunction& f, int var) {
    require(var >= 0 && var < f.n(), "shift: variable index out of range");
    std::vector<double> t(f.table().begin(), f.table().end());
    const Mask bit = Mask{1} << var;
    for (Mask x = 0; x < t.size(); ++x) {
        if (x & bit) continue;
        double lo = t[x];
        double hi = t[x | bit];
        if (lo > hi) {
            t[x] = hi;
            t[x | bit] = lo;
        }
    }
    return BooleanFunction(f.n(), std::move(t), f.kind());
}

// κ_1 κ_2 … κ_n f, applying κ_n first and κ_1 last.
inline BooleanFunction monotonize(const BooleanFunction& f) {
    BooleanFunction g = f;
    for (int var = f.n() - 1; var >= 0; --var) g = shift(g, var);
    return g;
}

inline bool is_monotone(const BooleanFunction& f) {
    const auto t = f.table();
    for (int var = 0; var < f.n(); ++var) {
        const Mask bit = Mask{1} << var;
        for (Mask x = 0; x < t.size(); ++x) {
            if (!(x & bit) && t[x] > t[x | bit]) return false;
        }
    }
    return true;
}

}  // namespace boolnoise
