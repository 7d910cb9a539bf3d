/*
 * noise.hpp: noise operators and the quantities built on them.
 *
 *   Q_ε f        = Σ_S f̂(S) (1−2ε)^{|S|} u_S        (ε-flip noise)
 *   T_η          = Q_{(1−η)/2}
 *   VAR(f, ε)    = Σ_{S≠∅} f̂(S)² (1−2ε)^{2|S|}
 *   γ(A, ε, δ)   = P{x : |Q_ε χ_A(x) − P(A)| > δ}
 *   φ(A, ε)      = inf{δ > 0 : γ(A, ε, δ) < δ}
 *   Z(f, ν)      = Σ_S f̂(S)² Π_{j∈S} 4ζ_j           (two-stage noise)
 *
 * Fixed-size noise flips a uniformly chosen set of exactly q bits; its
 * spectral multiplier at level k is
 *
 *   c(n, q, k) = C(n,q)^{-1} Σ_j (−1)^j C(k,j) C(n−k, q−j).
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <utility>
#include <variant>
#include <vector>

#include "boolnoise/function.hpp"
#include "boolnoise/rng.hpp"

namespace boolnoise {

struct Bernoulli {
    double eps = 0.0;
};

struct FixedSize {
    int q = 0;
};

using NoiseModel = std::variant<Bernoulli, FixedSize>;

inline void validate(const NoiseModel& model, int n) {
    if (auto* b = std::get_if<Bernoulli>(&model)) {
        require(b->eps >= 0.0 && b->eps <= 1.0, "Bernoulli noise: eps must lie in [0, 1]");
    } else {
        const auto& f = std::get<FixedSize>(model);
        require(f.q >= 0 && f.q <= n, "FixedSize noise: q must lie in [0, n]");
    }
}

// One noisy copy of x (n ≤ 64).
inline Mask sample_noise(Mask x, int n, const NoiseModel& model, Philox& rng) {
    require(n >= 1 && n <= 64, "sample_noise: n must lie in [1, 64]");
    validate(model, n);
    Mask flips = 0;
    if (auto* b = std::get_if<Bernoulli>(&model)) {
        for (int j = 0; j < n; ++j) {
            if (rng.bernoulli(b->eps)) flips |= Mask{1} << j;
        }
    } else {
        // partial Fisher–Yates over bit positions
        const int q = std::get<FixedSize>(model).q;
        std::array<int, 64> pos{};
        std::iota(pos.begin(), pos.begin() + n, 0);
        for (int i = 0; i < q; ++i) {
            int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
            std::swap(pos[i], pos[j]);
            flips |= Mask{1} << pos[i];
        }
    }
    return x ^ flips;
}

inline void require_probability(double eps, const char* op) {
    require(eps >= 0.0 && eps <= 1.0, std::string(op) + ": eps must lie in [0, 1]");
}

inline Spectrum t_eta(const Spectrum& sp, double eta) {
    return sp.scaled_by_level([eta](int k) { return std::pow(eta, k); });
}

inline Spectrum noise_operator(const Spectrum& sp, double eps) {
    require_probability(eps, "noise_operator");
    return t_eta(sp, 1.0 - 2.0 * eps);
}

// Q_ε f evaluated at every configuration.
inline std::vector<double> noised_values(const BooleanFunction& f, double eps) {
    require_table_size(f.n(), max_n() - 1, "noised_values");
    return inverse_table(noise_operator(transform(f), eps));
}

inline double var_noise(const Spectrum& sp, double eps) {
    require_probability(eps, "var_noise");
    const double eta2 = (1.0 - 2.0 * eps) * (1.0 - 2.0 * eps);
    const auto w = sp.level_weights();
    double s = 0.0;
    double factor = 1.0;
    for (std::size_t k = 1; k < w.size(); ++k) {
        factor *= eta2;
        s += w[k] * factor;
    }
    return s;
}

namespace detail {
inline void require_indicator(const BooleanFunction& f, const char* op) {
    require(f.kind() == Kind::indicator, std::string(op) + ": an indicator function is required");
}

// |Q_ε χ_A(x) − P(A)| for every x. The mean is removed in the spectral
// domain so a constant deviation comes out exactly constant.
inline std::vector<double> deviations(const BooleanFunction& f, double eps) {
    require_indicator(f, "gamma");
    require_probability(eps, "gamma");
    require_table_size(f.n(), max_n() - 1, "gamma");
    const auto sp = transform(f);
    std::vector<double> c(sp.coeffs().begin(), sp.coeffs().end());
    c[0] = 0.0;
    auto d = inverse_table(noise_operator(Spectrum(f.n(), std::move(c)), eps));
    for (double& v : d) v = std::abs(v);
    return d;
}
}  // namespace detail

inline double gamma(const BooleanFunction& f, double eps, double delta) {
    require(delta > 0.0, "gamma: delta must be positive");
    const auto d = detail::deviations(f, eps);
    std::size_t hits = 0;
    for (double v : d) hits += (v > delta);
    return static_cast<double>(hits) / static_cast<double>(d.size());
}

struct GaugeResult {
    double phi = 0.0;
    double var_noise = 0.0;
    // (deviation, probability mass), increasing in deviation
    std::vector<std::pair<double, double>> deviation_distribution;
};

inline GaugeResult gauge_phi(const BooleanFunction& f, double eps) {
    auto d = detail::deviations(f, eps);
    std::sort(d.begin(), d.end());
    const double unit = 1.0 / static_cast<double>(d.size());

    GaugeResult r;
    r.var_noise = var_noise(transform(f), eps);
    for (std::size_t i = 0; i < d.size();) {
        std::size_t j = i;
        while (j < d.size() && d[j] == d[i]) ++j;
        r.deviation_distribution.emplace_back(d[i], static_cast<double>(j - i) * unit);
        i = j;
    }

    // γ is a right-continuous step function: on [b_i, b_{i+1}) it equals the
    // mass strictly above b_i, where b_0 = 0 and b_1 < b_2 < ... are the
    // positive deviations. The first interval where γ < δ is attainable fixes
    // the infimum.
    std::vector<std::pair<double, double>> positive;
    for (const auto& g : r.deviation_distribution) {
        if (g.first > 0.0) positive.push_back(g);
    }
    std::vector<double> tail(positive.size() + 1, 0.0);
    for (std::size_t i = positive.size(); i-- > 0;) tail[i] = tail[i + 1] + positive[i].second;
    for (std::size_t i = 0; i <= positive.size(); ++i) {
        const double lo = i == 0 ? 0.0 : positive[i - 1].first;
        const double hi = i < positive.size() ? positive[i].first : INFINITY;
        const double candidate = std::max(lo, tail[i]);
        if (candidate < hi) {
            r.phi = candidate;
            break;
        }
    }
    return r;
}

// ζ_j: variances of the first-stage variables q_j (each with mean 1/2).
class VarianceVector {
public:
    explicit VarianceVector(std::vector<double> zetas) : zetas_(std::move(zetas)) {
        for (double z : zetas_) {
            require(z >= 0.0 && z <= 0.25 + 1e-15, "VarianceVector: each zeta must lie in [0, 1/4]");
        }
    }

    // Variance of a finitely supported q_j, repeated n times. The
    // distribution must have mean 1/2.
    static VarianceVector from_distribution(int n, std::span<const double> values,
                                            std::span<const double> probs) {
        require(values.size() == probs.size() && !values.empty(),
                "VarianceVector: values and probabilities must pair up");
        double mean = 0.0, second = 0.0, total = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            require(values[i] >= 0.0 && values[i] <= 1.0 && probs[i] >= 0.0,
                    "VarianceVector: q must lie in [0,1] with nonnegative mass");
            total += probs[i];
            mean += probs[i] * values[i];
            second += probs[i] * values[i] * values[i];
        }
        require(std::abs(total - 1.0) < 1e-12, "VarianceVector: probabilities must sum to 1");
        require(std::abs(mean - 0.5) < 1e-12, "VarianceVector: E q_j must equal 1/2");
        double z = std::clamp(second - 0.25, 0.0, 0.25);
        return VarianceVector(std::vector<double>(n, z));
    }

    // q_j ∈ {1−ε, ε} with equal mass: the ε-flip noise.
    static VarianceVector bernoulli(int n, double eps) {
        require_probability(eps, "VarianceVector::bernoulli");
        return VarianceVector(std::vector<double>(n, (0.5 - eps) * (0.5 - eps)));
    }

    // 1-bits immune, 0-bits noise prone: q_j = 1 w.p. 1/2−ε, ε/(1/2+ε) w.p. 1/2+ε.
    static VarianceVector asymmetric(int n, double eps) {
        require(eps >= 0.0 && eps <= 0.5, "VarianceVector::asymmetric: eps must lie in [0, 1/2]");
        const std::array<double, 2> v{1.0, eps / (0.5 + eps)};
        const std::array<double, 2> p{0.5 - eps, 0.5 + eps};
        return from_distribution(n, v, p);
    }

    // q_j = 1, 0 with mass (1−ε)/2 each, 1/2 with mass ε.
    static VarianceVector three_point(int n, double eps) {
        require_probability(eps, "VarianceVector::three_point");
        const std::array<double, 3> v{1.0, 0.0, 0.5};
        const std::array<double, 3> p{(1.0 - eps) / 2.0, (1.0 - eps) / 2.0, eps};
        return from_distribution(n, v, p);
    }

    std::span<const double> zetas() const { return zetas_; }
    std::size_t size() const { return zetas_.size(); }

private:
    std::vector<double> zetas_;
};

inline double z_general(const Spectrum& sp, const VarianceVector& zetas) {
    require(static_cast<int>(zetas.size()) == sp.n(), "z_general: need one zeta per variable");
    std::vector<double> prod(sp.size());
    prod[0] = 1.0;
    double s = sp[0] * sp[0];
    for (Mask m = 1; m < sp.size(); ++m) {
        const int low = std::countr_zero(m);
        prod[m] = prod[m & (m - 1)] * 4.0 * zetas.zetas()[low];
        s += sp[m] * sp[m] * prod[m];
    }
    return s;
}

struct BonamiMargin {
    double lhs = 0.0;  // ‖T_η f‖₂
    double rhs = 0.0;  // ‖f‖_{1+η²}
};

inline BonamiMargin bonami_margin(const BooleanFunction& f, double eta) {
    require(eta >= 0.0 && eta <= 1.0, "bonami_margin: eta must lie in [0, 1]");
    BonamiMargin m;
    m.lhs = std::sqrt(t_eta(transform(f), eta).energy());
    const double p = 1.0 + eta * eta;
    double s = 0.0;
    for (double v : f.table()) s += std::pow(std::abs(v), p);
    m.rhs = std::pow(s / static_cast<double>(f.size()), 1.0 / p);
    return m;
}

namespace detail {
// Exact for n <= 120, where every partial product stays below 2^127.
inline unsigned __int128 binom_u128(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    return r;
}


inline double log_binom(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}
}  // namespace detail

inline double fixed_noise_coeff(int n, int q, int k) {
    require(n >= 1, "fixed_noise_coeff: n must be positive");
    require(q >= 0 && q <= n && k >= 0 && k <= n, "fixed_noise_coeff: need 0 <= q, k <= n");
    const int jlo = std::max(0, q - (n - k));
    const int jhi = std::min(k, q);
    if (n <= 120) {
        __int128 sum = 0;
        for (int j = jlo; j <= jhi; ++j) {
            const auto term = static_cast<__int128>(detail::binom_u128(k, j) * detail::binom_u128(n - k, q - j));
            sum += (j % 2 == 0) ? term : -term;
        }
        const auto denom = static_cast<long double>(detail::binom_u128(n, q));
        return static_cast<double>(static_cast<long double>(sum) / denom);
    }
    // log-domain terms with Neumaier summation; cancellation is the hazard here
    const double log_total = detail::log_binom(n, q);
    double sum = 0.0, comp = 0.0;
    for (int j = jlo; j <= jhi; ++j) {
        double term = std::exp(detail::log_binom(k, j) + detail::log_binom(n - k, q - j) - log_total);
        if (j % 2) term = -term;
        const double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    }
    return std::clamp(sum + comp, -1.0, 1.0);
}

// T̃_q as a spectral map.
inline Spectrum fixed_noise_operator(const Spectrum& sp, int q) {
    const int n = sp.n();
    require(q >= 0 && q <= n, "fixed_noise_operator: q must lie in [0, n]");
    return sp.scaled_by_level([n, q](int k) { return fixed_noise_coeff(n, q, k); });
}

inline double var_fixed(const Spectrum& sp, int q) {
    const int n = sp.n();
    require(q >= 0 && q <= n, "var_fixed: q must lie in [0, n]");
    const auto w = sp.level_weights();
    double s = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double c = fixed_noise_coeff(n, q, k);
        s += c * c * w[k];
    }
    return s;
}

}  // namespace boolnoise
