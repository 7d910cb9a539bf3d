/*
 * function.hpp: dense functions on the n-cube and their Fourier–Walsh
 * spectra.
 *
 *   u_S(x)   = (-1)^{|S ∩ x|}
 *   f̂(S)     = 2^{-n} Σ_x f(x) u_S(x)          (forward carries the scale)
 *   f(x)     = Σ_S f̂(S) u_S(x)                 (inverse is the bare butterfly)
 *
 * With this normalization f̂(∅) is the mean and Σ_S f̂(S)² = E f².
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "boolnoise/common.hpp"

namespace boolnoise {

enum class Kind { indicator, signed_unit, real };

inline const char* kind_name(Kind k) {
    switch (k) {
        case Kind::indicator: return "indicator";
        case Kind::signed_unit: return "signed";
        case Kind::real: return "real";
    }
    return "real";
}

inline Kind parse_kind(const std::string& s) {
    if (s == "indicator") return Kind::indicator;
    if (s == "signed") return Kind::signed_unit;
    if (s == "real") return Kind::real;
    throw ContractError("unknown function kind '" + s + "'");
}

class BooleanFunction {
public:
    BooleanFunction(int n, std::vector<double> table, Kind kind = Kind::real)
        : n_(n), kind_(kind), table_(std::move(table)) {
        require(n >= 1, "BooleanFunction: n must be at least 1");
        require_table_size(n, max_n(), "BooleanFunction");
        require(table_.size() == (std::size_t{1} << n),
                "BooleanFunction: table length " + std::to_string(table_.size()) +
                    " does not equal 2^" + std::to_string(n));
        validate_kind();
    }

    // Tabulates pred(x) for every configuration x.
    template <class F>
    static BooleanFunction tabulate(int n, F&& pred, Kind kind = Kind::real) {
        require(n >= 1, "BooleanFunction: n must be at least 1");
        require_table_size(n, max_n(), "BooleanFunction");
        std::vector<double> t(std::size_t{1} << n);
        for (std::size_t x = 0; x < t.size(); ++x) t[x] = static_cast<double>(pred(static_cast<Mask>(x)));
        return BooleanFunction(n, std::move(t), kind);
    }

    int n() const { return n_; }
    Kind kind() const { return kind_; }
    std::size_t size() const { return table_.size(); }
    std::span<const double> table() const { return table_; }
    double operator[](Mask x) const { return table_[x]; }

    double mean() const {
        double s = 0.0;
        for (double v : table_) s += v;
        return s / static_cast<double>(table_.size());
    }

    bool operator==(const BooleanFunction& o) const {
        return n_ == o.n_ && table_ == o.table_;
    }

private:
    void validate_kind() const {
        for (double v : table_) {
            bool ok = true;
            switch (kind_) {
                case Kind::indicator: ok = (v == 0.0 || v == 1.0); break;
                case Kind::signed_unit: ok = (v == -1.0 || v == 0.0 || v == 1.0); break;
                case Kind::real: ok = std::isfinite(v); break;
            }
            if (!ok) {
                throw ContractError(std::string("BooleanFunction: value ") + std::to_string(v) +
                                    " not allowed for kind " + kind_name(kind_));
            }
        }
    }

    int n_;
    Kind kind_;
    std::vector<double> table_;
};

class Spectrum {
public:
    Spectrum(int n, std::vector<double> coeffs) : n_(n), coeffs_(std::move(coeffs)) {
        require(n >= 1, "Spectrum: n must be at least 1");
        require(coeffs_.size() == (std::size_t{1} << n), "Spectrum: coefficient count must be 2^n");
    }

    int n() const { return n_; }
    std::size_t size() const { return coeffs_.size(); }
    std::span<const double> coeffs() const { return coeffs_; }
    double operator[](Mask s) const { return coeffs_[s]; }
    double empty_coeff() const { return coeffs_[0]; }

    // Σ_S f̂(S)²
    double energy() const {
        double s = 0.0;
        for (double c : coeffs_) s += c * c;
        return s;
    }

    // W_k = Σ_{|S|=k} f̂(S)², k = 0..n
    std::vector<double> level_weights() const {
        std::vector<double> w(static_cast<std::size_t>(n_) + 1, 0.0);
        for (std::size_t s = 0; s < coeffs_.size(); ++s) w[popcount(s)] += coeffs_[s] * coeffs_[s];
        return w;
    }

    // Multiplies the coefficient at S by factor(|S|).
    template <class F>
    Spectrum scaled_by_level(F&& factor) const {
        std::vector<double> lv(static_cast<std::size_t>(n_) + 1);
        for (int k = 0; k <= n_; ++k) lv[k] = factor(k);
        std::vector<double> out(coeffs_);
        for (std::size_t s = 0; s < out.size(); ++s) out[s] *= lv[popcount(s)];
        return Spectrum(n_, std::move(out));
    }

private:
    int n_;
    std::vector<double> coeffs_;
};

// Unnormalized in-place Walsh–Hadamard butterfly. Length must be a power of
// two; applying it twice multiplies by the length.
inline void fwht(std::span<double> v) {
    const std::size_t len = v.size();
    require(len != 0 && (len & (len - 1)) == 0, "fwht: length must be a power of two");
    for (std::size_t h = 1; h < len; h <<= 1) {
        for (std::size_t i = 0; i < len; i += h << 1) {
            double* a = v.data() + i;
            double* b = a + h;
            for (std::size_t j = 0; j < h; ++j) {
                double x = a[j];
                double y = b[j];
                a[j] = x + y;
                b[j] = x - y;
            }
        }
    }
}

inline Spectrum transform(const BooleanFunction& f) {
    std::vector<double> c(f.table().begin(), f.table().end());
    fwht(c);
    const double scale = std::ldexp(1.0, -f.n());
    for (double& v : c) v *= scale;
    return Spectrum(f.n(), std::move(c));
}

// Pointwise values Σ_S f̂(S) u_S(x).
inline std::vector<double> inverse_table(const Spectrum& sp) {
    std::vector<double> t(sp.coeffs().begin(), sp.coeffs().end());
    fwht(t);
    return t;
}

inline BooleanFunction inverse(const Spectrum& sp, Kind kind = Kind::real) {
    return BooleanFunction(sp.n(), inverse_table(sp), kind);
}

}  // namespace boolnoise
