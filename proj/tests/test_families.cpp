#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace boolnoise;

TEST(Families, DictatorParityMajority) {
    auto d = make_family(FamilySpec::dictator(3));
    auto p = make_family(FamilySpec::parity(3));
    auto m = make_family(FamilySpec::majority(4));
    for (Mask x = 0; x < 8; ++x) {
        EXPECT_EQ(d[x], static_cast<double>(x & 1u));
        EXPECT_EQ(p[x], static_cast<double>(std::popcount(x) & 1));
    }
    for (Mask x = 0; x < 16; ++x) EXPECT_EQ(m[x], std::popcount(x) >= 3 ? 1.0 : 0.0);
    EXPECT_EQ(d.kind(), Kind::indicator);
}

TEST(Families, ParitySpectrumHasTwoNonzeroCoefficients) {
    for (int n = 1; n <= 10; ++n) {
        auto sp = transform(make_family(FamilySpec::parity(n)));
        for (Mask s = 0; s < sp.size(); ++s) {
            if (s == 0) EXPECT_EQ(sp[s], 0.5);
            else if (s == full_mask(n)) EXPECT_EQ(std::abs(sp[s]), 0.5);
            else EXPECT_EQ(sp[s], 0.0);
        }
    }
}

TEST(Tribes, TwoOfTwo) {
    auto f = make_family(FamilySpec::tribes(2, 2));
    for (Mask x = 0; x < 16; ++x) {
        const bool want = (x & 0b0011) == 0b0011 || (x & 0b1100) == 0b1100;
        EXPECT_EQ(f[x], want ? 1.0 : 0.0);
    }
    EXPECT_EQ(f[0b0011], 1.0);
    for (int k = 0; k < 4; ++k) EXPECT_EQ(influence(f, k), 0.375);
}

TEST(Tribes, InvalidSpecs) {
    EXPECT_THROW(make_family(FamilySpec::tribes(3, 3, 8)), ContractError);
    EXPECT_THROW(make_family(FamilySpec::tribes(0, 3)), ContractError);
    EXPECT_THROW(tribes_params(3), ContractError);
}

TEST(Tribes, ParamsBeatNeighbouringSizes) {
    for (int n = 4; n <= 4096; n += (n < 64 ? 1 : 37)) {
        auto tp = tribes_params(n);
        ASSERT_GE(tp.s, 1);
        EXPECT_EQ(tp.t, n / tp.s);
        auto miss = [n](int s) {
            return std::abs(1.0 - std::pow(1.0 - std::ldexp(1.0, -s), static_cast<double>(n) / s) - 0.5);
        };
        EXPECT_LE(miss(tp.s), miss(tp.s + 1)) << "n=" << n;
        if (tp.s > 1) {
            EXPECT_LE(miss(tp.s), miss(tp.s - 1)) << "n=" << n;
        }
    }
    auto p8 = tribes_params(8);
    EXPECT_EQ(p8.s, 2);
    EXPECT_EQ(p8.t, 4);
    auto p20 = tribes_params(20);
    EXPECT_EQ(p20.s, 3);
    EXPECT_EQ(p20.t, 6);
}

TEST(Tribes, ClosedFormsMatchTables) {
    for (int n = 4; n <= 20; ++n) {
        auto tp = tribes_params(n);
        auto f = make_family(FamilySpec::tribes(tp.t, tp.s, n));
        EXPECT_NEAR(f.mean(), tribes_probability(tp.t, tp.s), 1e-15) << "n=" << n;
        auto p = influence_profile(f);
        for (int k = 0; k < n; ++k) {
            const double want = k < tp.t * tp.s ? tribes_influence(tp.t, tp.s) : 0.0;
            EXPECT_NEAR(p.per_var[k], want, 1e-15) << "n=" << n << " k=" << k;
        }
    }
}

TEST(Tribes, SquaredInfluenceShrinks) {
    double prev = 2.0;
    for (int n : {8, 16, 24}) {
        auto tp = tribes_params(n);
        const double ii = tp.t * tp.s * std::pow(tribes_influence(tp.t, tp.s), 2);
        if (n <= 20) {
            auto f = make_family(FamilySpec::tribes(tp.t, tp.s, n));
            EXPECT_NEAR(influence_profile(f).total_II, ii, 1e-14);
        }
        EXPECT_LT(ii, prev);
        prev = ii;
    }
}

TEST(RecursiveMajority, DepthOneIsMajorityOfThree) {
    EXPECT_EQ(make_family(FamilySpec::recursive_majority3(1)), make_family(FamilySpec::majority(3)));
    EXPECT_THROW(make_family(FamilySpec::recursive_majority3(0)), ContractError);
}

TEST(RecursiveMajority, DepthTwoTreeAndInfluences) {
    auto f = make_family(FamilySpec::recursive_majority3(2));
    ASSERT_EQ(f.n(), 9);
    auto maj = [](int a, int b, int c) { return a + b + c >= 2; };
    for (Mask x = 0; x < f.size(); ++x) {
        int leaf[9];
        for (int j = 0; j < 9; ++j) leaf[j] = (x >> j) & 1u;
        const bool root = maj(maj(leaf[0], leaf[1], leaf[2]), maj(leaf[3], leaf[4], leaf[5]), maj(leaf[6], leaf[7], leaf[8]));
        ASSERT_EQ(f[x], root ? 1.0 : 0.0);
    }
    auto p = influence_profile(f);
    for (double v : p.per_var) EXPECT_EQ(v, recursive_majority_influence(2));
}

TEST(RecursiveMajority, ScaledInfluenceStaysBounded) {
    const double expo = std::log(2.0) / std::log(3.0);
    for (int depth = 1; depth <= 6; ++depth) {
        const double n = std::pow(3.0, depth);
        const double scaled = recursive_majority_influence(depth) * std::pow(n, expo);
        EXPECT_GE(scaled, 0.5);
        EXPECT_LE(scaled, 2.0);
    }
}

TEST(RecursiveMajority, AlphaFromTableMatchesExponent) {
    const double want = 1.0 - std::log(2.0) / std::log(3.0);
    for (int depth : {1, 2}) {
        auto p = influence_profile(make_family(FamilySpec::recursive_majority3(depth)));
        ASSERT_TRUE(p.alpha.has_value());
        EXPECT_NEAR(*p.alpha, want, 1e-12);
    }
}

TEST(RecursiveMajority, NoiseFlipSlopeIsThreeHalves) {
    auto f = make_family(FamilySpec::recursive_majority3(1));
    auto sp = transform(f);
    for (double p : {1e-3, 1e-4}) {
        // P[flip] = 2(P[f] − E f T_ρ f), ρ = 1 − 2p
        double corr = 0.0;
        for (Mask s = 0; s < sp.size(); ++s) corr += std::pow(1.0 - 2.0 * p, std::popcount(s)) * sp[s] * sp[s];
        const double flip = 2.0 * (f.mean() - corr);
        EXPECT_NEAR(flip, oracle::naive_deficit(f, p), 1e-12);
        EXPECT_NEAR(flip / p, 1.5, 1.5 * 0.02);
    }
}

TEST(Runs, CountsAndMedian) {
    EXPECT_EQ(runs_count(0b000, 3), 1);
    EXPECT_EQ(runs_count(0b010, 3), 3);
    EXPECT_EQ(runs_count(0b1, 1), 1);
    for (int n = 1; n <= 40; ++n) {
        const int t = runs_median_threshold(n);
        // P[R > t] ≤ 1/2 < P[R ≥ t], with the binomial tail summed directly
        EXPECT_LE(runs_upper_tail(n, t), 0.5 + 1e-12) << "n=" << n;
        EXPECT_GT(runs_upper_tail(n, t - 1), 0.5) << "n=" << n;
    }
}

TEST(Runs, TableMatchesDistribution) {
    for (int n = 2; n <= 12; ++n) {
        auto f = make_family(FamilySpec::runs(n));
        EXPECT_NEAR(f.mean(), runs_upper_tail(n, runs_median_threshold(n)), 1e-12);
        auto g = make_family(FamilySpec::runs(n, 1));
        EXPECT_NEAR(g.mean(), 1.0 - std::ldexp(1.0, 1 - n), 1e-12);
    }
}

TEST(Runs, IsMajorityOfTheDifferences) {
    for (int n = 2; n <= 12; ++n) {
        auto f = make_family(FamilySpec::runs(n));
        for (Mask x = 0; x < f.size(); ++x) {
            const Mask y = (x ^ (x >> 1)) & full_mask(n - 1);
            ASSERT_EQ(f[x], majority_sign(y, full_mask(n - 1)) > 0 ? 1.0 : 0.0);
        }
    }
}

TEST(Runs, DeficitIsMajorityUnderCorrelatedDifferenceNoise) {
    // flipping x_i and x_{i+1} together leaves y_i unchanged, so the noise on y
    // is not independent; the deficit sits between majority on n − 1 bits at
    // rate ε and at the marginal rate 2ε(1 − ε)
    for (int n : {5, 8, 11}) {
        auto f = make_family(FamilySpec::runs(n));
        auto maj = WeightedMajority::uniform_weights(n - 1);
        for (double eps : {0.01, 0.05, 0.1}) {
            const double runs = oracle::naive_deficit(f, eps);
            EXPECT_GT(runs, stability_deficit(maj, eps, 1, 1).value);
            EXPECT_LT(runs, stability_deficit(maj, 2 * eps * (1 - eps), 1, 1).value);
        }
    }
}

TEST(Weighted, FamilyMatchesEvent) {
    WeightedMajority wm{{0.5, 1.0, 2.0}, 0.25};
    EXPECT_EQ(make_family(FamilySpec::weighted_majority(wm)), weighted_event(wm, 3));
}

TEST(Families, NamesRoundTrip) {
    for (auto k : {FamilyKind::dictator, FamilyKind::parity, FamilyKind::majority, FamilyKind::tribes,
                   FamilyKind::recursive_majority3, FamilyKind::runs, FamilyKind::weighted_majority}) {
        EXPECT_EQ(parse_family(family_name(k)), k);
    }
    EXPECT_THROW(parse_family("nope"), ContractError);
}
