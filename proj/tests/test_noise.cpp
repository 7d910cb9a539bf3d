#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace boolnoise;

namespace {

BooleanFunction dictator(int n) { return make_family(FamilySpec::dictator(n)); }
BooleanFunction parity(int n) { return make_family(FamilySpec::parity(n)); }
BooleanFunction maj3() { return make_family(FamilySpec::majority(3)); }

}  // namespace

TEST(SampleNoise, Extremes) {
    Philox rng(1, 0);
    for (int rep = 0; rep < 100; ++rep) {
        const Mask x = rng() & full_mask(12);
        EXPECT_EQ(sample_noise(x, 12, Bernoulli{0.0}, rng), x);
        EXPECT_EQ(sample_noise(x, 12, Bernoulli{1.0}, rng), x ^ full_mask(12));
        EXPECT_EQ(sample_noise(x, 12, FixedSize{12}, rng), x ^ full_mask(12));
        EXPECT_EQ(std::popcount(sample_noise(x, 12, FixedSize{5}, rng) ^ x), 5);
    }
    EXPECT_THROW(sample_noise(0, 4, FixedSize{5}, rng), ContractError);
    EXPECT_THROW(sample_noise(0, 4, Bernoulli{1.5}, rng), ContractError);
}

TEST(SampleNoise, DeterministicGivenSeed) {
    Philox a(77, 3), b(77, 3);
    for (int i = 0; i < 50; ++i) {
        EXPECT_EQ(sample_noise(0x5a5, 12, Bernoulli{0.3}, a), sample_noise(0x5a5, 12, Bernoulli{0.3}, b));
    }
}

TEST(SampleNoise, MonteCarloMatchesExactNoiseOperator) {
    Philox rng(2, 0);
    for (int rep = 0; rep < 4; ++rep) {
        const int n = 6 + rep;
        const double eps = 0.05 + 0.1 * rep;
        auto f = oracle::random_indicator(n, rng);
        const auto exact = noised_values(f, eps);
        const Mask x = rng() & full_mask(n);
        const std::uint64_t draws = 100000;
        std::uint64_t hits = 0;
        Philox noise(3, rep);
        for (std::uint64_t i = 0; i < draws; ++i) hits += f[sample_noise(x, n, Bernoulli{eps}, noise)] > 0.5;
        auto est = proportion(hits, draws, 3);
        EXPECT_TRUE(est.within(exact[x], 4.0)) << est.value << " vs " << exact[x];
    }
}

TEST(NoiseOperator, ExactValuesAndNaiveSum) {
    auto sp = transform(dictator(3));
    auto q0 = noise_operator(sp, 0.0);
    for (Mask s = 0; s < 8; ++s) EXPECT_EQ(q0[s], sp[s]);
    auto half = noise_operator(sp, 0.5);
    EXPECT_EQ(half[0], sp[0]);
    for (Mask s = 1; s < 8; ++s) EXPECT_EQ(half[s], 0.0);
    EXPECT_NEAR(noise_operator(sp, 0.1)[1], -0.5 * 0.8, 1e-16);
    EXPECT_THROW(noise_operator(sp, -0.1), ContractError);

    Philox rng(4, 0);
    for (int n = 1; n <= 8; ++n) {
        auto f = oracle::random_real(n, rng);
        const double eps = 0.37;
        auto fast = noised_values(f, eps);
        auto slow = oracle::naive_noise(f, eps);
        for (Mask x = 0; x < f.size(); ++x) EXPECT_NEAR(fast[x], slow[x], 1e-12);
    }
}

TEST(NoiseOperator, TEtaIsQOfHalfOneMinusEta) {
    auto sp = transform(maj3());
    auto a = t_eta(sp, 0.6);
    auto b = noise_operator(sp, 0.2);
    for (Mask s = 0; s < 8; ++s) EXPECT_NEAR(a[s], b[s], 1e-16);
}

TEST(VarNoise, ClosedForms) {
    for (double eps : {0.0, 0.1, 0.25, 0.4}) {
        EXPECT_NEAR(var_noise(transform(dictator(4)), eps), 0.25 * (1 - 2 * eps) * (1 - 2 * eps), 1e-15);
        for (int n = 1; n <= 6; ++n) {
            EXPECT_NEAR(var_noise(transform(parity(n)), eps), 0.25 * std::pow(1 - 2 * eps, 2 * n), 1e-15);
        }
    }
    EXPECT_EQ(var_noise(transform(maj3()), 0.0), 0.25);
}

TEST(VarNoise, ParityMatchesBruteForceOverNoisePairs) {
    for (int n = 1; n <= 6; ++n) {
        auto f = parity(n);
        const double eps = 0.15;
        auto q = oracle::naive_noise(f, eps);
        double second = 0.0;
        for (double v : q) second += v * v;
        const double brute = second / static_cast<double>(f.size()) - 0.25;
        EXPECT_NEAR(var_noise(transform(f), eps), brute, 1e-12);
    }
}

TEST(VarNoise, MatchesTVarIdentityAndDecreasesInEps) {
    Philox rng(5, 0);
    for (int n = 2; n <= 10; ++n) {
        auto f = oracle::random_indicator(n, rng);
        auto sp = transform(f);
        double prev = var_noise(sp, 0.0);
        for (double eps = 0.05; eps <= 0.5 + 1e-12; eps += 0.05) {
            const double v = var_noise(sp, eps);
            EXPECT_LE(v, prev + 1e-15);
            EXPECT_NEAR(v, t_eta(sp, 1 - 2 * eps).energy() - sp[0] * sp[0], 1e-12);
            prev = v;
        }
    }
}

TEST(Gamma, DictatorStep) {
    auto f = dictator(3);
    for (double eps : {0.1, 0.3}) {
        const double dev = 0.5 - eps;
        EXPECT_EQ(gamma(f, eps, dev * 0.99), 1.0);
        EXPECT_EQ(gamma(f, eps, dev), 0.0);
        EXPECT_EQ(gamma(f, eps, 1.0), 0.0);
    }
    EXPECT_EQ(gamma(f, 0.5, 1e-9), 0.0);
    EXPECT_THROW(gamma(f, 0.1, 0.0), ContractError);
    EXPECT_THROW(gamma(BooleanFunction(1, {0.0, 0.5}), 0.1, 0.1), ContractError);
}

TEST(Gamma, MatchesNaiveDeviationCount) {
    Philox rng(6, 0);
    for (int n = 2; n <= 8; ++n) {
        auto f = oracle::random_indicator(n, rng);
        auto q = oracle::naive_noise(f, 0.2);
        const double mean = f.mean();
        for (double delta : {0.01, 0.05, 0.1, 0.2}) {
            std::size_t hits = 0;
            for (double v : q) hits += std::abs(v - mean) > delta + 1e-12;
            EXPECT_NEAR(gamma(f, 0.2, delta), static_cast<double>(hits) / f.size(), 1e-12);
        }
    }
}

TEST(Gauge, DictatorClosedFormIsExact) {
    for (double eps : {0.05, 0.1, 0.2, 0.3, 0.45}) {
        EXPECT_EQ(gauge_phi(dictator(4), eps).phi, 0.5 - eps);
    }
}

TEST(Gauge, DegenerateCases) {
    auto c = BooleanFunction::tabulate(4, [](Mask) { return 1.0; }, Kind::indicator);
    EXPECT_EQ(gauge_phi(c, 0.1).phi, 0.0);
    EXPECT_EQ(gauge_phi(maj3(), 0.5).phi, 0.0);
}

TEST(Gauge, MatchesGridScanOfGamma) {
    // the infimum located on a fine δ grid, straight from the definition
    Philox rng(7, 0);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 2 + rep % 6;
        const double eps = 0.05 + 0.05 * (rep % 5);
        auto f = oracle::random_indicator(n, rng);
        const double phi = gauge_phi(f, eps).phi;
        const double step = 1e-4;
        double scan = 1.0;
        for (double delta = step; delta <= 1.0; delta += step) {
            if (gamma(f, eps, delta) < delta) {
                scan = delta;
                break;
            }
        }
        EXPECT_LE(phi, scan + 1e-12);
        EXPECT_GE(phi, scan - step - 1e-12);
    }
}

TEST(Gauge, SandwichOnRandomIndicators) {
    Philox rng(8, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 1 + rep % 12;
        auto f = oracle::random_indicator(n, rng);
        for (double eps : {0.05, 0.1, 0.2, 0.3}) {
            auto g = gauge_phi(f, eps);
            if (g.var_noise <= 0.0) continue;
            EXPECT_LE(0.5 * g.var_noise, g.phi + 1e-12);
            EXPECT_LE(g.phi, std::cbrt(g.var_noise) + 1e-12);
        }
    }
}

TEST(Gauge, DistributionIsSortedAndSumsToOne) {
    auto g = gauge_phi(make_family(FamilySpec::tribes(2, 3)), 0.1);
    double mass = 0.0;
    for (std::size_t i = 0; i < g.deviation_distribution.size(); ++i) {
        mass += g.deviation_distribution[i].second;
        if (i) {
            EXPECT_LT(g.deviation_distribution[i - 1].first, g.deviation_distribution[i].first);
        }
    }
    EXPECT_NEAR(mass, 1.0, 1e-15);
}

TEST(ZGeneral, ExtremeVariances) {
    Philox rng(9, 0);
    auto f = oracle::random_indicator(6, rng);
    auto sp = transform(f);
    EXPECT_NEAR(z_general(sp, VarianceVector(std::vector<double>(6, 0.25))), sp.energy(), 1e-15);
    EXPECT_EQ(z_general(sp, VarianceVector(std::vector<double>(6, 0.0))), sp[0] * sp[0]);
    EXPECT_THROW(VarianceVector(std::vector<double>{0.3}), ContractError);
    EXPECT_THROW(z_general(sp, VarianceVector(std::vector<double>(5, 0.1))), ContractError);
}

TEST(ZGeneral, BernoulliPresetReproducesVarNoise) {
    Philox rng(10, 0);
    for (int n = 1; n <= 10; ++n) {
        auto sp = transform(oracle::random_indicator(n, rng));
        for (double eps : {0.0, 0.05, 0.2, 0.5}) {
            EXPECT_NEAR(z_general(sp, VarianceVector::bernoulli(n, eps)) - sp[0] * sp[0], var_noise(sp, eps), 1e-12);
        }
    }
}

TEST(ZGeneral, PresetVariances) {
    const double eps = 0.2;
    // q ∈ {1, ε/(1/2+ε)}: E q² − 1/4 computed by hand
    const double q1 = eps / (0.5 + eps);
    const double asym = (0.5 - eps) + (0.5 + eps) * q1 * q1 - 0.25;
    EXPECT_NEAR(VarianceVector::asymmetric(3, eps).zetas()[0], asym, 1e-15);
    EXPECT_NEAR(VarianceVector::three_point(3, eps).zetas()[2], (1 - eps) / 4, 1e-15);
    EXPECT_NEAR(VarianceVector::bernoulli(3, eps).zetas()[1], 0.09, 1e-15);
}

TEST(Bonami, EqualityCasesAndRandomFunctions) {
    Philox rng(11, 0);
    auto f = oracle::random_real(5, rng);
    auto one = bonami_margin(f, 1.0);
    EXPECT_NEAR(one.lhs, one.rhs, 1e-12);
    auto zero = bonami_margin(f, 0.0);
    EXPECT_NEAR(zero.lhs, std::abs(f.mean()), 1e-15);
    for (int rep = 0; rep < 300; ++rep) {
        auto g = BooleanFunction::tabulate(8, [&](Mask) { return (rng() & 1u) ? 1.0 : -1.0; }, Kind::signed_unit);
        auto m = bonami_margin(g, 0.6);
        EXPECT_LE(m.lhs, m.rhs + 1e-12);
    }
}

TEST(FixedNoise, CoefficientIdentities) {
    for (int n = 1; n <= 70; ++n) {
        for (int q = 0; q <= n; ++q) {
            EXPECT_EQ(fixed_noise_coeff(n, q, 0), 1.0);
            EXPECT_EQ(fixed_noise_coeff(n, q, n), (q % 2) ? -1.0 : 1.0);
        }
        for (int k = 0; k <= n; ++k) EXPECT_NEAR(fixed_noise_coeff(n, 1, k), (n - 2.0 * k) / n, 1e-15);
    }
    EXPECT_THROW(fixed_noise_coeff(4, 5, 1), ContractError);
}

TEST(FixedNoise, LargeNStaysBounded) {
    for (int n : {100, 400}) {
        for (int q : {1, n / 3, n / 2}) {
            for (int k : {0, 1, 2, n / 2, n}) {
                const double c = fixed_noise_coeff(n, q, k);
                EXPECT_LE(std::abs(c), 1.0);
            }
            EXPECT_NEAR(fixed_noise_coeff(n, q, 0), 1.0, 1e-9);
            EXPECT_NEAR(fixed_noise_coeff(n, 1, 1), (n - 2.0) / n, 1e-12);
        }
    }
}

TEST(FixedNoise, VarFixedMatchesEnumeration) {
    Philox rng(12, 0);
    for (int n = 1; n <= 10; ++n) {
        auto f = oracle::random_indicator(n, rng);
        auto sp = transform(f);
        for (int q = 0; q <= n; ++q) EXPECT_NEAR(var_fixed(sp, q), oracle::naive_var_fixed(f, q), 1e-9);
    }
}

TEST(FixedNoise, ParityIsPerfectlyPredictable) {
    for (int n = 1; n <= 8; ++n) {
        auto sp = transform(parity(n));
        for (int q = 0; q <= n; ++q) EXPECT_NEAR(var_fixed(sp, q), 0.25, 1e-15);
    }
}

TEST(FixedNoise, NoNoiseAndMajorityOfThree) {
    auto f = maj3();
    auto sp = transform(f);
    EXPECT_NEAR(var_fixed(sp, 0), 0.25, 1e-15);
    // q = 1: levels 1 and 3 carry 3/16 and 1/16, with c = 1/3 and −1
    EXPECT_NEAR(var_fixed(sp, 1), 3.0 / 16 / 9 + 1.0 / 16, 1e-15);
    EXPECT_NEAR(var_fixed(sp, 1), oracle::naive_var_fixed(f, 1), 1e-15);
    auto op = fixed_noise_operator(sp, 1);
    EXPECT_NEAR(op[1], -0.25 / 3, 1e-16);
}
