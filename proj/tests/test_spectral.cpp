#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"

using namespace boolnoise;

namespace {

BooleanFunction maj3() { return make_family(FamilySpec::majority(3)); }

}  // namespace

TEST(Transform, ConstantFunction) {
    auto f = BooleanFunction::tabulate(4, [](Mask) { return 1.0; });
    auto sp = transform(f);
    EXPECT_EQ(sp[0], 1.0);
    for (Mask s = 1; s < sp.size(); ++s) EXPECT_EQ(sp[s], 0.0);
}

TEST(Transform, DictatorOneVariable) {
    auto sp = transform(make_family(FamilySpec::dictator(1)));
    EXPECT_EQ(sp[0], 0.5);
    EXPECT_EQ(sp[1], -0.5);
}

TEST(Transform, MajorityOfThree) {
    auto f = maj3();
    auto sp = transform(f);
    auto naive = oracle::naive_transform(f);
    for (Mask s = 0; s < 8; ++s) EXPECT_NEAR(sp[s], naive[s], 1e-15);
    EXPECT_EQ(sp[0], 0.5);
    for (Mask s : {1u, 2u, 4u}) EXPECT_EQ(sp[s], -0.25);
    for (Mask s : {3u, 5u, 6u}) EXPECT_EQ(sp[s], 0.0);
    EXPECT_EQ(sp[7], 0.25);
}

TEST(Transform, MatchesNaiveSumOnRandomFunctions) {
    Philox rng(1, 0);
    for (int n = 1; n <= 10; ++n) {
        for (int rep = 0; rep < 3; ++rep) {
            auto f = oracle::random_real(n, rng);
            auto sp = transform(f);
            auto naive = oracle::naive_transform(f);
            for (Mask s = 0; s < sp.size(); ++s) ASSERT_NEAR(sp[s], naive[s], 1e-12);
        }
    }
}

TEST(Transform, RoundTripIsBitExactOnDyadicTables) {
    Philox rng(2, 0);
    for (int n : {1, 5, 12, 20}) {
        auto f = oracle::random_dyadic(n, rng);
        auto back = inverse(transform(f));
        ASSERT_TRUE(std::equal(f.table().begin(), f.table().end(), back.table().begin())) << "n=" << n;
    }
}

TEST(Transform, RoundTripCloseOnRealTables) {
    Philox rng(3, 0);
    auto f = oracle::random_real(16, rng);
    auto back = inverse_table(transform(f));
    for (Mask x = 0; x < f.size(); ++x) ASSERT_NEAR(back[x], f[x], 1e-12);
}

TEST(Transform, ParsevalAndMean) {
    Philox rng(4, 0);
    for (int n = 1; n <= 12; ++n) {
        auto f = oracle::random_real(n, rng);
        auto sp = transform(f);
        double second = 0.0;
        for (double v : f.table()) second += v * v;
        second /= static_cast<double>(f.size());
        EXPECT_NEAR(sp.energy(), second, 1e-10 * second);
        EXPECT_NEAR(sp.empty_coeff(), f.mean(), 1e-14);
    }
}

TEST(BooleanFunction, RejectsWrongLengthAndKind) {
    EXPECT_THROW(BooleanFunction(3, std::vector<double>(7)), ContractError);
    EXPECT_THROW(BooleanFunction(1, {0.0, 0.5}, Kind::indicator), ContractError);
    EXPECT_THROW(BooleanFunction(1, {-1.0, 2.0}, Kind::signed_unit), ContractError);
    EXPECT_NO_THROW(BooleanFunction(1, {-1.0, 1.0}, Kind::signed_unit));
}

TEST(BooleanFunction, TableCapRaisesResourceError) {
    set_max_n(10);
    EXPECT_THROW(BooleanFunction::tabulate(11, [](Mask) { return 0.0; }), ResourceError);
    set_max_n(BOOLNOISE_MAX_N);
    EXPECT_NO_THROW(BooleanFunction::tabulate(11, [](Mask) { return 0.0; }));
}

TEST(Influence, Dictator) {
    auto p = influence_profile(make_family(FamilySpec::dictator(4)));
    EXPECT_EQ(p.per_var[0], 1.0);
    for (int k = 1; k < 4; ++k) EXPECT_EQ(p.per_var[k], 0.0);
    EXPECT_EQ(p.total_II, 1.0);
}

TEST(Influence, MajorityOfThree) {
    auto p = influence_profile(maj3());
    for (double v : p.per_var) EXPECT_EQ(v, 0.5);
    EXPECT_EQ(p.total_I, 1.5);
    EXPECT_EQ(p.total_II, 0.75);
}

TEST(Influence, TwoTribesOfTwo) {
    auto f = make_family(FamilySpec::tribes(2, 2));
    auto p = influence_profile(f);
    for (int k = 0; k < 4; ++k) {
        EXPECT_EQ(p.per_var[k], 0.375);
        EXPECT_EQ(oracle::naive_influence(f, k), 0.375);
    }
}

TEST(Influence, AlphaBetaAbsentWhenDegenerate) {
    auto p1 = influence_profile(make_family(FamilySpec::dictator(1)));
    EXPECT_FALSE(p1.alpha.has_value());
    EXPECT_FALSE(p1.beta.has_value());
    auto c = influence_profile(BooleanFunction::tabulate(3, [](Mask) { return 1.0; }, Kind::indicator));
    EXPECT_FALSE(c.alpha.has_value());
    EXPECT_FALSE(c.beta.has_value());
    auto m = influence_profile(maj3());
    ASSERT_TRUE(m.alpha && m.beta);
    EXPECT_NEAR(*m.alpha, std::log(1.5) / std::log(3.0), 1e-15);
}

TEST(Influence, SpectralIdentitiesOnIndicators) {
    Philox rng(5, 0);
    for (int n = 1; n <= 10; ++n) {
        for (int rep = 0; rep < 10; ++rep) {
            auto f = oracle::random_indicator(n, rng);
            auto sp = transform(f);
            auto p = influence_profile(f, sp);
            auto spec = spectral_influences(sp);
            double sum = 0.0, weighted = 0.0;
            for (int k = 0; k < n; ++k) {
                EXPECT_NEAR(p.per_var[k], oracle::naive_influence(f, k), 1e-12);
                EXPECT_NEAR(p.per_var[k], spec[k], 1e-9);
                EXPECT_GE(p.per_var[k], 0.0);
                sum += p.per_var[k];
            }
            for (Mask s = 0; s < sp.size(); ++s) weighted += sp[s] * sp[s] * std::popcount(s);
            EXPECT_NEAR(p.total_I, sum, 1e-10);
            EXPECT_NEAR(p.total_I, 4.0 * weighted, 1e-9);
        }
    }
}

TEST(Influence, SquaredInfluenceFourierFormula) {
    Philox rng(6, 0);
    for (int n = 1; n <= 8; ++n) {
        auto f = oracle::random_indicator(n, rng);
        auto sp = transform(f);
        double rhs = 0.0;
        for (Mask s = 0; s < sp.size(); ++s) {
            for (Mask t = 0; t < sp.size(); ++t) rhs += sp[s] * sp[s] * sp[t] * sp[t] * std::popcount(s & t);
        }
        EXPECT_NEAR(influence_profile(f, sp).total_II, 16.0 * rhs, 1e-8);
    }
}

TEST(Influence, MonotoneIdentities) {
    Philox rng(7, 0);
    for (int n = 1; n <= 10; ++n) {
        for (int rep = 0; rep < 5; ++rep) {
            auto f = monotonize(oracle::random_indicator(n, rng));
            auto sp = transform(f);
            auto p = influence_profile(f, sp);
            for (int k = 0; k < n; ++k) EXPECT_NEAR(p.per_var[k], 2.0 * std::abs(sp[Mask{1} << k]), 1e-9);
            EXPECT_LE(p.total_II, 1.0 + 1e-12);
        }
    }
}

TEST(Shift, AlreadyMonotoneIsUnchanged) {
    auto f = maj3();
    for (int j = 0; j < 3; ++j) EXPECT_EQ(shift(f, j), f);
}

TEST(Shift, AntiDictatorBecomesDictator) {
    BooleanFunction anti(1, {1.0, 0.0}, Kind::indicator);
    EXPECT_EQ(shift(anti, 0), make_family(FamilySpec::dictator(1)));
}

TEST(Shift, ParityShiftedInFirstVariable) {
    auto g = shift(make_family(FamilySpec::parity(2)), 0);
    EXPECT_EQ(std::vector<double>(g.table().begin(), g.table().end()), (std::vector<double>{0, 1, 0, 1}));
    EXPECT_EQ(g.kind(), Kind::indicator);
}

TEST(Shift, RejectsBadIndex) {
    EXPECT_THROW(shift(maj3(), 3), ContractError);
    EXPECT_THROW(shift(maj3(), -1), ContractError);
}

TEST(Monotonize, ParityOfTwoBecomesDictatorOnSecondVariable) {
    // κ₂ acts first and already sorts the table; κ₁ then has nothing to do
    auto g = monotonize(make_family(FamilySpec::parity(2)));
    EXPECT_EQ(std::vector<double>(g.table().begin(), g.table().end()), (std::vector<double>{0, 0, 1, 1}));
}

TEST(Monotonize, RandomIndicatorsBecomeMonotoneWithSameMean) {
    Philox rng(8, 0);
    for (int n = 1; n <= 10; ++n) {
        auto f = oracle::random_indicator(n, rng);
        auto g = monotonize(f);
        EXPECT_TRUE(is_monotone(g));
        EXPECT_EQ(g.mean(), f.mean());
        EXPECT_EQ(monotonize(g), g);
    }
}

TEST(Monotone, Examples) {
    EXPECT_TRUE(is_monotone(maj3()));
    for (int n = 2; n <= 6; ++n) EXPECT_FALSE(is_monotone(make_family(FamilySpec::parity(n))));
}

TEST(Shift, InfluencesDoNotIncreaseAndVarianceDoesNotDecrease) {
    Philox rng(9, 0);
    for (int rep = 0; rep < 60; ++rep) {
        const int n = 2 + rep % 9;
        auto f = oracle::random_indicator(n, rng);
        auto pf = influence_profile(f);
        auto sf = transform(f);
        for (int j = 0; j < n; ++j) {
            auto g = shift(f, j);
            auto pg = influence_profile(g);
            auto sg = transform(g);
            for (int i = 0; i < n; ++i) EXPECT_LE(pg.per_var[i], pf.per_var[i] + 1e-12);
            for (double eps : {0.05, 0.1, 0.25}) EXPECT_GE(var_noise(sg, eps), var_noise(sf, eps) - 1e-12);
        }
    }
}

TEST(TableIo, RoundTripsBitExactly) {
    Philox rng(10, 0);
    auto f = oracle::random_real(6, rng);
    std::stringstream ss;
    write_table(ss, f);
    auto g = read_table(ss);
    EXPECT_EQ(g, f);
    EXPECT_EQ(g.kind(), Kind::real);

    auto sp = transform(maj3());
    std::stringstream ss2;
    write_spectrum(ss2, sp);
    auto file = read_table_file(ss2);
    ASSERT_TRUE(std::holds_alternative<Spectrum>(file));
    const auto& back = std::get<Spectrum>(file);
    for (Mask s = 0; s < 8; ++s) EXPECT_EQ(back[s], sp[s]);
}

TEST(TableIo, RejectsMalformedInput) {
    std::stringstream short_body("n=2 kind=indicator\n0\n1\n1\n");
    EXPECT_THROW(read_table(short_body), ContractError);
    std::stringstream bad_kind("n=1 kind=indicator\n0\n0.5\n");
    EXPECT_THROW(read_table(bad_kind), ContractError);
    std::stringstream no_header("0\n1\n");
    EXPECT_THROW(read_table(no_header), ContractError);
}
