#include "oracles.hpp"

#include "sdrcpm/errors.hpp"
#include "sdrcpm/region_eval.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sdrcpm;
using region::MIValues;
using region::RatePoint;

namespace {

gauss::PowerConfig fig1_power() { return {10.0, 31.6227766016838, 1.0, 10.0, 10.0}; }

gauss::SchemeParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    gauss::SchemeParams p;
    do {
        p.rho = 1.6 * u(rng) - 0.8;
        p.rho_u1s = 1.6 * u(rng) - 0.8;
    } while (p.rho * p.rho + p.rho_u1s * p.rho_u1s > 0.9);
    p.gamma = 0.05 + 0.9 * u(rng);
    p.alpha1 = 1.2 * u(rng);
    p.alpha2 = 1.2 * u(rng);
    p.theta = 0.05 + 0.9 * u(rng);
    p.beta = 0.05 + 0.95 * u(rng);
    p.f = 2.0 * u(rng) - 1.0;
    return p;
}

oracle::SchemeCovariance oracle_for(const gauss::PowerConfig& w, const gauss::SchemeParams& p) {
    return oracle::SchemeCovariance(w.p1, w.p2, w.n2, w.n3, w.q, p.rho, p.gamma, p.alpha1, p.alpha2, p.rho_u1s,
                                    p.rho_u2s, p.theta, p.beta, p.f, p.nhat);
}

}  // namespace

TEST(MiValuesGaussian, NoCommonMessageWithoutRelayPrivatePower) {
    gauss::SchemeParams p;
    p.theta = 0.0;
    p.beta = 0.5;
    EXPECT_EQ(region::mi_values_gaussian(fig1_power(), p).i_k2_y3, 0.0);
}

TEST(MiValuesGaussian, NoStateCouplingNoStateCost) {
    gauss::SchemeParams p;
    p.gamma = 0.5;
    const auto mi = region::mi_values_gaussian({10.0, 10.0, 1.0, 1.0, 1e-9}, p);
    EXPECT_NEAR(mi.i_t1_s, 0.0, 1e-12);
    EXPECT_NEAR(mi.i_t2_s, 0.0, 1e-12);
}

TEST(MiValuesGaussian, PureNoiseCompressionCarriesNothing) {
    for (double nhat : {1e-3, 1.0, 1e3}) {
        gauss::SchemeParams p;
        p.theta = 0.4;
        p.gamma = 0.3;
        p.alpha1 = 0.5;
        p.nhat = nhat;
        EXPECT_NEAR(region::mi_values_gaussian(fig1_power(), p).i_yhat_src, 0.0, 1e-12);
    }
}

TEST(MiValuesGaussian, StateTermsOfTheRelayAreZero) {
    std::mt19937_64 rng(1);
    const auto mi = region::mi_values_gaussian(fig1_power(), random_params(rng));
    EXPECT_EQ(mi.i_k2_s2, 0.0);
    EXPECT_EQ(mi.i_q2_s2, 0.0);
}

TEST(MiValuesGaussian, MatchesOracleAndChainRuleSplit) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 40; ++trial) {
        auto p = random_params(rng);
        p.nhat = 0.5 + trial * 0.1;
        const auto w = fig1_power();
        const auto mi = region::mi_values_gaussian(w, p);
        const auto o = oracle_for(w, p);
        EXPECT_NEAR(mi.i_t1_out, o.mi({"T1"}, {"YHAT2", "Y3"}, {"V", "X2"}), 1e-9);
        EXPECT_NEAR(mi.i_t1_s, o.mi({"T1"}, {"S"}), 1e-9);
        EXPECT_NEAR(mi.i_t2_relay, o.mi({"T2"}, {"Y2"}, {"V", "X2"}), 1e-9);
        EXPECT_NEAR(mi.i_t2_s, o.mi({"T2"}, {"S"}), 1e-9);
        EXPECT_NEAR(mi.i_t1_t2_s, o.mi({"T1"}, {"T2"}, {"S"}), 1e-9);
        EXPECT_NEAR(mi.i_k2_y3, o.mi({"V"}, {"Y3"}), 1e-9);
        EXPECT_NEAR(mi.i_q2_y3, o.mi({"X2"}, {"Y3"}, {"V"}), 1e-9);
        EXPECT_NEAR(mi.i_yhat_src, o.mi({"YHAT2"}, {"Y2", "T2"}, {"V", "X2"}), 1e-9);
        EXPECT_NEAR(mi.i_yhat_y3, o.mi({"YHAT2"}, {"Y3"}, {"V", "X2"}), 1e-9);
        // Yhat2 depends on the rest only through (Y2, T2), so the split is exact.
        EXPECT_NEAR(mi.i_yhat_cond_y3, mi.i_yhat_src - mi.i_yhat_y3, 1e-9);
        EXPECT_LE(mi.i_yhat_cond_y3, mi.i_yhat_src + 1e-12);
    }
}

TEST(EvaluateGaussianRegion, CostaEndpointAtRelay) {
    gauss::SchemeParams p;
    p.gamma = 1.0;
    p.alpha2 = 10.0 / 11.0;
    const auto b = region::evaluate_gaussian_region({10.0, 31.6227766016838, 1.0, 10.0, 10.0}, p);
    EXPECT_NEAR(b.r12_max, oracle::awgn(10.0, 1.0), 1e-9);
    EXPECT_NEAR(b.r12_max, 1.7297, 1e-4);
    EXPECT_TRUE(b.feasible);
}

TEST(EvaluateGaussianRegion, DirectLinkDirtyPaperHalfBit) {
    gauss::SchemeParams p;
    p.alpha1 = 10.0 / 20.0;
    const auto b = region::evaluate_gaussian_region({10.0, 31.6227766016838, 1.0, 10.0, 10.0}, p);
    EXPECT_NEAR(b.r13_max, oracle::awgn(10.0, 10.0), 1e-9);
    EXPECT_NEAR(b.r13_max, 0.5, 1e-12);
    EXPECT_TRUE(b.feasible);
}

TEST(EvaluateGaussianRegion, NoBinCapacityAtFullPrivatePower) {
    gauss::SchemeParams p;
    p.theta = 1.0;
    p.beta = 0.5;
    p.alpha1 = 0.5;
    const auto b = region::evaluate_gaussian_region(fig1_power(), p);
    EXPECT_FALSE(b.feasible);
    EXPECT_THROW((void)region::solve_nhat(fig1_power(), p), ConstraintInfeasible);
}

TEST(EvaluateGaussianRegion, SumBoundDominatedBySingleBounds) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        auto p = random_params(rng);
        p.nhat = 2.0;
        const auto b = region::evaluate_gaussian_region(fig1_power(), p);
        EXPECT_LE(b.r13_plus_r12_max, b.r13_max + b.r12_max + 1e-9);
        EXPECT_GE(b.r13_max, 0.0);
        EXPECT_GE(b.r12_max, 0.0);
    }
}

TEST(EvaluateGaussianRegion, NoCompressionFallsBackToDirectLink) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 30; ++trial) {
        auto p = random_params(rng);
        p.beta = 0.0;
        p.f = 0.0;
        const auto w = fig1_power();
        const auto mi = region::mi_values_gaussian(w, p);
        const auto o = oracle_for(w, p);
        const double raw = o.mi({"T1"}, {"Y3"}, {"V", "X2"}) - o.mi({"T1"}, {"S"});
        EXPECT_NEAR(mi.i_t1_out - mi.i_t1_s, raw, 1e-9);
        const auto b = region::bounds_from_mi(mi);
        EXPECT_NEAR(b.r13_max, std::max(0.0, raw), 1e-9);
        EXPECT_EQ(b.clamped, raw < 0.0 || b.clamped);
    }
}

TEST(BoundsFromMi, ClampsNegativeRightHandSides) {
    MIValues mi;
    mi.i_t1_out = 0.2;
    mi.i_t1_s = 0.5;
    mi.i_t2_relay = 1.0;
    const auto b = region::bounds_from_mi(mi);
    EXPECT_EQ(b.r13_max, 0.0);
    EXPECT_TRUE(b.clamped);
    EXPECT_DOUBLE_EQ(b.r12_max, 1.0);
}

TEST(SolveNhat, NoCompressionReturnsSentinel) {
    gauss::SchemeParams p;
    p.theta = 0.5;
    EXPECT_EQ(region::solve_nhat(fig1_power(), p), 1.0);
}

TEST(SolveNhat, BracketAroundTheConstraint) {
    std::mt19937_64 rng(8);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto p = random_params(rng);
        const auto w = fig1_power();
        p.nhat = region::solve_nhat(w, p);
        EXPECT_TRUE(region::evaluate_gaussian_region(w, p).feasible);
        auto half = p;
        half.nhat *= 0.5;
        // At the floor every larger value is feasible; the bracket only binds above it.
        if (region::mi_values_gaussian(w, p).i_yhat_cond_y3 > 1e-6) {
            EXPECT_FALSE(region::evaluate_gaussian_region(w, half).feasible);
            ++checked;
        }
    }
    EXPECT_GT(checked, 30);
}

TEST(SolveNhat, MatchesClosedFormBoundary) {
    // With Yhat2 = W + Zhat the constraint reads
    // 1/2 log2(1 + Var(W | V, X2, Y3) / nhat) <= I(X2; Y3 | V).
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 40; ++trial) {
        auto p = random_params(rng);
        const auto w = fig1_power();
        auto o_params = p;
        o_params.nhat = 0.0;
        const auto o = oracle_for(w, o_params);
        const double residual = o.conditional_variance("YHAT2", {"V", "X2", "Y3"});
        const double rhs = o.mi({"X2"}, {"Y3"}, {"V"});
        const double expected = residual / (std::exp2(2.0 * rhs) - 1.0);
        const double got = region::solve_nhat(w, p);
        EXPECT_NEAR(got / expected, 1.0, 2e-6);
    }
}

TEST(SolveNhat, SlackNondecreasingInNhat) {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 10; ++trial) {
        auto p = random_params(rng);
        double prev = -1e300;
        for (double nhat = 1e-3; nhat < 1e4; nhat *= 1.7) {
            p.nhat = nhat;
            const auto mi = region::mi_values_gaussian(fig1_power(), p);
            const double slack = mi.i_q2_y3 - mi.i_yhat_cond_y3;
            EXPECT_GE(slack, prev - 1e-12);
            prev = slack;
        }
    }
}

TEST(AuxRateFeasible, StrictlyInsidePointIsAchievable) {
    MIValues mi;
    mi.i_t1_out = 2.0;
    mi.i_t1_s = 0.5;
    mi.i_t2_relay = 1.5;
    mi.i_t2_s = 0.3;
    mi.i_t1_t2_s = 0.1;
    mi.i_k2_y3 = 0.4;
    mi.i_q2_y3 = 1.0;
    mi.i_yhat_src = 1.2;
    mi.i_yhat_y3 = 0.6;
    mi.i_yhat_cond_y3 = 0.6;
    EXPECT_TRUE(region::aux_rate_feasible(mi, {0.5, 0.2, 0.8}));
    EXPECT_FALSE(region::aux_rate_feasible(mi, {0.5, 0.2, 1.6}));
    EXPECT_FALSE(region::aux_rate_feasible(mi, {0.5, 0.2, -0.1}));
}

TEST(AuxRateFeasible, AgreesWithDirectMembership) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double tol = region::kRateTolerance;
    int compared = 0;
    for (int inst = 0; inst < 1000; ++inst) {
        const auto mi = oracle::random_mi_values(rng);
        for (int k = 0; k < 5; ++k) {
            const RatePoint pt{2.0 * u(rng), 0.6 * u(rng), 2.0 * u(rng)};
            const int direct = oracle::direct_membership(mi, pt, 2 * tol);
            if (direct == 0) {
                continue;
            }
            ++compared;
            ASSERT_EQ(region::aux_rate_feasible(mi, pt, tol), direct == 1) << "instance " << inst;
            const auto b = region::bounds_from_mi(mi);
            if (!b.clamped) {
                ASSERT_EQ(region::region_contains(b, pt), direct == 1) << "instance " << inst;
            }
        }
    }
    EXPECT_GT(compared, 4000);
}

TEST(AuxRateFeasible, BoundaryPointsOfTheClosureAreAccepted) {
    MIValues mi;
    mi.i_t1_out = 1.0;
    mi.i_q2_y3 = 0.5;
    mi.i_yhat_src = 0.5;
    mi.i_yhat_cond_y3 = 0.5;
    EXPECT_TRUE(region::aux_rate_feasible(mi, {0.0, 0.0, 1.0}));
}

TEST(RegionContains, OriginInsideAnyFeasibleRegion) {
    region::RateBounds b;
    b.feasible = true;
    EXPECT_TRUE(region::region_contains(b, {0, 0, 0}));
    b.feasible = false;
    EXPECT_FALSE(region::region_contains(b, {0, 0, 0}));
}

TEST(RegionContains, SumBoundBindsAtTheCorner) {
    MIValues mi;
    mi.i_t1_out = 1.0;
    mi.i_t2_relay = 1.0;
    mi.i_t1_t2_s = 0.2;
    const auto b = region::bounds_from_mi(mi);
    EXPECT_FALSE(region::region_contains(b, {b.r12_max, 0.0, b.r13_max}));
    EXPECT_TRUE(region::region_contains(b, {b.r12_max, 0.0, b.r13_plus_r12_max - b.r12_max}));
}

TEST(RegionContains, AgreesWithRecomputedBounds) {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int inst = 0; inst < 300; ++inst) {
        const auto mi = oracle::random_mi_values(rng);
        const auto ref = oracle::bounds(mi.i_t1_out, mi.i_t1_s, mi.i_t2_relay, mi.i_t2_s, mi.i_t1_t2_s, mi.i_k2_y3,
                                        mi.i_k2_s2);
        const bool feasible = mi.i_yhat_cond_y3 <= mi.i_q2_y3 - mi.i_q2_s2 + 1e-9;
        const RatePoint pt{2.0 * u(rng), 0.6 * u(rng), 2.0 * u(rng)};
        const bool expected = feasible && pt.r13 <= ref.r13 && pt.r12 <= ref.r12 && pt.r13 + pt.r12 <= ref.sum &&
                              pt.r23 <= ref.r23;
        EXPECT_EQ(region::region_contains(region::bounds_from_mi(mi), pt), expected);
    }
}

TEST(AuxRateFeasible, GaussianOperatingPointsAreAchievable) {
    std::mt19937_64 rng(15);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto p = random_params(rng);
        const auto w = fig1_power();
        p.nhat = region::solve_nhat(w, p);
        const auto mi = region::mi_values_gaussian(w, p);
        const auto b = region::bounds_from_mi(mi);
        // Half of a corner point lies inside the polytope.
        const double r12 = std::min(b.r12_max, b.r13_plus_r12_max);
        const RatePoint pt{0.5 * r12, 0.5 * b.r23_max, 0.5 * std::min(b.r13_max, b.r13_plus_r12_max - r12)};
        EXPECT_TRUE(region::region_contains(b, pt));
        if (!b.clamped) {
            EXPECT_TRUE(region::aux_rate_feasible(mi, pt));
            ++checked;
        }
    }
    EXPECT_GT(checked, 10);
}
