#include "reduction_oracles.hpp"

#include "sdrcpm/dm_reductions.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sdrcpm;

namespace {

void expect_matches(const region::RateBounds& got, const oracle::Expected& want, double tol) {
    EXPECT_NEAR(got.r13_max, want.b.r13, tol);
    EXPECT_NEAR(got.r12_max, want.b.r12, tol);
    EXPECT_NEAR(got.r13_plus_r12_max, want.b.sum, tol);
    EXPECT_NEAR(got.r23_max, want.b.r23, tol);
    EXPECT_EQ(got.feasible, want.feasible);
}

}  // namespace

TEST(Reductions, StateFreeRelayChannel) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = dm::RcpmModel::random(rng, 2);
        const auto want = oracle::rcpm_oracle(m);
        expect_matches(dm::evaluate_theorem1(m.factorization()), want, 1e-9);
        expect_matches(m.reduced_bounds(), want, 1e-9);
    }
}

TEST(Reductions, BroadcastWithoutRelaying) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = dm::BcCsitModel::random(rng, 2);
        const auto want = oracle::bc_oracle(m);
        const auto general = dm::evaluate_theorem1(m.factorization());
        expect_matches(general, want, 1e-9);
        expect_matches(m.reduced_bounds(), want, 1e-9);
        EXPECT_NEAR(general.r23_max, 0.0, 1e-12);
    }
}

TEST(Reductions, SingleMessageInformedSource) {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = dm::SdrcSourceModel::random(rng, 2);
        const auto want = oracle::sdrc_oracle(m);
        const auto general = dm::evaluate_theorem1(m.factorization());
        expect_matches(general, want, 1e-9);
        expect_matches(m.reduced_bounds(), want, 1e-9);
        EXPECT_NEAR(general.r12_max, 0.0, 1e-12);
    }
}

TEST(Reductions, InformedSourceUninformedRelay) {
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = dm::InformedSourceModel::random(rng, 2);
        const auto want = oracle::informed_oracle(m);
        expect_matches(dm::evaluate_theorem1(m.factorization()), want, 1e-9);
        expect_matches(m.reduced_bounds(), want, 1e-9);
    }
}

TEST(Reductions, TernaryAlphabets) {
    std::mt19937_64 rng(45);
    const auto r = dm::RcpmModel::random(rng, 3);
    expect_matches(dm::evaluate_theorem1(r.factorization()), oracle::rcpm_oracle(r), 1e-9);
    const auto b = dm::BcCsitModel::random(rng, 3);
    expect_matches(dm::evaluate_theorem1(b.factorization()), oracle::bc_oracle(b), 1e-9);
}

TEST(TupleJoint, RejectsUnknownName) {
    const dm::TupleJoint j({"A"}, {2}, [](std::span<const int>) { return 0.5; });
    EXPECT_NEAR(j.entropy({"A"}), 1.0, 1e-15);
    EXPECT_THROW((void)j.entropy({"B"}), std::invalid_argument);
}
