#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "scalolab/errors.hpp"
#include "scalolab/lrd_core.hpp"

using namespace scalolab;

TEST(Delta, ClosedForm) {
    EXPECT_DOUBLE_EQ(delta(1, 0.3), 0.3);
    EXPECT_NEAR(delta(2, 0.3), 0.1, 1e-15);
    EXPECT_DOUBLE_EQ(delta(0, 0.3), 0.5);
    EXPECT_EQ(delta_plus(3, 0.3), 0.0);
    EXPECT_EQ(delta(2, 0.25), 0.0);  // snapped
    EXPECT_THROW(delta(1, 0.5), DomainError);
    EXPECT_THROW(delta(1, 0.0), DomainError);
}

TEST(Delta, BoundaryLattice) {
    EXPECT_TRUE(on_boundary_lattice(0.25));
    EXPECT_TRUE(on_boundary_lattice(1.0 / 3.0));
    EXPECT_TRUE(on_boundary_lattice(0.5 - 1.0 / 38.0));
    EXPECT_FALSE(on_boundary_lattice(0.3));
    EXPECT_THROW(require_off_boundary(0.375), BoundaryError);
    EXPECT_EQ(epsilon(2, 0.25), 1);
    EXPECT_EQ(epsilon(1, 0.25), 0);
    EXPECT_EQ(epsilon(5, 0.3), 0);
}

TEST(Exponents, Examples) {
    for (int q = 1; q < 6; ++q) EXPECT_NEAR(alpha_exponent(q, q + 1, q, 0.3), 0.2, 1e-14);
    EXPECT_NEAR(alpha_exponent(2, 2, 1, 0.3), 0.4, 1e-14);
    ChaosExponents e = chaos_exponents(1, 2, 0, 0.2);
    EXPECT_DOUBLE_EQ(e.alpha, 0.5);
    EXPECT_NEAR(e.beta_prime, 0.2, 1e-14);
    EXPECT_THROW(alpha_exponent(3, 2, 1, 0.3), OrderingError);
    EXPECT_THROW(alpha_exponent(2, 3, 3, 0.3), OrderingError);
    EXPECT_NEAR(lambda_factor({2, 3}, 0.3), std::pow(12.0, 0.4), 1e-12);
}

TEST(Exponents, MatchOracleOnGrid) {
    for (double d : {0.05, 0.2, 0.26, 0.3, 0.41, 0.47})
        for (int q = 1; q <= 12; ++q)
            for (int qp = q; qp <= 12; ++qp)
                for (int p = 0; p <= q; ++p) {
                    EXPECT_EQ(alpha_exponent(q, qp, p, d), oracle::alpha(q, qp, p, d));
                    EXPECT_EQ(beta_exponent(q, p, d), oracle::beta(q, p, d));
                    EXPECT_EQ(beta_prime_exponent(q, qp, p, d), oracle::beta_prime(q, qp, p, d));
                }
}

TEST(RankProfile, Illustration) {
    RankProfile rp = rank_profile({1, 3, 4, 5, 24}, 0.3);
    EXPECT_EQ(rp.q0, 1);
    EXPECT_EQ(*rp.q1, 3);
    EXPECT_EQ(rp.gap_sets.at(0), (std::set<int>{1, 2}));
    EXPECT_EQ(rp.gap_sets.at(1), (std::set<int>{0}));
    EXPECT_EQ(rp.gap_sets.at(18), (std::set<int>{3}));
    EXPECT_EQ(rp.gap_sets.size(), 3u);
    EXPECT_EQ(rp.ell_markers.at(0), 1);
    EXPECT_EQ(rp.ell_markers.at(1), 0);
    EXPECT_EQ(rp.ell_markers.at(18), 3);
    EXPECT_EQ(rp.Q_set, (std::set<int>{0, 1}));
    EXPECT_EQ(rp.Jd_set, (std::set<int>{0, 1, 2}));

    RankProfile single = rank_profile({2}, 0.3);
    EXPECT_TRUE(single.gap_sets.empty());
    EXPECT_TRUE(single.Q_set.empty());
    EXPECT_TRUE(single.Jd_set.empty());
    EXPECT_FALSE(single.q1.has_value());

    EXPECT_THROW(rank_profile({2, 3}, 0.2), LongMemoryError);
    EXPECT_THROW(rank_profile({}, 0.2), DomainError);
}

TEST(CriticalExponent, GoldenValues) {
    CriticalExponentDetail det = critical_exponent_detail(rank_profile({1, 3, 4, 5, 24}, 0.3), 0.3);
    EXPECT_EQ(det.branch, 5);
    EXPECT_NEAR(det.value.value(), 8.0 / 3.0, 1e-12);
    EXPECT_TRUE(critical_exponent(rank_profile({3}, 0.45), 0.45).is_infinite());
    EXPECT_TRUE(critical_exponent(rank_profile({2, 4, 6}, 0.4), 0.4).is_infinite());
    // q0 >= 2, delta(q_l0) > 0
    EXPECT_NEAR(critical_exponent(rank_profile({2, 3}, 0.4), 0.4).value(), 1.0, 1e-12);
    EXPECT_NEAR(critical_exponent(rank_profile({2, 4, 5}, 0.45), 0.45).value(), 5.0, 1e-12);
}

TEST(CriticalExponent, AgreesWithOracleOnFuzzedProfiles) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 3000; ++trial) {
        double d = std::uniform_real_distribution<double>(0.01, 0.49)(rng);
        if (on_boundary_lattice(d)) continue;
        std::vector<int> q;
        int cur = 0;
        int len = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < len; ++i) q.push_back(cur += 1 + static_cast<int>(rng() % 4));
        if (!(oracle::dlt(q[0], d) > 0)) continue;
        double want = oracle::nu_c_definition(q, d);
        ExtendedReal got = critical_exponent(rank_profile(q, d), d);
        if (std::isinf(want)) {
            EXPECT_TRUE(got.is_infinite());
        } else {
            ASSERT_TRUE(got.is_finite());
            EXPECT_NEAR(got.value(), want, 1e-12 * std::max(1.0, want));
        }
    }
}

TEST(Zeta, Examples) {
    EXPECT_NEAR(zeta_exponent(2.0, 0.3, 1, 3), 0.6, 1e-14);
    double z = zeta_exponent(2.0, 0.3, 2, std::nullopt);
    EXPECT_LT(z, 0.2);
    EXPECT_NEAR(z, 0.2 * (1 - 1e-6), 1e-15);
    EXPECT_NEAR(zeta_exponent(0.1, 0.45, 1, 2), 0.1, 1e-14);
    EXPECT_THROW(zeta_exponent(2.5, 0.3, 1, 3), DomainError);
}

TEST(RateBound, Examples) {
    MemoryParams mp{0.3, 0};
    EXPECT_NEAR(rate_bound(1, 1, 0, 100, 16, mp), 2 * std::pow(100, -0.5) * std::pow(16, 0.6), 1e-12);
    double a = rate_bound(1, 1, 0, 100, 16, mp), b = rate_bound(1, 1, 0, 400, 16, mp);
    EXPECT_NEAR(b / a, 0.5, 1e-12);
    MemoryParams m4{0.4, 0};
    const double gam = 64, n = gam * gam;
    double leading = std::pow(n, -0.2) * std::pow(gam, 2 * 0.3);
    double r = rate_bound(2, 2, 1, n, gam, m4);
    EXPECT_NEAR(r, leading + std::pow(n, -0.5) * std::pow(gam, 0.6), 1e-14);
    EXPECT_GT(leading, r - leading);
    EXPECT_THROW(rate_bound(1, 1, 0, 1, 16, mp), DomainError);
}
