#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "scalolab/rng.hpp"
#include "scalolab/synthesis.hpp"

using namespace scalolab;

// Known-answer vectors of the reference Philox4x32-10.
TEST(Philox, KnownAnswers) {
    using B = Philox4x32::Block;
    EXPECT_EQ(Philox4x32::block(B{0, 0, 0, 0}, {0, 0}), (B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(Philox4x32::block(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(Philox4x32::block(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, StreamsAreReproducibleAndDistinct) {
    RngStream a(42, "path", 3), b(42, "path", 3), c(42, "path", 4), e(42, "rosenblatt", 3);
    for (int i = 0; i < 100; ++i) {
        double x = a.gaussian();
        EXPECT_EQ(x, b.gaussian());
        EXPECT_NE(x, c.gaussian());
        EXPECT_NE(x, e.gaussian());
    }
    EXPECT_NE(substream_id("path", 0), substream_id("path", 1));
}

TEST(Philox, UniformMoments) {
    RngStream s(1, "check", 0);
    double m = 0, v = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double u = s.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        m += u;
        v += u * u;
    }
    m /= n;
    v = v / n - m * m;
    EXPECT_NEAR(m, 0.5, 4 * std::sqrt(1.0 / 12 / n));
    EXPECT_NEAR(v, 1.0 / 12, 0.002);
}

TEST(Sampler, EmpiricalAutocovarianceMatches) {
    const double d = 0.3;
    SpectralModel m = SpectralModel::unit_variance({d, 0});
    GaussianSampler s(m, 4096);
    EXPECT_TRUE(s.exact());
    std::vector<double> rho = oracle::fgn_rho(d, 8);
    const int R = 400;
    std::vector<double> acc(9, 0.0);
    for (int r = 0; r < R; ++r) {
        Eigen::VectorXd x = s.sample(11, r);
        for (int k = 0; k <= 8; ++k) acc[k] += x(100) * x(100 + k) + x(3000) * x(3000 + k);
    }
    for (int k = 0; k <= 8; ++k) EXPECT_NEAR(acc[k] / (2 * R), rho[k], 0.1) << k;
}

TEST(Sampler, PooledVarianceIsOne) {
    SpectralModel m = SpectralModel::unit_variance({0.4, 0}, {0.3});
    GaussianSampler s(m, 1 << 12);
    double ss = 0.0;
    long cnt = 0;
    for (int r = 0; r < 200; ++r) {
        Eigen::VectorXd x = s.sample(5, r);
        ss += x.squaredNorm();
        cnt += x.size();
    }
    EXPECT_NEAR(ss / cnt, 1.0, 0.05);
}

TEST(Sampler, Deterministic) {
    SpectralModel m = SpectralModel::unit_variance({0.2, 0});
    GaussianSampler s(m, 1000);
    EXPECT_EQ(s.length(), 1000);
    EXPECT_EQ(s.sample(3, 0), s.sample(3, 0));
    EXPECT_NE(s.sample(3, 0), s.sample(3, 1));
    EXPECT_NE(s.sample(3, 0), s.sample(4, 0));
    EXPECT_NE(s.sample(3, 0), s.sample(3, 0, "other"));
    EXPECT_EQ(sample_gaussian(m, 1000, 3, 0), s.sample(3, 0));
}

TEST(Integrate, InverseOfDifference) {
    Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(50, -1.0, 2.0).array().sin();
    for (int K = 0; K <= 3; ++K) {
        Eigen::VectorXd y = integrate_K(x, K);
        Eigen::VectorXd back = difference_K(y, K);
        ASSERT_EQ(back.size(), x.size() - K);
        // K differences of values of size |y| lose about 2^K |y| eps
        const double tol = 4 * std::numeric_limits<double>::epsilon() * (1 << K) * std::max(1.0, y.cwiseAbs().maxCoeff());
        for (int i = 0; i < back.size(); ++i) EXPECT_NEAR(back(i), x(i + K), tol);
    }
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(5);
    Eigen::VectorXd c = integrate_K(ones, 2);
    EXPECT_DOUBLE_EQ(c(4), 15.0);
}

TEST(ApplyG, SeriesAndFunctionAgree) {
    Eigen::VectorXd x(4);
    x << -1.5, 0.0, 0.3, 2.0;
    HermiteExpansion e = expansion_from_coeffs({{2, 2.0}, {3, 1.0}});
    Eigen::VectorXd a = apply_G(e, x);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(a(i), oracle::hermite(2, x(i)) + oracle::hermite(3, x(i)) / 6, 1e-12);
    HermiteExpansion p = expand(polynomial_function({1.0, 0.0, 1.0}));  // 1 + x^2, centred to x^2 - 1
    Eigen::VectorXd b = apply_G(polynomial_function({1.0, 0.0, 1.0}), p, x);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(b(i), x(i) * x(i) - 1.0, 1e-10);
}
