#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <random>

#include "scalolab/stats.hpp"

using namespace scalolab;

TEST(Stats, Moments) {
    std::vector<double> x{1, 2, 3, 4, 10};
    EXPECT_DOUBLE_EQ(mean(x), 4.0);
    EXPECT_DOUBLE_EQ(variance(x), 12.5);
    EXPECT_GT(skewness(x), 0.0);
    EXPECT_DOUBLE_EQ(quantile(x, 0.5), 3.0);
    EXPECT_DOUBLE_EQ(quantile(x, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(quantile(x, 1.0), 10.0);
    EXPECT_DOUBLE_EQ(quantile(x, 0.125), 1.5);
    Eigen::VectorXd a(4), b(4);
    a << 0, 1, 2, 3;
    b << 1, 3, 5, 7;
    EXPECT_NEAR(ols_slope(a, b), 2.0, 1e-14);
}

TEST(Stats, Normal) {
    EXPECT_NEAR(normal_cdf(0.0), 0.5, 1e-15);
    EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-12);
    for (double p : {1e-6, 0.01, 0.3, 0.5, 0.95, 0.999}) EXPECT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-12);
    EXPECT_NEAR(normal_quantile(0.95), 1.6448536269514722, 1e-10);
}

TEST(Stats, AndersonDarling) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    std::exponential_distribution<double> ed;
    std::vector<double> g(500), e(500);
    for (auto& v : g) v = nd(rng);
    for (auto& v : e) v = ed(rng);
    EXPECT_GT(anderson_darling_normal(g).p_value, 0.01);
    EXPECT_LT(anderson_darling_normal(e).p_value, 1e-4);
    std::vector<double> small{-1.2, -0.4, 0.1, 0.3, 0.9, 1.7, 2.5, -2.1};
    AndersonDarling ad = anderson_darling_normal(small);
    EXPECT_NEAR(ad.adjusted, ad.statistic * (1 + 0.75 / 8 + 2.25 / 64), 1e-14);
}

TEST(Stats, KolmogorovSmirnov) {
    std::vector<double> a{1, 2, 3, 4}, b{5, 6, 7, 8};
    EXPECT_DOUBLE_EQ(ks_two_sample(a, b).statistic, 1.0);
    EXPECT_DOUBLE_EQ(ks_two_sample(a, a).statistic, 0.0);
    std::vector<double> c{1, 2, 5, 6};
    EXPECT_DOUBLE_EQ(ks_two_sample(a, c).statistic, 0.5);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> nd;
    std::vector<double> x(2000), y(2000);
    for (auto& v : x) v = nd(rng);
    for (auto& v : y) v = nd(rng) + 0.3;
    EXPECT_LT(ks_two_sample(x, y).p_value, 1e-6);
}

TEST(Stats, ParallelFor) {
    std::vector<int> hit(1000, 0);
    parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; }, 4);
    for (int h : hit) EXPECT_EQ(h, 1);
    std::atomic<int> count{0};
    EXPECT_THROW(parallel_for(
                     100,
                     [&](std::size_t i) {
                         ++count;
                         if (i == 17) throw std::runtime_error("boom");
                     },
                     3),
                 std::runtime_error);
}
