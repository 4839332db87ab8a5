#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "oracles.hpp"
#include "scalolab/errors.hpp"
#include "scalolab/spectral.hpp"

using namespace scalolab;

namespace {

// Composite Simpson after u = s^{p+1}, for int_0^1 s^p g(s) ds with p > -1.
double int_power(double p, const std::function<double(double)>& g, int n = 20000) {
    auto f = [&](double u) { return g(std::pow(u, 1.0 / (p + 1))); };
    double h = 1.0 / n, s = f(0.0) + f(1.0);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * f(i * h);
    return s * h / 3 / (p + 1);
}

// int_R |y|^{-a} |1 - y|^{-b} dy, split so each piece has one endpoint singularity.
double riesz_numeric(double a, double b) {
    double s = 0.0;
    auto piece01 = [&](double pa, double pb) {
        // int_0^{1/2} y^{-pa} (1-y)^{-pb} dy
        return 0.5 * int_power(-pa, [&](double t) { return std::pow(0.5, -pa) * std::pow(1 - 0.5 * t, -pb); });
    };
    s += piece01(a, b) + piece01(b, a);  // [0, 1]
    // [1, inf): y = 1/t, t^{a+b-2} (1-t)^{-b}; split t at 1/2
    s += 0.5 * int_power(a + b - 2, [&](double t) { return std::pow(0.5, a + b - 2) * std::pow(1 - 0.5 * t, -b); });
    s += 0.5 * int_power(-b, [&](double t) { return std::pow(0.5, -b) * std::pow(1 - 0.5 * t, a + b - 2); });
    // (-inf, 0]: y = -x, x^{-a} (1+x)^{-b} on [0,1], then x = 1/t
    s += int_power(-a, [&](double x) { return std::pow(1 + x, -b); });
    s += int_power(a + b - 2, [&](double t) { return std::pow(1 + t, -b); });
    return s;
}

}  // namespace

TEST(Autocov, MatchesGammaClosedForm) {
    for (double d : {0.1, 0.3, 0.45}) {
        Eigen::VectorXd r = autocov_X(SpectralModel::unit_variance({d, 0}), 200);
        std::vector<double> o = oracle::fgn_rho(d, 200);
        for (int k = 0; k <= 200; ++k) EXPECT_NEAR(r(k), o[k], 1e-12) << d << " " << k;
    }
}

TEST(Autocov, FourierInversionAgrees) {
    SpectralModel m = SpectralModel::unit_variance({0.3, 0}, {0.5, -0.2});
    EXPECT_NEAR(model_variance(m), 1.0, 1e-12);
    Eigen::VectorXd a = autocov_X(m, 64), b = autocov_X_fourier(m, 64, 18);
    for (int k = 0; k <= 64; ++k) EXPECT_NEAR(a(k), b(k), 1e-4) << k;
}

TEST(Density, ShapeAndStar) {
    SpectralModel m = SpectralModel::unit_variance({0.3, 0});
    for (double l : {0.01, 0.5, 2.0})
        EXPECT_NEAR(density_at(m, l), m.scale * std::pow(2 * std::sin(l / 2), -0.6), 1e-12);
    EXPECT_DOUBLE_EQ(f_star_at_zero(m), m.scale);
    // unit variance: scale = Gamma(1-d)^2 / (2 pi Gamma(1-2d))
    EXPECT_NEAR(m.scale, std::pow(std::tgamma(0.7), 2) / (2 * M_PI * std::tgamma(0.4)), 1e-12);
}

TEST(Riesz, MatchesNumericIntegral) {
    for (auto [a, b] : std::vector<std::pair<double, double>>{{0.6, 0.6}, {0.8, 0.5}, {0.3, 0.9}}) {
        EXPECT_NEAR(riesz_constant(a, b) / riesz_numeric(a, b), 1.0, 2e-4) << a << " " << b;
    }
    EXPECT_ANY_THROW(riesz_constant(0.3, 0.4));
}

TEST(Riesz, PowerConvolutionConstant) {
    const double d = 0.4;
    EXPECT_NEAR(power_convolution_constant(1, d), 1.0, 1e-15);
    EXPECT_NEAR(power_convolution_constant(2, d), riesz_numeric(2 * d, 2 * d), 2e-4 * riesz_numeric(2 * d, 2 * d));
    EXPECT_NEAR(power_convolution_constant(3, 0.45) / (riesz_numeric(0.9, 0.9) * riesz_numeric(2 * (0.9 - 0.5), 0.9)),
                1.0, 5e-4);
}

TEST(Duality, ConvolutionMassesMatchPowersOfRho) {
    SpectralModel m = SpectralModel::unit_variance({0.3, 0});
    Eigen::VectorXd w = cell_masses(m, 18);
    Eigen::VectorXd rho = autocov_X(m, 64);
    for (int q = 1; q <= 3; ++q) {
        Eigen::VectorXd r = lag_transform(convolution_masses(w, q), 64);
        for (int k = 0; k <= 64; ++k) EXPECT_NEAR(r(k), std::pow(rho(k), q), 1e-6) << q << " " << k;
    }
}

TEST(GeneralizedDensity, Hermite2) {
    SpectralModel m = SpectralModel::unit_variance({0.4, 0});
    HermiteExpansion e = expansion_from_coeffs({{2, 2.0}});
    GeneralizedDensity g(e, m, 18);
    EXPECT_EQ(g.q0(), 2);
    EXPECT_NEAR(g.d0(), 0.3, 1e-14);
    EXPECT_NEAR(g.f_Gstar_at_zero(), 2.0 * power_convolution_constant(2, 0.4) * std::pow(m.scale, 2), 1e-12);
    // total mass = Var H_2 = 2
    // lambda = pi t^5 removes the lambda^{-0.6} singularity; Simpson in t
    const int n = 4000;
    double mass = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double t = static_cast<double>(i) / n;
        const double w = i == n ? 1 : (i % 2 ? 4 : 2);
        mass += w * g.f_G(M_PI * std::pow(t, 5)) * 5 * M_PI * std::pow(t, 4);
    }
    mass *= 2.0 / (3.0 * n);
    EXPECT_NEAR(mass, 2.0, 5e-3);
    EXPECT_THROW(g.f_G(0.0), SingularityError);
}

TEST(GeneralizedDensity, RankOneIsTheInputDensity) {
    SpectralModel m = SpectralModel::unit_variance({0.3, 0});
    GeneralizedDensity g(expansion_from_coeffs({{1, 1.0}}), m, 18);
    for (double l : {0.05, 0.7, 2.5}) EXPECT_NEAR(g.f_G(l) / density_at(m, l), 1.0, 1e-3);
}

TEST(Validation, RejectsBadModels) {
    EXPECT_ANY_THROW(SpectralModel::unit_variance({0.6, 0}));
    EXPECT_ANY_THROW(SpectralModel::unit_variance({0.3, -1}));
}
