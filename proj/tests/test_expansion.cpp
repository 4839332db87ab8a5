#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "scalolab/errors.hpp"
#include "scalolab/expansion.hpp"

using namespace scalolab;

TEST(Hermite, RecursionMatchesExplicitSum) {
    for (int q = 0; q <= 15; ++q)
        for (double x : {-3.1, -0.7, 0.0, 0.4, 2.2})
            EXPECT_NEAR(hermite_eval(q, x), oracle::hermite(q, x), 1e-9 * std::max(1.0, std::abs(oracle::hermite(q, x))));
}

TEST(Hermite, OrthogonalityTable) {
    const GaussHermiteRule& r = gauss_hermite(64);
    for (int q = 0; q <= 12; ++q)
        for (int qp = 0; qp <= 12; ++qp) {
            double s = 0.0;
            for (int i = 0; i < r.nodes.size(); ++i)
                s += r.weights(i) * hermite_eval(q, r.nodes(i)) * hermite_eval(qp, r.nodes(i));
            double want = q == qp ? std::tgamma(q + 1.0) : 0.0;
            EXPECT_NEAR(s / std::tgamma(std::min(q, qp) + 1.0), want / std::tgamma(std::min(q, qp) + 1.0), 1e-8)
                << q << "," << qp;
        }
}

TEST(Expand, Cubic) {
    HermiteExpansion e = expand(polynomial_function({0, 0, 0, 1}));
    ASSERT_EQ(e.coeffs.size(), 2u);
    EXPECT_NEAR(e.coeffs.at(1), 3.0, 1e-12);
    EXPECT_NEAR(e.coeffs.at(3), 6.0, 1e-12);
    EXPECT_NEAR(e.parseval_mass, 15.0, 1e-10);  // E X^6
    EXPECT_NEAR(e.parseval_mass, e.second_moment, 1e-10);
    EXPECT_EQ(hermite_rank(e).q0, 1);
    EXPECT_EQ(*hermite_rank(e).q1, 3);
}

TEST(Expand, PolynomialParsevalExact) {
    HermiteExpansion e = expand(polynomial_function({1.0, -2.0, 0.5, 0.0, 0.25}));
    EXPECT_NEAR(e.parseval_mass, e.second_moment, 1e-10 * e.second_moment);
    EXPECT_NE(e.centering, 0.0);
    EXPECT_FALSE(e.warnings.empty());
}

TEST(Expand, ExpCenteredParseval) {
    const double t = 0.8;
    HermiteExpansion e = expand(exp_centered_function(t));
    const double var = std::exp(t * t) * (std::exp(t * t) - 1.0);
    EXPECT_NEAR(e.parseval_mass / var, 1.0, 0.01);
    for (int q = 1; q <= 8; ++q) EXPECT_NEAR(e.coeffs.at(q), std::pow(t, q) * std::exp(t * t / 2), 1e-8);
}

TEST(Expand, EvenAndOddFunctions) {
    HermiteExpansion a = expand(abs_centered_function());
    for (const auto& [q, c] : a.coeffs) EXPECT_EQ(q % 2, 0) << q;
    EXPECT_EQ(hermite_rank(a).q0, 2);
    HermiteExpansion s = expand(sign_function(), 40, 512);
    for (const auto& [q, c] : s.coeffs) EXPECT_EQ(q % 2, 1) << q;
    EXPECT_NEAR(s.coeffs.at(1), std::sqrt(2.0 / M_PI), 1e-3);
}

TEST(Expand, FromCoeffsAndEvaluate) {
    HermiteExpansion e = expansion_from_coeffs({{2, 2.0}, {3, 1.0}});
    for (double x : {-1.3, 0.2, 2.5})
        EXPECT_NEAR(evaluate(e, x), oracle::hermite(2, x) + oracle::hermite(3, x) / 6, 1e-12);
    EXPECT_NEAR(e.parseval_mass, 2.0 + 1.0 / 6, 1e-14);
    EXPECT_EQ(nonzero_indices(e), (std::vector<int>{2, 3}));
    EXPECT_THROW(expansion_from_coeffs({{0, 1.0}}), DomainError);
    EXPECT_THROW(hermite_rank(HermiteExpansion{}), DomainError);
}

TEST(Expand, NonIntegrable) {
    EXPECT_THROW(expand([](double x) { return std::exp(x * x); }), NonIntegrableError);
}

TEST(Expand, DecayDiagnostic) {
    EXPECT_TRUE(decay_check(expand(polynomial_function({0, 0, 1})), 0.3).finite_support);
    EXPECT_TRUE(decay_check(expand(exp_centered_function(0.5)), 0.3).pass);
}

TEST(ParsePolynomial, Forms) {
    EXPECT_EQ(parse_polynomial("x^3 - 3*x"), (std::vector<double>{0, -3, 0, 1}));
    std::vector<double> c = parse_polynomial("1/6 x^2 + 2");
    EXPECT_NEAR(c[0], 2.0, 1e-15);
    EXPECT_NEAR(c[2], 1.0 / 6, 1e-15);
    EXPECT_ANY_THROW(parse_polynomial("x^^2"));
}
