#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace scalolab {

using RealFunction = std::function<double(double)>;

// Probabilists' Hermite polynomial via H_{q+1} = x H_q - q H_{q-1}.
template <class Scalar>
Scalar hermite_eval(int q, Scalar x) {
    if (q == 0) return Scalar(1);
    Scalar hm1(1), h = x;
    for (int k = 1; k < q; ++k) {
        Scalar next = x * h - Scalar(k) * hm1;
        hm1 = h;
        h = next;
    }
    return h;
}

// Probability-normalised Gauss-Hermite rule: sum w_i f(x_i) ~ E f(X), X ~ N(0,1).
struct GaussHermiteRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

const GaussHermiteRule& gauss_hermite(int order);

struct HermiteExpansion {
    std::map<int, double> coeffs;  // q -> c_q = E[G(X) H_q(X)], nonzero only
    int qmax = 40;
    double parseval_mass = 0.0;  // sum c_q^2 / q!
    double second_moment = 0.0;  // E[G(X)^2] after centering
    int quadrature_order = 0;    // 0 when coefficients were supplied exactly
    double centering = 0.0;      // mean removed by auto-centering
    std::vector<std::string> warnings;
};

inline constexpr double kZeroThreshold = 1e-10;

HermiteExpansion expand(const RealFunction& G, int qmax = 40, int quad_order = 256);

// Expansion G = sum_q (c_q / q!) H_q from known c_q.
HermiteExpansion expansion_from_coeffs(const std::map<int, double>& coeffs, int qmax = 40);

// Truncated series sum_q (c_q / q!) H_q(x).
double evaluate(const HermiteExpansion& e, double x);

struct HermiteRank {
    int q0;
    std::optional<int> q1;
};

HermiteRank hermite_rank(const HermiteExpansion& e);
std::vector<int> nonzero_indices(const HermiteExpansion& e);

struct DecayDiagnostic {
    bool pass = true;
    bool finite_support = false;
    double fitted_rate = 0.0;  // lambda in |c_q| / (q!)^d ~ exp(-lambda q)
    int tail_terms = 0;
    std::string note;
};

DecayDiagnostic decay_check(const HermiteExpansion& e, double d);

// Builtin nonlinearities.
RealFunction hermite_function(int q);
RealFunction polynomial_function(std::vector<double> monomial_coeffs);
RealFunction exp_centered_function(double t);
RealFunction sign_function();
RealFunction abs_centered_function();

// Parses e.g. "x^3 - 3*x + 1/6 x^2" into monomial coefficients (index = power).
std::vector<double> parse_polynomial(const std::string& text);

}  // namespace scalolab
