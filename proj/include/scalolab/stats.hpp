#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace scalolab {

double mean(const std::vector<double>& x);
double variance(const std::vector<double>& x);  // unbiased
double skewness(const std::vector<double>& x);
double quantile(std::vector<double> x, double prob);  // linear interpolation

// Slope of the least-squares line through (x_i, y_i).
double ols_slope(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

double normal_cdf(double x);
double normal_quantile(double prob);

struct AndersonDarling {
    double statistic;  // A^2
    double adjusted;   // A^2 (1 + 0.75/n + 2.25/n^2)
    double p_value;
};
// Normality test with mean and variance estimated from the sample.
AndersonDarling anderson_darling_normal(const std::vector<double>& x);

struct KolmogorovSmirnov {
    double statistic;
    double p_value;  // asymptotic
};
KolmogorovSmirnov ks_two_sample(std::vector<double> a, std::vector<double> b);

// Runs body(i) for i in [0, n) on up to `threads` workers (0 = hardware).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads = 0);

}  // namespace scalolab
