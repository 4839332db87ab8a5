#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace scalolab {

// Numeric checks of the filter assumptions (finite support, uniform
// envelope, convergence of the rescaled transfer functions).
struct FilterValidation {
    double support_A = 0.0;  // supp g_j within gamma_j [-A, A]
    bool w1 = true;
    double envelope_alpha = 0.0;  // fitted decay exponent of the envelope
    double envelope_C = 0.0;
    bool w2 = false;
    std::vector<double> w3_gaps;  // sup-norm modulus gaps between consecutive scales
    bool w3 = false;
    std::string note;
};

struct FilterBank {
    std::string family;
    int M = 0;      // vanishing moments
    int T = 0;      // support length of the base wavelet
    int jmax = 0;
    Eigen::VectorXd lowpass;
    Eigen::VectorXd highpass;
    std::vector<Eigen::VectorXd> g;  // g[j], j = 1..jmax (g[0] unused)
    FilterValidation validation;

    const Eigen::VectorXd& filter(int j) const;
    long filter_length(int j) const;

    // Transfer function sum_t g_j(t) e^{-i lambda t}.
    std::complex<double> transfer(int j, double lambda) const;
    // Limit of 2^{-j/2} transfer(j, 2^{-j} xi).
    std::complex<double> limit_transfer(double xi) const;
};

// Daubechies minimum-phase lowpass with M vanishing moments, sum h = sqrt(2).
Eigen::VectorXd daubechies_lowpass(int M);

// family: "daubechies" (any M >= 1) or "haar" (M = 1).
FilterBank build_bank(const std::string& family, int M, int jmax);

// Require M >= needed and the numeric assumptions to hold.
void require_bank(const FilterBank& bank, double needed_M);

// n_j = floor(2^{-j}(N - T + 1) - T + 1); throws ScaleError if < 1.
long n_coeffs(long N, int T, int j);

// First interior location index at scale j.
long first_coefficient(const FilterBank& bank, int j);

// W_{j,k} = sum_t g_j(2^j k - t) Y_t for k = k_first .. k_first + count - 1.
Eigen::VectorXd wavelet_coeffs_at(const Eigen::VectorXd& series, const FilterBank& bank, int j,
                                  long k_first, long count);
Eigen::VectorXd wavelet_coeffs(const Eigen::VectorXd& series, const FilterBank& bank, int j);

struct ScalogramSummary {
    int j = 0;
    long n = 0;
    long k_first = 0;
    double sigma2 = 0.0;
    std::optional<double> centered;  // sigma2 - mean when a theoretical mean was given
    Eigen::VectorXd coeffs;          // kept only on request
};

ScalogramSummary scalogram(const Eigen::VectorXd& series, const FilterBank& bank, int j,
                           bool keep_coeffs = false, std::optional<double> mean = std::nullopt);

// Multiscale filter h_{l,j}(t) = g_{j-u}(t + 2^{j-u} v), l = 2^u + v; taps start at t = offset.
struct MultiscaleFilter {
    long offset;
    Eigen::VectorXd taps;
};
MultiscaleFilter multiscale_filter(const FilterBank& bank, int j, int ell);

struct MultiscaleScalogram {
    int j = 0;  // coarsest scale
    int p = 0;
    long k_first = 0;
    long n = 0;
    std::vector<ScalogramSummary> scales;  // u = 0..p-1, scale j - u
    std::vector<double> by_ell;            // entry l-1 for l = 1 .. 2^p - 1
};

MultiscaleScalogram multiscale_scalogram(const Eigen::VectorXd& series, const FilterBank& bank, int j,
                                         int p);

}  // namespace scalolab
