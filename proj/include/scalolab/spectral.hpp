#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "scalolab/expansion.hpp"
#include "scalolab/lrd_core.hpp"

namespace scalolab {

// f(lambda) = |1 - e^{-i lambda}|^{-2d} f*(lambda),
// f*(lambda) = scale |theta(e^{-i lambda})|^2, theta(z) = 1 + sum_k ma[k-1] z^k.
struct SpectralModel {
    MemoryParams params;
    std::vector<double> ma;     // short-range moving-average part, empty = flat
    double scale = 1.0;
    double beta_smooth = 2.0;   // Hoelder exponent of f* at the origin

    // Scale chosen so that X has unit variance.
    static SpectralModel unit_variance(MemoryParams params, std::vector<double> ma = {},
                                       double beta_smooth = 2.0);
};

void validate(const SpectralModel& model);

double f_star(const SpectralModel& model, double lambda);
double f_star_at_zero(const SpectralModel& model);
double density_at(const SpectralModel& model, double lambda);

// Var(X_0) implied by the model (equals 1 for unit_variance models).
double model_variance(const SpectralModel& model);

// Autocorrelation rho(0..L) from the closed-form fractional-noise recursion.
Eigen::VectorXd autocov_X(const SpectralModel& model, int L);

// Same quantity by discrete Fourier inversion of cell masses on a 2^log2_grid grid.
// Throws ResolutionError if the total mass moves by more than 0.1% under refinement.
Eigen::VectorXd autocov_X_fourier(const SpectralModel& model, int L, int log2_grid = 18);

// gamma_G(k) = sum_q (c_q^2 / q!) rho(k)^q
Eigen::VectorXd autocov_transformed(const HermiteExpansion& e, const Eigen::VectorXd& rho);

// Riesz constant: int |y|^{-a} |x-y|^{-b} dy = c(a,b) |x|^{1-a-b}, 0<a,b<1, a+b>1.
double riesz_constant(double a, double b);

// q-fold self convolution on the real line: (|.|^{-2d})^{*q} = C_q |x|^{-2 delta(q)}.
double power_convolution_constant(int q, double d);

// Cell masses of f on the uniform grid of (-pi, pi], stored in FFT order
// (index m <-> lambda = 2 pi m / n for m < n/2, negative frequencies after).
Eigen::VectorXd cell_masses(const SpectralModel& model, int log2_grid);

// Cell masses of the q-fold circular self-convolution.
Eigen::VectorXd convolution_masses(const Eigen::VectorXd& masses, int q);

// Sum_m masses_m e^{i k lambda_m}, k = 0..L.
Eigen::VectorXd lag_transform(const Eigen::VectorXd& masses, int L);

class GeneralizedDensity {
public:
    GeneralizedDensity(const HermiteExpansion& e, const SpectralModel& model, int log2_grid = 20);

    double f_G(double lambda) const;
    double f_GK(double lambda) const;
    double f_Gstar(double lambda) const;
    double f_Gstar_at_zero() const { return fstar0_; }
    double d0() const { return d0_; }
    int q0() const { return q0_; }

    // Cell-centre frequencies and f_G values on [0, pi].
    Eigen::VectorXd grid_frequencies() const;
    const Eigen::VectorXd& grid_values() const { return values_; }

private:
    SpectralModel model_;
    int n_;
    int q0_;
    double delta0_;
    double d0_;
    double fstar0_;
    Eigen::VectorXd values_;  // f_G at lambda_m = 2 pi m / n, m = 0..n/2
};

std::pair<double, double> generalized_density(const HermiteExpansion& e, const SpectralModel& model,
                                              double lambda, int log2_grid = 20);

}  // namespace scalolab
