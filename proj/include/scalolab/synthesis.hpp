#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "scalolab/expansion.hpp"
#include "scalolab/spectral.hpp"

namespace scalolab {

// Circulant-embedding sampler for the unit-variance Gaussian input X.
// The embedding is built once; sample() is const and thread-safe.
class GaussianSampler {
public:
    GaussianSampler(const SpectralModel& model, int N);

    Eigen::VectorXd sample(std::uint64_t seed, std::uint64_t replicate = 0,
                           std::string_view stream = "gaussian-path") const;

    int length() const { return N_; }
    bool exact() const { return clipped_ == 0.0; }
    double clipped_mass() const { return clipped_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    int N_;
    int m_;
    std::vector<double> amplitude_;  // sqrt(eigenvalue / m)
    double clipped_ = 0.0;
    std::vector<std::string> warnings_;
};

Eigen::VectorXd sample_gaussian(const SpectralModel& model, int N, std::uint64_t seed,
                                std::uint64_t replicate = 0);

// G(X_t) minus the auto-centering offset recorded in the expansion.
Eigen::VectorXd apply_G(const RealFunction& G, const HermiteExpansion& e, const Eigen::VectorXd& X);
// Truncated Hermite series evaluated pointwise.
Eigen::VectorXd apply_G(const HermiteExpansion& e, const Eigen::VectorXd& X);

// K-fold cumulative sum with zero initial values, accumulated in long double.
Eigen::VectorXd integrate_K(const Eigen::VectorXd& s, int K);
Eigen::VectorXd difference_K(const Eigen::VectorXd& s, int K);

}  // namespace scalolab
