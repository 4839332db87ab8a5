#pragma once

#include <memory>

#include "scalolab/harness.hpp"
#include "scalolab/synthesis.hpp"

namespace scalolab::harness::detail {

// Builds the circulant embedding once per (model, N).
class PathSimulator {
public:
    PathSimulator(const ExperimentConfig& c, const HermiteExpansion& e, long N);
    Eigen::VectorXd path(std::uint64_t replicate) const;
    const GaussianSampler& sampler() const { return *sampler_; }

private:
    const ExperimentConfig& c_;
    const HermiteExpansion& e_;
    RealFunction G_;
    std::unique_ptr<GaussianSampler> sampler_;
};

int max_scale(long N, int M);
nlohmann::json report_header(const ExperimentConfig& c);
void run_mc_experiment(const ExperimentConfig& c, OutputSet& out);

}  // namespace scalolab::harness::detail
