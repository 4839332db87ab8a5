#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "scalolab/expansion.hpp"
#include "scalolab/extended_real.hpp"
#include "scalolab/lrd_core.hpp"
#include "scalolab/spectral.hpp"
#include "scalolab/wavelet.hpp"

namespace scalolab {

// w_0..w_p with sum w_i = 0 and sum i w_i = 1 / (2 ln 2).
struct RegressionWeights {
    std::vector<double> w;
};
RegressionWeights regression_weights(int p);

// sum_i w_i log sigma2[i]
double regress_log_scalogram(const RegressionWeights& weights, const std::vector<double>& sigma2);

struct EstimationReport {
    double d0_hat = 0.0;
    int j = 0;  // finest scale; the estimator uses j .. j + p
    int p = 0;
    std::vector<int> scales;
    std::vector<long> n;
    std::vector<double> sigma2;
    std::vector<double> weights;
    bool consistency_only = true;
    std::optional<double> rate_stochastic;  // (N 2^{-j})^{-(1/2 - d)}
    std::optional<double> rate_bias;        // 2^{-zeta j}
};

EstimationReport estimate_d0(const Eigen::VectorXd& series, const FilterBank& bank, int j, int p,
                             std::optional<double> d = std::nullopt, std::optional<double> zeta = std::nullopt);

// Integral of |g_inf(xi)|^2 |xi|^{-2a} over the real line.
double weighted_limit_norm(const FilterBank& bank, double a);

// L_p(g_inf) with the d, K of the model, through the Riesz reduction
// L_p = C_p int |g_inf(s)|^2 |s|^{-2K - 2 delta(p)} ds.
double L_integral(const FilterBank& bank, int p, double d, int K);

// Limit covariance of n_J^{1/2}(sigma2_{J-u} / sigma2_{J-u} - 1), u = 0..m-1, q0 = 1.
Eigen::MatrixXd cov_Q(const FilterBank& bank, double d, int K, int m);

// Gamma_{l,l'} for the multiscale filters l = 1 .. 2^m - 1 (without the f*(0)^2 factor).
Eigen::MatrixXd gamma_matrix(const FilterBank& bank, double d, int K, int m);

enum class LimitKind { gaussian, rosenblatt };

struct LimitLaw {
    LimitKind kind = LimitKind::gaussian;
    int q0 = 1;
    double d = 0.0;
    int K = 0;
    int p = 0;  // scales j .. j + p
    double L_q0 = 0.0;
    double L_q0m1 = 0.0;     // q0 >= 2 only
    Eigen::MatrixXd cov;     // q0 = 1: Cov(Q_u, Q_u'), u = p - i
    double d0_variance = 0.0;  // q0 = 1: n_J Var(d0_hat)
    // q0 >= 2: n_{J-u}^{1-2d}(sigma2_hat / sigma2 - 1) -> scale * Z_d(1)
    double rosenblatt_scale = 0.0;          // q0 L_{q0-1} / L_{q0}
    double rosenblatt_scale_theorem = 0.0;  // L_{q0-1} / (q0! L_{q0})
};

LimitLaw limit_constants(const FilterBank& bank, double d, int K, int q0, int p);

// Coefficient A with d0_hat - d0 ~ A Z_d(1) for q0 >= 2, given the counts n_j .. n_{j+p}.
double rosenblatt_loading(const LimitLaw& law, const std::vector<long>& n, double scale);

// Exact second moments of wavelet coefficients for Delta^K Y stationary with
// autocovariance gamma (lags 0..gamma.size()-1).
// cross(a, b)(m) = Cov(W_{a,k}, W_{b,k'}) at lag m = 2^a k - 2^b k', m = -span .. span.
struct WaveletCrossCov {
    long offset = 0;  // index of lag 0
    Eigen::VectorXd values;
    double at(long m) const;
};
WaveletCrossCov wavelet_cross_covariance(const FilterBank& bank, int a, int b, int K,
                                         const Eigen::VectorXd& gamma, long max_lag);
double wavelet_variance(const FilterBank& bank, int j, int K, const Eigen::VectorXd& gamma);
// Cov(sigma2_hat_a, sigma2_hat_b) for Gaussian coefficients over the standard interior ranges.
double gaussian_scalogram_covariance(const FilterBank& bank, long N, int a, int b, int K,
                                     const Eigen::VectorXd& gamma);

// E[Z_d(1)^2]
double rosenblatt_second_moment(double d);

// Draws approximating Z_d(1) from H_2 partial sums of length n_internal, each
// rescaled to the exact second moment.
std::vector<double> rosenblatt_sample(double d, std::size_t reps, std::uint64_t seed, int n_internal = 1 << 14);

struct QuantileRecord {
    double d;
    double prob;
    double quantile;
    int n_internal;
    std::size_t reps;
    std::uint64_t seed;
    bool from_cache;
};

// Rosenblatt quantiles with an optional JSON cache on disk.
class QuantileCache {
public:
    explicit QuantileCache(std::string path = "");
    QuantileRecord quantile(double d, double prob, int n_internal, std::size_t reps, std::uint64_t seed);
    const std::string& path() const { return path_; }

private:
    void load();
    void store() const;

    std::string path_;
    std::mutex mutex_;
    std::vector<QuantileRecord> table_;
    std::map<std::tuple<double, int, std::size_t, std::uint64_t>, std::vector<double>> samples_;
};

struct QuantileOptions {
    int n_internal = 1 << 14;
    std::size_t reps = 10000;
    std::uint64_t seed = 20240601;
    QuantileCache* cache = nullptr;
};

struct TestPlan {
    double d0_star = 0.0;
    double alpha = 0.1;
    int K_bar = 0;
    int q0 = 1;
    double d_star = 0.0;
    int K_star = 0;
    long N = 0;
    int j = 0;
    int p = 0;
    std::vector<long> n;
    ExtendedReal nu_c_star = ExtendedReal::infinity();
    double zeta = 0.0;
    LimitLaw law;
    double u_N = 0.0;
    double s_N = 0.0;
    std::optional<QuantileRecord> quantile;
    double reduction_ratio = 0.0;  // N 2^{-j} / 2^{j nu_c*}
    double bias_term = 0.0;        // 2^{-zeta j} u_N
};

// Splits d0* into (d*, K*) for a rank q0 and checks the boundary lattice.
std::pair<double, int> split_d0(double d0_star, int q0);

TestPlan plan_test(const FilterBank& bank, long N, int j, int p, double d0_star, double alpha, int K_bar,
                   const HermiteExpansion& G, double beta_smooth = 2.0, const QuantileOptions& qopt = {});

struct TestReport {
    TestPlan plan;
    EstimationReport estimate;
    double statistic = 0.0;  // |d0_hat - d0*|
    bool reject = false;
};

TestReport run_test(const Eigen::VectorXd& series, const FilterBank& bank, const TestPlan& plan);
TestReport run_test(const Eigen::VectorXd& series, const FilterBank& bank, int j, int p, double d0_star,
                    double alpha, int K_bar, const HermiteExpansion& G, double beta_smooth = 2.0,
                    const QuantileOptions& qopt = {});

}  // namespace scalolab
