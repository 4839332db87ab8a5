#include "scalolab/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft.hpp"
#include "scalolab/errors.hpp"
#include "scalolab/rng.hpp"

namespace scalolab {

GaussianSampler::GaussianSampler(const SpectralModel& model, int N) : N_(N), m_(2 * N) {
    if (N < 2) throw DomainError("path length must be at least 2");
    Eigen::VectorXd rho = autocov_X(model, N);
    detail::cvec c(m_);
    c[0] = rho(0);
    for (int k = 1; k <= N; ++k) c[k] = rho(k);
    for (int k = 1; k < N; ++k) c[m_ - k] = rho(k);
    auto eig = detail::fft_forward(c);
    amplitude_.resize(m_);
    double total = 0.0, negative = 0.0;
    for (int k = 0; k < m_; ++k) {
        double v = eig[k].real();
        total += std::abs(v);
        if (v < 0.0) {
            negative += -v;
            v = 0.0;
        }
        amplitude_[k] = std::sqrt(v / m_);
    }
    if (negative > 1e-12 * total) {
        clipped_ = negative / total;
        std::ostringstream os;
        os << "circulant embedding not nonnegative definite (clipped relative mass " << clipped_
           << "); using approximate spectral synthesis";
        warnings_.push_back(os.str());
    }
}

Eigen::VectorXd GaussianSampler::sample(std::uint64_t seed, std::uint64_t replicate,
                                        std::string_view stream) const {
    RngStream rng(seed, stream, replicate);
    detail::cvec z(m_);
    for (int k = 0; k < m_; ++k) {
        double re = rng.gaussian();
        double im = rng.gaussian();
        z[k] = {amplitude_[k] * re, amplitude_[k] * im};
    }
    auto y = detail::fft_forward(z);
    Eigen::VectorXd x(N_);
    for (int t = 0; t < N_; ++t) x(t) = y[t].real();
    return x;
}

Eigen::VectorXd sample_gaussian(const SpectralModel& model, int N, std::uint64_t seed,
                                std::uint64_t replicate) {
    return GaussianSampler(model, N).sample(seed, replicate);
}

Eigen::VectorXd apply_G(const RealFunction& G, const HermiteExpansion& e, const Eigen::VectorXd& X) {
    const double shift = e.centering;
    return X.unaryExpr([&](double x) { return G(x) - shift; });
}

Eigen::VectorXd apply_G(const HermiteExpansion& e, const Eigen::VectorXd& X) {
    return X.unaryExpr([&](double x) { return evaluate(e, x); });
}

Eigen::VectorXd integrate_K(const Eigen::VectorXd& s, int K) {
    if (K < 0) throw DomainError("integration order must be nonnegative");
    std::vector<long double> acc(s.data(), s.data() + s.size());
    for (int r = 0; r < K; ++r) {
        long double run = 0.0L;
        for (auto& v : acc) {
            run += v;
            v = run;
        }
    }
    Eigen::VectorXd out(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (!std::isfinite(static_cast<double>(acc[i]))) throw DomainError("integrated series overflows");
        out(i) = static_cast<double>(acc[i]);
    }
    return out;
}

Eigen::VectorXd difference_K(const Eigen::VectorXd& s, int K) {
    if (K < 0) throw DomainError("difference order must be nonnegative");
    Eigen::VectorXd out = s;
    for (int r = 0; r < K; ++r) {
        if (out.size() < 2) throw DomainError("series too short to difference");
        Eigen::VectorXd next = out.tail(out.size() - 1) - out.head(out.size() - 1);
        out = std::move(next);
    }
    return out;
}

}  // namespace scalolab
