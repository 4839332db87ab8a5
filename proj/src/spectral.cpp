#include "scalolab/spectral.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "scalolab/errors.hpp"

namespace scalolab {

namespace {

constexpr double kPi = std::numbers::pi;

// 6-point Gauss-Legendre on [-1, 1]
constexpr double kGLx[6] = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                            0.2386191860831969,  0.6612093864662645,  0.9324695142031521};
constexpr double kGLw[6] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                            0.4679139345726910, 0.3607615730481386, 0.1713244923791704};

std::complex<double> theta_at(const std::vector<double>& ma, double lambda) {
    std::complex<double> s(1.0, 0.0);
    for (std::size_t k = 0; k < ma.size(); ++k)
        s += ma[k] * std::polar(1.0, -lambda * static_cast<double>(k + 1));
    return s;
}

// f(lambda) |lambda|^{2d}, smooth and positive on [0, pi]
double regular_part(const SpectralModel& m, double lambda) {
    double d = m.params.d;
    double ratio = (lambda == 0.0) ? 1.0 : 2.0 * std::sin(0.5 * lambda) / lambda;
    return f_star(m, lambda) * std::pow(ratio, -2.0 * d);
}

// int_a^b f, 0 <= a < b <= pi, via u = lambda^{1-2d}
double integrate_density(const SpectralModel& m, double a, double b) {
    double e = 1.0 - 2.0 * m.params.d;
    double ua = std::pow(a, e), ub = std::pow(b, e);
    double mid = 0.5 * (ua + ub), half = 0.5 * (ub - ua);
    double s = 0.0;
    for (int i = 0; i < 6; ++i) {
        double u = mid + half * kGLx[i];
        s += kGLw[i] * regular_part(m, std::pow(u, 1.0 / e));
    }
    return s * half / e;
}

// Unnormalised fractional-noise autocovariance int |1-e^{-il}|^{-2d} e^{ikl} dl, k = 0..L
Eigen::VectorXd fractional_autocov(double d, int L) {
    Eigen::VectorXd g(L + 1);
    g(0) = 2.0 * kPi * std::exp(std::lgamma(1.0 - 2.0 * d) - 2.0 * std::lgamma(1.0 - d));
    for (int k = 1; k <= L; ++k) g(k) = g(k - 1) * (k - 1 + d) / (k - d);
    return g;
}

Eigen::VectorXd mixed_autocov(const SpectralModel& m, int L) {
    const int order = static_cast<int>(m.ma.size());
    Eigen::VectorXd g = fractional_autocov(m.params.d, L + order);
    std::vector<double> th(order + 1, 1.0);
    for (int k = 0; k < order; ++k) th[k + 1] = m.ma[k];
    Eigen::VectorXd out = Eigen::VectorXd::Zero(L + 1);
    for (int k = 0; k <= L; ++k)
        for (int a = 0; a <= order; ++a)
            for (int b = 0; b <= order; ++b) out(k) += th[a] * th[b] * g(std::abs(k + a - b));
    return out * m.scale;
}

}  // namespace

SpectralModel SpectralModel::unit_variance(MemoryParams params, std::vector<double> ma,
                                           double beta_smooth) {
    SpectralModel m;
    m.params = params;
    m.ma = std::move(ma);
    m.beta_smooth = beta_smooth;
    m.scale = 1.0;
    validate(m);
    m.scale = 1.0 / model_variance(m);
    return m;
}

void validate(const SpectralModel& model) {
    validate(model.params);
    if (!(model.scale > 0.0)) throw DomainError("spectral scale must be positive");
    if (!(model.beta_smooth > 0.0 && model.beta_smooth <= 2.0))
        throw DomainError("beta_smooth must lie in (0, 2]");
    double s = 1.0;
    for (double t : model.ma) s += t;
    if (std::abs(s) < 1e-8) throw DomainError("moving-average part vanishes at frequency 0");
}

double f_star(const SpectralModel& model, double lambda) {
    return model.scale * std::norm(theta_at(model.ma, lambda));
}

double f_star_at_zero(const SpectralModel& model) { return f_star(model, 0.0); }

double density_at(const SpectralModel& model, double lambda) {
    if (lambda == 0.0) throw SingularityError("spectral density diverges at lambda = 0");
    if (!(lambda > -kPi && lambda <= kPi)) throw DomainError("lambda outside (-pi, pi]");
    double mod = std::abs(2.0 * std::sin(0.5 * lambda));
    return std::pow(mod, -2.0 * model.params.d) * f_star(model, lambda);
}

double model_variance(const SpectralModel& model) { return mixed_autocov(model, 0)(0); }

Eigen::VectorXd autocov_X(const SpectralModel& model, int L) {
    validate(model);
    if (L < 0) throw DomainError("lag cap must be nonnegative");
    Eigen::VectorXd g = mixed_autocov(model, L);
    return g / g(0);
}

Eigen::VectorXd cell_masses(const SpectralModel& model, int log2_grid) {
    validate(model);
    if (log2_grid < 4 || log2_grid > 26) throw DomainError("grid exponent outside [4, 26]");
    const long n = 1L << log2_grid;
    const double h = 2.0 * kPi / static_cast<double>(n);
    Eigen::VectorXd w(n);
    w(0) = 2.0 * integrate_density(model, 0.0, 0.5 * h);
    for (long m = 1; m < n / 2; ++m) {
        double v = integrate_density(model, (m - 0.5) * h, (m + 0.5) * h);
        w(m) = v;
        w(n - m) = v;
    }
    w(n / 2) = 2.0 * integrate_density(model, kPi - 0.5 * h, kPi);
    return w;
}

Eigen::VectorXd convolution_masses(const Eigen::VectorXd& masses, int q) {
    if (q < 1) throw DomainError("convolution order must be >= 1");
    if (q == 1) return masses;
    auto W = detail::fft_forward(detail::to_complex(masses.data(), masses.size()));
    for (auto& z : W) z = std::pow(z, q);
    auto c = detail::fft_inverse(W);
    Eigen::VectorXd out(masses.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = c[i].real();
    return out;
}

Eigen::VectorXd lag_transform(const Eigen::VectorXd& masses, int L) {
    const Eigen::Index n = masses.size();
    if (L >= n / 2) throw DomainError("lag cap exceeds half the grid");
    auto c = detail::fft_inverse(detail::to_complex(masses.data(), n));
    Eigen::VectorXd out(L + 1);
    for (int k = 0; k <= L; ++k) out(k) = c[k].real() * static_cast<double>(n);
    return out;
}

Eigen::VectorXd autocov_X_fourier(const SpectralModel& model, int L, int log2_grid) {
    Eigen::VectorXd fine = cell_masses(model, log2_grid);
    double coarse_total = cell_masses(model, log2_grid - 1).sum();
    double total = fine.sum();
    if (std::abs(total - coarse_total) > 1e-3 * total) {
        std::ostringstream os;
        os << "total spectral mass " << coarse_total << " -> " << total << " under refinement";
        throw ResolutionError(os.str());
    }
    Eigen::VectorXd r = lag_transform(fine, L);
    return r / r(0);
}

Eigen::VectorXd autocov_transformed(const HermiteExpansion& e, const Eigen::VectorXd& rho) {
    if (rho.size() == 0 || std::abs(rho(0) - 1.0) > 1e-10)
        throw DomainError("autocorrelation must satisfy rho(0) = 1");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(rho.size());
    for (const auto& [q, c] : e.coeffs) {
        double a = c * c * std::exp(-std::lgamma(q + 1.0));
        out.array() += a * rho.array().pow(q);
    }
    return out;
}

double riesz_constant(double a, double b) {
    if (!(a > 0 && a < 1 && b > 0 && b < 1 && a + b > 1))
        throw DomainError("Riesz constant needs 0 < a, b < 1 and a + b > 1");
    auto beta = [](double x, double y) { return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y)); };
    return beta(1 - a, a + b - 1) + beta(1 - b, a + b - 1) + beta(1 - a, 1 - b);
}

double power_convolution_constant(int q, double d) {
    if (q < 1) throw DomainError("q must be >= 1");
    if (!(delta(q, d) > 0.0)) throw LongMemoryError("q-fold convolution of |x|^{-2d} diverges");
    double c = 1.0;
    for (int k = 2; k <= q; ++k) c *= riesz_constant(2.0 * delta(k - 1, d), 2.0 * d);
    return c;
}

GeneralizedDensity::GeneralizedDensity(const HermiteExpansion& e, const SpectralModel& model,
                                       int log2_grid)
    : model_(model), n_(1 << log2_grid) {
    validate(model);
    const double d = model.params.d;
    HermiteRank rank = hermite_rank(e);
    q0_ = rank.q0;
    if (!(delta(q0_, d) > 0.0)) throw LongMemoryError("Hermite rank violates q0 < 1/(1-2d)");
    delta0_ = delta(q0_, d);
    d0_ = model.params.K + delta0_;

    SpectralModel unit = model;
    unit.scale = model.scale / model_variance(model);
    fstar0_ = e.coeffs.at(q0_) * e.coeffs.at(q0_) * std::exp(-std::lgamma(q0_ + 1.0)) *
              power_convolution_constant(q0_, d) * std::pow(f_star_at_zero(unit), q0_);

    const double h = 2.0 * kPi / n_;
    values_ = Eigen::VectorXd::Zero(n_ / 2 + 1);

    Eigen::VectorXd w = cell_masses(unit, log2_grid);
    auto W = detail::fft_forward(detail::to_complex(w.data(), w.size()));
    std::map<int, double> remainder;
    for (const auto& [q, c] : e.coeffs) {
        double a = c * c * std::exp(-std::lgamma(q + 1.0));
        if (!(delta(q, d) > 0.0)) {
            remainder[q] = a;
            continue;
        }
        detail::cvec Wq(W.size());
        for (std::size_t i = 0; i < W.size(); ++i) Wq[i] = std::pow(W[i], q);
        auto cq = detail::fft_inverse(Wq);
        for (int m = 0; m <= n_ / 2; ++m) values_(m) += a * cq[m].real() / h;
    }
    if (!remainder.empty()) {
        Eigen::VectorXd rho = autocov_X(unit, n_ / 2);
        Eigen::VectorXd g = Eigen::VectorXd::Zero(n_ / 2 + 1);
        for (const auto& [q, a] : remainder) g.array() += a * rho.array().pow(q);
        detail::cvec v(n_);
        for (int k = 0; k <= n_ / 2; ++k) v[k] = g(k);
        for (int k = 1; k < n_ / 2; ++k) v[n_ - k] = g(k);
        auto s = detail::fft_forward(v);
        for (int m = 0; m <= n_ / 2; ++m) values_(m) += s[m].real() / (2.0 * kPi);
    }
}

double GeneralizedDensity::f_G(double lambda) const {
    if (lambda == 0.0) throw SingularityError("generalized density diverges at lambda = 0");
    double a = std::abs(lambda);
    if (a > kPi) throw DomainError("lambda outside (-pi, pi]");
    const double h = 2.0 * kPi / n_;
    double x = a / h;
    long m = static_cast<long>(std::floor(x));
    if (m < 1) m = 1;
    if (m >= n_ / 2) m = n_ / 2 - 1;
    double x0 = static_cast<double>(m), x1 = x0 + 1.0;
    double y0 = values_(m), y1 = values_(m + 1);
    if (y0 > 0.0 && y1 > 0.0) {
        double t = (std::log(x) - std::log(x0)) / (std::log(x1) - std::log(x0));
        return std::exp(std::log(y0) + t * (std::log(y1) - std::log(y0)));
    }
    return y0 + (x - x0) * (y1 - y0);
}

double GeneralizedDensity::f_GK(double lambda) const {
    double mod = std::abs(2.0 * std::sin(0.5 * lambda));
    return std::pow(mod, -2.0 * model_.params.K) * f_G(lambda);
}

double GeneralizedDensity::f_Gstar(double lambda) const {
    double mod = std::abs(2.0 * std::sin(0.5 * lambda));
    return std::pow(mod, 2.0 * delta0_) * f_G(lambda);
}

Eigen::VectorXd GeneralizedDensity::grid_frequencies() const {
    return Eigen::VectorXd::LinSpaced(n_ / 2 + 1, 0.0, kPi);
}

std::pair<double, double> generalized_density(const HermiteExpansion& e, const SpectralModel& model,
                                              double lambda, int log2_grid) {
    if (lambda == 0.0) throw SingularityError("generalized density diverges at lambda = 0");
    GeneralizedDensity g(e, model, log2_grid);
    return {g.f_GK(lambda), g.f_Gstar_at_zero()};
}

}  // namespace scalolab
