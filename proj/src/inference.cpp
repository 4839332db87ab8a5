#include "scalolab/inference.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "quadrature.hpp"
#include "scalolab/errors.hpp"
#include "scalolab/stats.hpp"

namespace scalolab {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

// Fast evaluation of the limit transfer function. Factors H(w)/sqrt2 with
// w below kTailW are summed through the cumulants of h/sqrt2.
class LimitTransfer {
public:
    explicit LimitTransfer(const FilterBank& bank) {
        const double r2 = std::sqrt(2.0);
        lo_ = bank.lowpass / r2;
        hi_ = bank.highpass / r2;
        std::vector<double> mu(kOrder + 1, 0.0);
        for (Eigen::Index k = 0; k < lo_.size(); ++k)
            for (int r = 0; r <= kOrder; ++r) mu[r] += lo_(k) * std::pow(static_cast<double>(k), r);
        kappa_.assign(kOrder + 1, 0.0);
        for (int n = 1; n <= kOrder; ++n) {
            double v = mu[n];
            for (int m = 1; m < n; ++m) v -= binom(n - 1, m - 1) * kappa_[m] * mu[n - m];
            kappa_[n] = v;
        }
    }

    cplx operator()(double xi) const {
        cplx s = poly(hi_, 0.5 * xi);
        double w = 0.25 * xi;
        while (std::abs(w) >= kTailW) {
            s *= poly(lo_, w);
            w *= 0.5;
        }
        // log prod_{i >= 0} H(w 2^{-i}) / sqrt2 = sum_r kappa_r (-i w)^r / (r! (1 - 2^{-r}))
        cplx acc(0.0, 0.0), miw(0.0, -w), pw(1.0, 0.0);
        double fact = 1.0;
        for (int r = 1; r <= kOrder; ++r) {
            pw *= miw;
            fact *= r;
            acc += kappa_[r] * pw / (fact * (1.0 - std::ldexp(1.0, -r)));
        }
        return s * std::exp(acc);
    }

private:
    static constexpr int kOrder = 6;
    static constexpr double kTailW = 1e-3;

    static double binom(int n, int k) {
        double r = 1.0;
        for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    }

    static cplx poly(const Eigen::VectorXd& h, double w) {
        const cplx z = std::polar(1.0, -w);
        cplx s(h(h.size() - 1), 0.0);
        for (Eigen::Index k = h.size() - 2; k >= 0; --k) s = s * z + h(k);
        return s;
    }

    Eigen::VectorXd lo_, hi_;
    std::vector<double> kappa_;
};

double band_integral(const std::function<double(double)>& f, double a, double b, int chunks,
                     const detail::GaussLegendre& gl) {
    double h = (b - a) / chunks, total = 0.0;
    for (int c = 0; c < chunks; ++c) {
        double lo = a + c * h, mid = lo + 0.5 * h;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) total += gl.weights[i] * f(mid + 0.5 * h * gl.nodes[i]);
    }
    return 0.5 * h * total;
}

// int_0^inf f over [0, 2 pi] split dyadically towards 0 and dyadic bands beyond,
// with a geometric tail estimate.
double half_line_integral(const std::function<double(double)>& f, const detail::GaussLegendre& gl) {
    double total = 0.0;
    for (int k = 1; k <= 60; ++k) total += band_integral(f, 2.0 * kPi * std::ldexp(1.0, -k),
                                                         2.0 * kPi * std::ldexp(1.0, -k + 1), 1, gl);
    double prev = 0.0;
    for (int m = 0; m <= 20; ++m) {
        double a = 2.0 * kPi * std::ldexp(1.0, m);
        double band = band_integral(f, a, 2.0 * a, 1 << m, gl);
        total += band;
        if (m >= 3 && band < 1e-10 * total) {
            double r = band / prev;
            if (r >= 1.0) throw QuadratureError("tail bands do not decay");
            return total + band * r / (1.0 - r);
        }
        prev = band;
    }
    throw QuadratureError("limit-norm integral did not converge within 2^20 periods");
}

// I_pair = int_{-pi}^{pi} |sum_p |lambda_p|^{-2 delta} a_k(lambda_p) conj(a_k'(lambda_p))|^2 d lambda
// for all requested pairs, with the p-series truncated adaptively.
std::vector<double> folded_integrals(const std::function<void(double, std::vector<cplx>&)>& values, int nfun,
                                     const std::vector<std::pair<int, int>>& pairs, double delta, int panels,
                                     long* used_P = nullptr) {
    static const detail::GaussLegendre gl = detail::gauss_legendre(16);
    std::vector<double> nodes, weights;
    const double h = kPi / panels;
    for (int c = 0; c < panels; ++c)
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            nodes.push_back(h * (c + 0.5 + 0.5 * gl.nodes[i]));
            weights.push_back(0.5 * h * gl.weights[i]);
        }
    const std::size_t nn = nodes.size(), np = pairs.size();
    std::vector<cplx> phi(nn * np, cplx(0.0, 0.0));
    std::vector<cplx> buf(nfun);
    auto add_shell = [&](long p_lo, long p_hi) {
        for (std::size_t i = 0; i < nn; ++i) {
            for (long p = p_lo; p <= p_hi; ++p) {
                for (int sign : {1, -1}) {
                    if (p == 0 && sign < 0) continue;
                    double lp = nodes[i] + 2.0 * kPi * sign * p;
                    double wgt = std::pow(std::abs(lp), -2.0 * delta);
                    values(lp, buf);
                    for (std::size_t q = 0; q < np; ++q)
                        phi[i * np + q] += wgt * buf[pairs[q].first] * std::conj(buf[pairs[q].second]);
                }
            }
        }
    };
    auto integrate = [&] {
        std::vector<double> out(np, 0.0);
        for (std::size_t i = 0; i < nn; ++i)
            for (std::size_t q = 0; q < np; ++q) out[q] += 2.0 * weights[i] * std::norm(phi[i * np + q]);
        return out;
    };
    long P = 32;
    add_shell(0, P);
    std::vector<double> last = integrate();
    for (; P < (1L << 16);) {
        add_shell(P + 1, 2 * P);
        P *= 2;
        std::vector<double> now = integrate();
        double worst = 0.0;
        for (std::size_t q = 0; q < np; ++q)
            worst = std::max(worst, std::abs(now[q] - last[q]) / std::max(std::abs(now[q]), 1e-300));
        last = std::move(now);
        if (worst < 1e-8) {
            if (used_P) *used_P = P;
            return last;
        }
    }
    throw QuadratureError("aliased series did not reach 1e-8 relative increment by |p| = 65536");
}

std::vector<double> folded_checked(const std::function<void(double, std::vector<cplx>&)>& values, int nfun,
                                   const std::vector<std::pair<int, int>>& pairs, double delta) {
    std::vector<double> coarse = folded_integrals(values, nfun, pairs, delta, 8);
    std::vector<double> fine = folded_integrals(values, nfun, pairs, delta, 16);
    for (std::size_t q = 0; q < pairs.size(); ++q) {
        if (std::abs(fine[q] - coarse[q]) > 1e-6 * std::max(std::abs(fine[q]), 1e-300)) {
            std::ostringstream os;
            os << "frequency quadrature refinement moved an integral from " << coarse[q] << " to " << fine[q];
            throw QuadratureError(os.str());
        }
    }
    return fine;
}

Eigen::VectorXd cumulate(Eigen::VectorXd g, int K) {
    for (int r = 0; r < K; ++r) {
        for (Eigen::Index i = 1; i < g.size(); ++i) g(i) += g(i - 1);
        if (std::abs(g(g.size() - 1)) > 1e-9 * g.cwiseAbs().maxCoeff())
            throw ValidationError("filter has fewer vanishing moments than the integration order");
        g.conservativeResize(g.size() - 1);
    }
    return g;
}

std::vector<double> linear_convolution(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const std::size_t n = a.size() + b.size() - 1;
    if (static_cast<double>(a.size()) * static_cast<double>(b.size()) < 4e6) {
        std::vector<double> out(n, 0.0);
        for (Eigen::Index i = 0; i < a.size(); ++i)
            for (Eigen::Index k = 0; k < b.size(); ++k) out[i + k] += a(i) * b(k);
        return out;
    }
    std::size_t m = 1;
    while (m < n) m <<= 1;
    detail::cvec fa(m, 0.0), fb(m, 0.0);
    for (Eigen::Index i = 0; i < a.size(); ++i) fa[i] = a(i);
    for (Eigen::Index i = 0; i < b.size(); ++i) fb[i] = b(i);
    fa = detail::fft_forward(fa);
    fb = detail::fft_forward(fb);
    for (std::size_t i = 0; i < m; ++i) fa[i] *= fb[i];
    fa = detail::fft_inverse(fa);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = fa[i].real();
    return out;
}

}  // namespace

RegressionWeights regression_weights(int p) {
    if (p < 1) throw DomainError("regression needs p >= 1 (at least two scales)");
    const double mid = 0.5 * p;
    double ss = 0.0;
    for (int i = 0; i <= p; ++i) ss += (i - mid) * (i - mid);
    RegressionWeights r;
    for (int i = 0; i <= p; ++i) r.w.push_back((i - mid) / ss / (2.0 * std::numbers::ln2));
    return r;
}

double regress_log_scalogram(const RegressionWeights& weights, const std::vector<double>& sigma2) {
    if (sigma2.size() != weights.w.size()) throw DomainError("weights and scalogram sizes differ");
    double s = 0.0;
    for (std::size_t i = 0; i < sigma2.size(); ++i) {
        if (!(sigma2[i] > 0.0)) {
            std::ostringstream os;
            os << "sigma2 = " << sigma2[i] << " at regression index " << i;
            throw DegenerateScalogramError(os.str());
        }
        s += weights.w[i] * std::log(sigma2[i]);
    }
    return s;
}

EstimationReport estimate_d0(const Eigen::VectorXd& series, const FilterBank& bank, int j, int p,
                             std::optional<double> d, std::optional<double> zeta) {
    if (j < 1 || j + p > bank.jmax) throw ScaleError("estimator scales outside the filter bank");
    EstimationReport r;
    r.j = j;
    r.p = p;
    RegressionWeights w = regression_weights(p);
    r.weights = w.w;
    for (int i = 0; i <= p; ++i) {
        ScalogramSummary s = scalogram(series, bank, j + i);
        r.scales.push_back(j + i);
        r.n.push_back(s.n);
        r.sigma2.push_back(s.sigma2);
    }
    r.d0_hat = regress_log_scalogram(w, r.sigma2);
    const double nj = std::ldexp(static_cast<double>(series.size()), -j);
    if (d) {
        r.consistency_only = false;
        r.rate_stochastic = std::pow(nj, -(0.5 - *d));
    }
    if (zeta) {
        r.consistency_only = false;
        r.rate_bias = std::exp2(-*zeta * j);
    }
    return r;
}

double weighted_limit_norm(const FilterBank& bank, double a) {
    if (!(a < bank.M + 0.5)) throw NonIntegrableError("too few vanishing moments for the weighted limit norm");
    LimitTransfer g(bank);
    auto f = [&](double s) { return std::norm(g(s)) * std::pow(s, -2.0 * a); };
    static const detail::GaussLegendre gl16 = detail::gauss_legendre(16);
    static const detail::GaussLegendre gl8 = detail::gauss_legendre(12);
    double fine = half_line_integral(f, gl16);
    double coarse = half_line_integral(f, gl8);
    if (std::abs(fine - coarse) > 1e-6 * fine) {
        std::ostringstream os;
        os.precision(12);
        os << "limit norm refinement disagreement " << coarse << " vs " << fine;
        throw QuadratureError(os.str());
    }
    return 2.0 * fine;
}

double L_integral(const FilterBank& bank, int p, double d, int K) {
    if (p < 1) throw DomainError("L_p needs p >= 1");
    double dp = delta(p, d);
    if (!(dp > 0.0)) throw NonIntegrableError("L_p diverges when delta(p) <= 0");
    return power_convolution_constant(p, d) * weighted_limit_norm(bank, K + dp);
}

Eigen::MatrixXd cov_Q(const FilterBank& bank, double d, int K, int m) {
    if (m < 1) throw DomainError("cov_Q needs at least one scale");
    const double dl = d + K;
    LimitTransfer g(bank);
    auto values = [&](double xi, std::vector<cplx>& out) {
        for (int s = 0; s < m; ++s) out[s] = g(std::ldexp(xi, s));
    };
    std::vector<std::pair<int, int>> pairs;
    for (int s = 0; s < m; ++s) pairs.emplace_back(s, 0);
    std::vector<double> I = folded_checked(values, m, pairs, dl);
    const double L1 = weighted_limit_norm(bank, dl);
    Eigen::MatrixXd C(m, m);
    for (int u = 0; u < m; ++u)
        for (int v = 0; v < m; ++v) {
            int s = std::abs(u - v), hi = std::max(u, v);
            C(u, v) = 4.0 * kPi * std::exp2(-hi + s * (1.0 - 2.0 * dl)) * I[s] / (L1 * L1);
        }
    return C;
}

Eigen::MatrixXd gamma_matrix(const FilterBank& bank, double d, int K, int m) {
    if (m < 1 || m > 6) throw DomainError("gamma_matrix supports 1 <= m <= 6");
    const int nl = (1 << m) - 1;
    LimitTransfer g(bank);
    auto values = [&](double xi, std::vector<cplx>& out) {
        for (int l = 1; l <= nl; ++l) {
            int u = 0;
            while ((2 << u) <= l) ++u;
            int v = l - (1 << u);
            double y = std::ldexp(xi, -u);
            out[l - 1] = std::exp2(-0.5 * u) * std::polar(1.0, y * v) * g(y);
        }
    };
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < nl; ++a)
        for (int b = a; b < nl; ++b) pairs.emplace_back(a, b);
    std::vector<double> I = folded_checked(values, nl, pairs, d + K);
    Eigen::MatrixXd G(nl, nl);
    for (std::size_t q = 0; q < pairs.size(); ++q) {
        G(pairs[q].first, pairs[q].second) = 4.0 * kPi * I[q];
        G(pairs[q].second, pairs[q].first) = 4.0 * kPi * I[q];
    }
    return G;
}

LimitLaw limit_constants(const FilterBank& bank, double d, int K, int q0, int p) {
    if (q0 < 1) throw DomainError("Hermite rank must be >= 1");
    if (p < 1) throw DomainError("p must be >= 1");
    LimitLaw law;
    law.q0 = q0;
    law.d = d;
    law.K = K;
    law.p = p;
    if (q0 == 1) {
        law.kind = LimitKind::gaussian;
        law.L_q0 = weighted_limit_norm(bank, d + K);
        law.cov = cov_Q(bank, d, K, p + 1);
        RegressionWeights w = regression_weights(p);
        double v = 0.0;
        for (int i = 0; i <= p; ++i)
            for (int k = 0; k <= p; ++k) v += w.w[i] * w.w[k] * law.cov(p - i, p - k);
        law.d0_variance = v;
    } else {
        law.kind = LimitKind::rosenblatt;
        law.L_q0 = L_integral(bank, q0, d, K);
        law.L_q0m1 = L_integral(bank, q0 - 1, d, K);
        law.rosenblatt_scale = q0 * law.L_q0m1 / law.L_q0;
        law.rosenblatt_scale_theorem = law.L_q0m1 / (std::tgamma(q0 + 1.0) * law.L_q0);
    }
    return law;
}

double rosenblatt_loading(const LimitLaw& law, const std::vector<long>& n, double scale) {
    if (static_cast<int>(n.size()) != law.p + 1) throw DomainError("need one count per estimator scale");
    RegressionWeights w = regression_weights(law.p);
    double a = 0.0;
    for (int i = 0; i <= law.p; ++i) a += w.w[i] * std::pow(static_cast<double>(n[i]), 2.0 * law.d - 1.0);
    return scale * a;
}

double WaveletCrossCov::at(long m) const {
    long i = m + offset;
    if (i < 0 || i >= values.size()) throw DomainError("lag outside the computed cross-covariance");
    return values(i);
}

WaveletCrossCov wavelet_cross_covariance(const FilterBank& bank, int a, int b, int K,
                                         const Eigen::VectorXd& gamma, long max_lag) {
    Eigen::VectorXd ga = cumulate(bank.filter(a), K);
    Eigen::VectorXd gb = cumulate(bank.filter(b), K);
    // r(tau) = sum_s ga(s) gb(s - tau), tau = -(Lb-1) .. La-1
    std::vector<double> r = linear_convolution(ga, gb.reverse());
    const long rshift = gb.size() - 1;
    const long span = max_lag + static_cast<long>(r.size());
    if (gamma.size() <= span) throw DomainError("autocovariance too short for the requested lags");
    // c(m) = sum_tau r(tau) gamma(|m - tau|)
    Eigen::VectorXd gam2(2 * span + 1);
    for (long t = -span; t <= span; ++t) gam2(t + span) = gamma(std::abs(t));
    Eigen::VectorXd rv = Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
    std::vector<double> conv = linear_convolution(rv, gam2);
    // conv[i + k] with tau = i - rshift and lag index k - span: m = tau + (k - span)
    WaveletCrossCov out;
    out.offset = max_lag;
    out.values.resize(2 * max_lag + 1);
    for (long m = -max_lag; m <= max_lag; ++m) out.values(m + max_lag) = conv[m + rshift + span];
    return out;
}

double wavelet_variance(const FilterBank& bank, int j, int K, const Eigen::VectorXd& gamma) {
    return wavelet_cross_covariance(bank, j, j, K, gamma, 0).at(0);
}

double gaussian_scalogram_covariance(const FilterBank& bank, long N, int a, int b, int K,
                                     const Eigen::VectorXd& gamma) {
    if (a < b) std::swap(a, b);  // a coarser
    const long na = n_coeffs(N, bank.T, a), nb = n_coeffs(N, bank.T, b);
    const long ka = first_coefficient(bank, a), kb = first_coefficient(bank, b);
    const int s = a - b;
    // lag m = 2^b (2^s k - k'); t = 2^s k - k' ranges over
    const long tmin = (ka << s) - (kb + nb - 1), tmax = ((ka + na - 1) << s) - kb;
    std::vector<long> count(tmax - tmin + 2, 0);
    for (long k = ka; k < ka + na; ++k) {
        long hi = (k << s) - kb, lo = (k << s) - (kb + nb - 1);
        count[lo - tmin] += 1;
        count[hi - tmin + 1] -= 1;
    }
    const long max_lag = std::max(std::abs(tmin), std::abs(tmax)) << b;
    WaveletCrossCov c = wavelet_cross_covariance(bank, a, b, K, gamma, max_lag);
    double acc = 0.0;
    long run = 0;
    for (long t = tmin; t <= tmax; ++t) {
        run += count[t - tmin];
        if (run == 0) continue;
        double v = c.at(t << b);
        acc += static_cast<double>(run) * v * v;
    }
    return 2.0 * acc / (static_cast<double>(na) * static_cast<double>(nb));
}

std::pair<double, int> split_d0(double d0_star, int q0) {
    if (q0 < 1) throw DomainError("Hermite rank must be >= 1");
    if (!(d0_star > 0.0)) throw HypothesisError("d0* must be positive");
    int K = static_cast<int>(std::floor(d0_star));
    double dl = d0_star - K;
    if (!(dl > kBoundaryTol && dl < 0.5 - kBoundaryTol)) {
        std::ostringstream os;
        os << "d0* = " << d0_star << " has fractional part outside (0, 1/2)";
        throw HypothesisError(os.str());
    }
    double d = (dl + 0.5 * (q0 - 1)) / q0;
    if (on_boundary_lattice(d)) {
        std::ostringstream os;
        os << "d* = " << d << " lies on the boundary lattice 1/2 - 1/(2q)";
        throw HypothesisError(os.str());
    }
    return {d, K};
}

TestPlan plan_test(const FilterBank& bank, long N, int j, int p, double d0_star, double alpha, int K_bar,
                   const HermiteExpansion& G, double beta_smooth, const QuantileOptions& qopt) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
    if (K_bar < 0) throw DomainError("K_bar must be >= 0");
    if (bank.M <= K_bar) {
        std::ostringstream os;
        os << "M = " << bank.M << " must exceed K_bar = " << K_bar;
        throw ValidationError(os.str());
    }
    if (!(d0_star < K_bar + 0.5)) throw HypothesisError("d0* outside (0, K_bar + 1/2)");
    TestPlan plan;
    plan.d0_star = d0_star;
    plan.alpha = alpha;
    plan.K_bar = K_bar;
    plan.N = N;
    plan.j = j;
    plan.p = p;
    HermiteRank rank = hermite_rank(G);
    plan.q0 = rank.q0;
    std::tie(plan.d_star, plan.K_star) = split_d0(d0_star, plan.q0);
    require_bank(bank, plan.K_star + delta(plan.q0, plan.d_star));
    RankProfile profile = rank_profile(nonzero_indices(G), plan.d_star);
    plan.nu_c_star = critical_exponent(profile, plan.d_star);
    plan.zeta = zeta_exponent(beta_smooth, plan.d_star, plan.q0, rank.q1);
    for (int i = 0; i <= p; ++i) plan.n.push_back(n_coeffs(N, bank.T, j + i));
    plan.law = limit_constants(bank, plan.d_star, plan.K_star, plan.q0, p);

    const double nj = std::ldexp(static_cast<double>(N), -j);
    plan.u_N = plan.q0 == 1 ? std::sqrt(nj) : std::pow(nj, 1.0 - 2.0 * plan.d_star);
    plan.reduction_ratio =
        plan.nu_c_star.is_infinite() ? 0.0 : nj / std::exp2(j * plan.nu_c_star.value());
    plan.bias_term = std::exp2(-plan.zeta * j) * plan.u_N;

    if (alpha >= 1.0) {
        plan.s_N = 0.0;
    } else if (plan.q0 == 1) {
        const double var = plan.law.d0_variance / static_cast<double>(plan.n.back());
        plan.s_N = normal_quantile(1.0 - 0.5 * alpha) * std::sqrt(var);
    } else {
        const double A = rosenblatt_loading(plan.law, plan.n, plan.law.rosenblatt_scale);
        QuantileCache local;
        QuantileCache& cache = qopt.cache ? *qopt.cache : local;
        const double prob = A >= 0.0 ? 1.0 - 0.5 * alpha : 0.5 * alpha;
        plan.quantile = cache.quantile(plan.d_star, prob, qopt.n_internal, qopt.reps, qopt.seed);
        plan.s_N = A * plan.quantile->quantile;
    }
    return plan;
}

TestReport run_test(const Eigen::VectorXd& series, const FilterBank& bank, const TestPlan& plan) {
    if (series.size() != plan.N) throw DomainError("series length differs from the planned N");
    TestReport r;
    r.plan = plan;
    r.estimate = estimate_d0(series, bank, plan.j, plan.p, plan.d_star, plan.zeta);
    r.statistic = std::abs(r.estimate.d0_hat - plan.d0_star);
    r.reject = r.statistic > plan.s_N;
    return r;
}

TestReport run_test(const Eigen::VectorXd& series, const FilterBank& bank, int j, int p, double d0_star,
                    double alpha, int K_bar, const HermiteExpansion& G, double beta_smooth,
                    const QuantileOptions& qopt) {
    TestPlan plan = plan_test(bank, series.size(), j, p, d0_star, alpha, K_bar, G, beta_smooth, qopt);
    return run_test(series, bank, plan);
}

}  // namespace scalolab
