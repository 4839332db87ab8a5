#include "scalolab/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/Polynomials>

#include "scalolab/errors.hpp"

namespace scalolab {

namespace {

constexpr double kPi = std::numbers::pi;

std::complex<double> poly_transfer(const Eigen::VectorXd& h, double w) {
    std::complex<double> s(0.0, 0.0);
    for (Eigen::Index k = 0; k < h.size(); ++k) s += h(k) * std::polar(1.0, -w * static_cast<double>(k));
    return s;
}

Eigen::VectorXd convolve(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(a.size() + b.size() - 1);
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i, b.size()) += a(i) * b;
    return out;
}

Eigen::VectorXd upsample(const Eigen::VectorXd& a, long factor) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero((a.size() - 1) * factor + 1);
    for (Eigen::Index i = 0; i < a.size(); ++i) out(i * factor) = a(i);
    return out;
}

FilterValidation validate_bank(const FilterBank& b) {
    FilterValidation v;
    for (int j = 1; j <= b.jmax; ++j)
        v.support_A = std::max(v.support_A, static_cast<double>(b.filter_length(j) - 1) / std::ldexp(1.0, j));
    v.w1 = std::isfinite(v.support_A);

    // Envelope: octave maxima of |g_J(lambda)| / gamma^{1/2} against gamma lambda.
    const int J = b.jmax;
    const double gam = std::ldexp(1.0, J);
    std::vector<double> lx, ly;
    for (double x = 8.0 * kPi; 2.0 * x <= gam * kPi; x *= 2.0) {
        double best = 0.0;
        for (int i = 0; i < 256; ++i) {
            double xi = x * std::pow(2.0, i / 256.0);
            best = std::max(best, std::abs(b.transfer(J, xi / gam)) / std::sqrt(gam));
        }
        lx.push_back(std::log(x));
        ly.push_back(std::log(best));
    }
    if (lx.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            mx += lx[i];
            my += ly[i];
        }
        mx /= lx.size();
        my /= lx.size();
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxy += (lx[i] - mx) * (ly[i] - my);
            sxx += (lx[i] - mx) * (lx[i] - mx);
        }
        v.envelope_alpha = -sxy / sxx;
        // C for the fitted alpha across all scales.
        for (int j = 1; j <= J; ++j) {
            double g = std::ldexp(1.0, j);
            for (int i = 1; i <= 512; ++i) {
                double lam = kPi * i / 512.0;
                double env = std::sqrt(g) * std::pow(g * lam, b.M) /
                             std::pow(1.0 + g * lam, v.envelope_alpha + b.M);
                v.envelope_C = std::max(v.envelope_C, std::abs(b.transfer(j, lam)) / env);
            }
        }
        v.w2 = v.envelope_alpha >= 1.05;
    } else {
        v.note += "too few scales for the envelope fit; ";
    }

    for (int j = std::max(1, J - 3); j < J; ++j) {
        double gap = 0.0;
        double gj = std::ldexp(1.0, j), gj1 = std::ldexp(1.0, j + 1);
        for (int i = 0; i <= 2000; ++i) {
            double xi = -8.0 * kPi + 16.0 * kPi * i / 2000.0;
            double a = std::abs(b.transfer(j, xi / gj)) / std::sqrt(gj);
            double c = std::abs(b.transfer(j + 1, xi / gj1)) / std::sqrt(gj1);
            gap = std::max(gap, std::abs(a - c));
        }
        v.w3_gaps.push_back(gap);
    }
    if (v.w3_gaps.size() >= 2) {
        v.w3 = true;
        for (std::size_t i = 1; i < v.w3_gaps.size(); ++i)
            v.w3 = v.w3 && (v.w3_gaps[i] < v.w3_gaps[i - 1] || v.w3_gaps[i] < 1e-12);
    } else {
        v.note += "too few scales for the convergence check; ";
    }
    v.note += "convergence checked on the modulus only";
    return v;
}

}  // namespace

const Eigen::VectorXd& FilterBank::filter(int j) const {
    if (j < 1 || j > jmax) {
        std::ostringstream os;
        os << "scale " << j << " outside [1, " << jmax << "]";
        throw ScaleError(os.str());
    }
    return g[j];
}

long FilterBank::filter_length(int j) const { return filter(j).size(); }

std::complex<double> FilterBank::transfer(int j, double lambda) const {
    if (j < 1) throw ScaleError("scale must be >= 1");
    std::complex<double> s = poly_transfer(highpass, std::ldexp(lambda, j - 1));
    for (int i = 0; i <= j - 2; ++i) s *= poly_transfer(lowpass, std::ldexp(lambda, i));
    return s;
}

std::complex<double> FilterBank::limit_transfer(double xi) const {
    const double r2 = std::sqrt(2.0);
    std::complex<double> s = poly_transfer(highpass, 0.5 * xi) / r2;
    for (int i = 2; i < 200; ++i) {
        double w = std::ldexp(xi, -i);
        if (std::abs(w) < 1e-13) break;
        s *= poly_transfer(lowpass, w) / r2;
    }
    return s;
}

Eigen::VectorXd daubechies_lowpass(int M) {
    if (M < 1 || M > 20) throw DomainError("Daubechies order must lie in [1, 20]");
    // P(y) = sum_k C(M-1+k, k) y^k
    Eigen::VectorXd pc(M);
    for (int k = 0; k < M; ++k)
        pc(k) = std::round(std::exp(std::lgamma(M + k) - std::lgamma(k + 1.0) - std::lgamma(M)));
    std::vector<std::complex<double>> poly{1.0};
    auto mul = [&](std::complex<double> root_neg, std::complex<double> lead) {
        std::vector<std::complex<double>> out(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            out[i] += root_neg * poly[i];
            out[i + 1] += lead * poly[i];
        }
        poly = std::move(out);
    };
    for (int k = 0; k < M; ++k) mul(1.0, 1.0);  // (1 + z)^M
    if (M > 1) {
        Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
        solver.compute(pc);
        for (Eigen::Index i = 0; i < solver.roots().size(); ++i) {
            std::complex<double> y = solver.roots()(i);
            std::complex<double> bq = 2.0 - 4.0 * y;
            std::complex<double> disc = std::sqrt(bq * bq - 4.0);
            std::complex<double> z = 0.5 * (bq + disc);
            if (std::abs(z) > 1.0) z = 0.5 * (bq - disc);
            mul(-z, 1.0);
        }
    }
    Eigen::VectorXd h(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) h(poly.size() - 1 - i) = poly[i].real();
    h *= std::sqrt(2.0) / h.sum();
    return h;
}

FilterBank build_bank(const std::string& family, int M, int jmax) {
    if (family == "haar") {
        if (M != 1) throw DomainError("haar family has M = 1");
    } else if (family != "daubechies") {
        throw DomainError("unknown filter family '" + family + "'");
    }
    if (jmax < 1 || jmax > 24) throw DomainError("jmax must lie in [1, 24]");
    FilterBank b;
    b.family = family;
    b.M = M;
    b.T = 2 * M - 1;
    b.jmax = jmax;
    b.lowpass = daubechies_lowpass(M);
    const Eigen::Index L = b.lowpass.size();
    b.highpass.resize(L);
    for (Eigen::Index k = 0; k < L; ++k) b.highpass(k) = ((k % 2) ? -1.0 : 1.0) * b.lowpass(L - 1 - k);

    b.g.assign(jmax + 1, Eigen::VectorXd());
    Eigen::VectorXd low = Eigen::VectorXd::Ones(1);
    for (int j = 1; j <= jmax; ++j) {
        long f = 1L << (j - 1);
        b.g[j] = convolve(low, upsample(b.highpass, f));
        low = convolve(low, upsample(b.lowpass, f));
    }
    b.validation = validate_bank(b);
    if (!b.validation.w1) throw ValidationError("W-1 (finite support) violated");
    return b;
}

void require_bank(const FilterBank& bank, double needed_M) {
    if (bank.M < needed_M) {
        std::ostringstream os;
        os << "M = " << bank.M << " vanishing moments, need at least " << needed_M;
        throw ValidationError(os.str());
    }
    if (!bank.validation.w2) throw ValidationError("W-2 (uniform smoothness envelope) not met");
    if (!bank.validation.w3) throw ValidationError("W-3 (asymptotic behaviour) not met");
}

long n_coeffs(long N, int T, int j) {
    if (N < 1 || T < 1 || j < 0) throw DomainError("n_coeffs needs positive N, T and j >= 0");
    double n = std::floor(std::ldexp(static_cast<double>(N - T + 1), -j)) - T + 1;
    if (n < 1) {
        std::ostringstream os;
        os << "n_j = " << n << " < 1 at N = " << N << ", T = " << T << ", j = " << j;
        throw ScaleError(os.str());
    }
    return static_cast<long>(n);
}

long first_coefficient(const FilterBank& bank, int j) {
    long L = bank.filter_length(j);
    long g = 1L << j;
    return (L - 1 + g - 1) / g;
}

Eigen::VectorXd wavelet_coeffs_at(const Eigen::VectorXd& series, const FilterBank& bank, int j,
                                  long k_first, long count) {
    const Eigen::VectorXd& g = bank.filter(j);
    const long L = g.size(), N = series.size(), step = 1L << j;
    if (L > N / 4) {
        std::ostringstream os;
        os << "filter length " << L << " exceeds N/4 = " << N / 4 << " at scale " << j;
        throw ScaleError(os.str());
    }
    if (k_first * step - (L - 1) < 0 || (k_first + count - 1) * step > N - 1)
        throw ScaleError("requested coefficients need samples outside the series");
    Eigen::VectorXd w(count);
    // g reversed so the inner product runs forward through the series
    Eigen::VectorXd gr = g.reverse();
    for (long i = 0; i < count; ++i) {
        long end = (k_first + i) * step;  // t = end - tau
        w(i) = gr.dot(series.segment(end - (L - 1), L));
    }
    return w;
}

Eigen::VectorXd wavelet_coeffs(const Eigen::VectorXd& series, const FilterBank& bank, int j) {
    long n = n_coeffs(series.size(), bank.T, j);
    return wavelet_coeffs_at(series, bank, j, first_coefficient(bank, j), n);
}

ScalogramSummary scalogram(const Eigen::VectorXd& series, const FilterBank& bank, int j, bool keep_coeffs,
                           std::optional<double> mean) {
    ScalogramSummary s;
    s.j = j;
    s.n = n_coeffs(series.size(), bank.T, j);
    s.k_first = first_coefficient(bank, j);
    Eigen::VectorXd w = wavelet_coeffs_at(series, bank, j, s.k_first, s.n);
    s.sigma2 = w.squaredNorm() / static_cast<double>(s.n);
    if (mean) s.centered = s.sigma2 - *mean;
    if (keep_coeffs) s.coeffs = std::move(w);
    return s;
}

MultiscaleFilter multiscale_filter(const FilterBank& bank, int j, int ell) {
    if (ell < 1) throw DomainError("multiscale index l must be >= 1");
    int u = 0;
    while ((2 << u) <= ell) ++u;
    int v = ell - (1 << u);
    if (j - u < 1) throw ScaleError("multiscale index reaches below scale 1");
    MultiscaleFilter f;
    f.offset = -(static_cast<long>(v) << (j - u));
    f.taps = bank.filter(j - u);
    return f;
}

MultiscaleScalogram multiscale_scalogram(const Eigen::VectorXd& series, const FilterBank& bank, int j, int p) {
    if (p < 1) throw DomainError("number of scales must be >= 1");
    if (j - p + 1 < 1) throw ScaleError("finest multiscale scale must be >= 1");
    const long N = series.size();
    long k_lo = 0, k_hi = 0;
    for (int u = 0; u < p; ++u) {
        int s = j - u;
        long f = first_coefficient(bank, s);
        long last = f + n_coeffs(N, bank.T, s) - 1;
        long width = 1L << u;
        long lo = (f + width - 1) / width;
        long hi = (last - (width - 1)) >= 0 ? (last - (width - 1)) / width : -1;
        if (u == 0) {
            k_lo = lo;
            k_hi = hi;
        } else {
            k_lo = std::max(k_lo, lo);
            k_hi = std::min(k_hi, hi);
        }
    }
    if (k_hi < k_lo) throw ScaleError("no shared coefficient range across the requested scales");

    MultiscaleScalogram out;
    out.j = j;
    out.p = p;
    out.k_first = k_lo;
    out.n = k_hi - k_lo + 1;
    out.by_ell.assign((1u << p) - 1, 0.0);
    for (int u = 0; u < p; ++u) {
        long width = 1L << u;
        ScalogramSummary s;
        s.j = j - u;
        s.k_first = width * k_lo;
        s.n = width * out.n;
        Eigen::VectorXd w = wavelet_coeffs_at(series, bank, s.j, s.k_first, s.n);
        s.sigma2 = w.squaredNorm() / static_cast<double>(s.n);
        for (long k = 0; k < out.n; ++k)
            for (long v = 0; v < width; ++v) out.by_ell[width + v - 1] += w(k * width + v) * w(k * width + v);
        out.scales.push_back(std::move(s));
    }
    for (auto& x : out.by_ell) x /= static_cast<double>(out.n);
    return out;
}

}  // namespace scalolab
