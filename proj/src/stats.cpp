#include "scalolab/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "scalolab/errors.hpp"

namespace scalolab {

double mean(const std::vector<double>& x) {
    if (x.empty()) throw DomainError("mean of an empty sample");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double variance(const std::vector<double>& x) {
    if (x.size() < 2) throw DomainError("variance needs at least two values");
    double m = mean(x), s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

double skewness(const std::vector<double>& x) {
    double m = mean(x), m2 = 0.0, m3 = 0.0;
    for (double v : x) {
        m2 += (v - m) * (v - m);
        m3 += (v - m) * (v - m) * (v - m);
    }
    m2 /= static_cast<double>(x.size());
    m3 /= static_cast<double>(x.size());
    return m3 / std::pow(m2, 1.5);
}

double quantile(std::vector<double> x, double prob) {
    if (x.empty()) throw DomainError("quantile of an empty sample");
    if (!(prob >= 0.0 && prob <= 1.0)) throw DomainError("probability outside [0, 1]");
    std::sort(x.begin(), x.end());
    double pos = prob * static_cast<double>(x.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = std::min(lo + 1, x.size() - 1);
    return x[lo] + (pos - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

double ols_slope(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("ols_slope needs two equal vectors of size >= 2");
    Eigen::ArrayXd xc = x.array() - x.mean();
    return (xc * (y.array() - y.mean())).sum() / xc.square().sum();
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double prob) {
    if (!(prob > 0.0 && prob < 1.0)) throw DomainError("normal quantile needs 0 < p < 1");
    // Bisection on the upper or lower tail, whichever keeps the target away from 1.
    const bool upper = prob > 0.5;
    const double target = upper ? 1.0 - prob : prob;
    double lo = -40.0, hi = 0.0;
    while (hi - lo > 1e-15 * std::max(1.0, std::abs(lo))) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (normal_cdf(mid) < target ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    return upper ? -x : x;
}

AndersonDarling anderson_darling_normal(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n < 8) throw DomainError("Anderson-Darling needs at least 8 values");
    double m = mean(x), s = std::sqrt(variance(x));
    std::vector<double> z(x);
    std::sort(z.begin(), z.end());
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double lo = normal_cdf((z[i] - m) / s);
        double hi = normal_cdf((z[n - 1 - i] - m) / s);
        lo = std::clamp(lo, 1e-300, 1.0 - 1e-16);
        hi = std::clamp(hi, 1e-300, 1.0 - 1e-16);
        a += (2.0 * i + 1.0) * (std::log(lo) + std::log1p(-hi));
    }
    AndersonDarling r;
    r.statistic = -static_cast<double>(n) - a / static_cast<double>(n);
    double nn = static_cast<double>(n);
    r.adjusted = r.statistic * (1.0 + 0.75 / nn + 2.25 / (nn * nn));
    const double A = r.adjusted;
    if (A >= 0.6)
        r.p_value = std::exp(1.2937 - 5.709 * A + 0.0186 * A * A);
    else if (A >= 0.34)
        r.p_value = std::exp(0.9177 - 4.279 * A - 1.38 * A * A);
    else if (A >= 0.2)
        r.p_value = 1.0 - std::exp(-8.318 + 42.796 * A - 59.938 * A * A);
    else
        r.p_value = 1.0 - std::exp(-13.436 + 101.14 * A - 223.73 * A * A);
    r.p_value = std::clamp(r.p_value, 0.0, 1.0);
    return r;
}

KolmogorovSmirnov ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw DomainError("KS test needs two nonempty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double D = 0.0;
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        D = std::max(D, std::abs(i / na - j / nb));
    }
    double ne = na * nb / (na + nb);
    double lam = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * D;
    double p = 0.0;
    for (int k = 1; k <= 200; ++k) {
        double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
        p += term;
        if (std::abs(term) < 1e-16) break;
    }
    return {D, std::clamp(p, 0.0, 1.0)};
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = n;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace scalolab
