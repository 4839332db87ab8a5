#pragma once

// Reference implementations written straight from the definitions, sharing no
// code with the library. Used by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <set>
#include <vector>

namespace oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double dlt(int q, double d) { return q == 0 ? 0.5 : q * d - 0.5 * (q - 1); }
inline double dlt_plus(int q, double d) {
    double v = dlt(q, d);
    return std::abs(v) < 1e-12 ? 0.0 : std::max(v, 0.0);
}
inline bool positive(double v) { return v > 1e-12; }

inline double alpha(int q, int qp, int p, double d) {
    if (p == 0) return 0.5;
    return std::min(1.0 - dlt_plus(q - p, d) - dlt_plus(qp - p, d), 0.5);
}
inline double beta(int q, int p, double d) { return std::max(dlt_plus(p, d) + dlt_plus(q - p, d) - 0.5, 0.0); }
inline double beta_prime(int q, int qp, int p, double d) {
    return std::max(2 * dlt_plus(p, d) + dlt_plus(q - p, d) + dlt_plus(qp - p, d) - 1.0, -0.5);
}

struct Sets {
    std::set<int> Q;   // r with I_r nonempty and delta(r+1) > 0
    std::set<int> Jd;  // l with delta(q_{l+1} - q_l) > 0
    std::vector<std::set<int>> I;  // I_r for r = 0..max gap
};

inline Sets sets(const std::vector<int>& q, double d) {
    Sets s;
    int maxgap = 0;
    for (std::size_t l = 0; l + 1 < q.size(); ++l) maxgap = std::max(maxgap, q[l + 1] - q[l]);
    s.I.resize(maxgap + 1);
    for (std::size_t l = 0; l + 1 < q.size(); ++l)
        for (int r = 0; r <= maxgap; ++r)
            if (q[l + 1] == q[l] + r + 1) s.I[r].insert(static_cast<int>(l));
    for (int r = 0; r <= maxgap; ++r)
        if (!s.I[r].empty() && positive(dlt(r + 1, d))) s.Q.insert(r);
    for (std::size_t l = 0; l + 1 < q.size(); ++l)
        if (positive(dlt(q[l + 1] - q[l], d))) s.Jd.insert(static_cast<int>(l));
    return s;
}

// Every branch of the critical exponent evaluated literally.
inline double nu_c_definition(const std::vector<int>& q, double d) {
    if (q.size() == 1) return kInf;
    Sets s = sets(q, d);
    const int q0 = q[0];
    const bool I0 = !s.I[0].empty();
    const bool small = d <= 0.25 + 1e-15;
    auto ql = [&](int r) { return q[*s.I[r].begin()]; };
    if (q0 == 1 && small && !I0) return kInf;
    if (q0 == 1 && small) return (d + 0.5 - 2 * dlt_plus(ql(0), d)) / d;
    if (q0 == 1) {
        double v = (1 - 2 * dlt_plus(q[1] - 1, d)) / (2 * d - 0.5);
        if (s.Jd.empty()) return v;
        for (int r : s.Q) v = std::min(v, (2 * d + 0.5 - 2 * dlt_plus(ql(r), d) - dlt(r + 1, d)) / dlt(r + 1, d));
        return v;
    }
    if (!I0) return kInf;
    return 1 + 4 * (dlt(q0, d) - dlt_plus(ql(0), d)) / (1 - 2 * d);
}

// The single formula used in the monotonicity argument, with a/0 = inf.
inline double nu_c_unified(const std::vector<int>& q, double d) {
    if (q.size() == 1) return kInf;
    auto div = [](double a, double b) { return b > 1e-14 ? a / b : kInf; };
    Sets s = sets(q, d);
    if (q[0] >= 2) {
        if (s.I[0].empty()) return kInf;
        int ql0 = q[*s.I[0].begin()];
        return positive(dlt(ql0, d)) ? 1 + 2 * (ql0 - q[0]) : 1 - 2 * q[0] + 2 / (1 - 2 * d);
    }
    double v = div(1 - 2 * dlt_plus(q[1] - 1, d), dlt_plus(2, d));
    for (std::size_t r = 0; r < s.I.size(); ++r) {
        if (s.I[r].empty()) continue;
        int qlr = q[*s.I[r].begin()];
        v = std::min(v, div(2 * d + 0.5 - 2 * dlt_plus(qlr, d) - dlt(r + 1, d), dlt_plus(r + 1, d)));
    }
    return v;
}

// Probabilists' Hermite polynomials by the explicit sum.
inline double hermite(int n, double x) {
    double s = 0.0;
    for (int m = 0; 2 * m <= n; ++m) {
        double t = std::tgamma(n + 1.0) / (std::tgamma(m + 1.0) * std::tgamma(n - 2 * m + 1.0)) * std::pow(-0.5, m);
        s += t * std::pow(x, n - 2 * m);
    }
    return s;
}

// Autocorrelation of ARFIMA(0,d,0) by the Gamma-function closed form.
inline std::vector<double> fgn_rho(double d, int L) {
    std::vector<double> r(L + 1);
    for (int k = 0; k <= L; ++k)
        r[k] = std::exp(std::lgamma(k + d) - std::lgamma(k + 1 - d) + std::lgamma(1 - d) - std::lgamma(d));
    return r;
}

// Daubechies filters; db3 from a 40-digit spectral factorisation.
inline std::vector<double> db2() {
    const double s3 = std::sqrt(3.0), n = 4 * std::sqrt(2.0);
    return {(1 + s3) / n, (3 + s3) / n, (3 - s3) / n, (1 - s3) / n};
}
inline std::vector<double> db3() {
    return {0.33267055295008262, 0.80689150931109258, 0.45987750211849157,
            -0.13501102001025459, -0.085441273882026662, 0.035226291885709537};
}

}  // namespace oracle
