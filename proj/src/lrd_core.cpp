#include "scalolab/lrd_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "scalolab/errors.hpp"

namespace scalolab {

double ExtendedReal::value() const {
    if (!value_) throw DomainError("value() called on infinite extended real");
    return *value_;
}

std::string ExtendedReal::to_string() const {
    if (!value_) return "inf";
    std::ostringstream os;
    os.precision(17);
    os << *value_;
    return os.str();
}

namespace {

void check_d(double d) {
    if (!(d > 0.0 && d < 0.5)) {
        std::ostringstream os;
        os << "d = " << d << " outside (0, 1/2)";
        throw DomainError(os.str());
    }
}

}  // namespace

void validate(const MemoryParams& params) {
    check_d(params.d);
    if (params.K < 0) throw DomainError("integration order K must be nonnegative");
}

DeltaPair delta_exponents(int q, double d) {
    check_d(d);
    if (q < 0) throw DomainError("q must be nonnegative");
    if (q == 0) return {0.5, 0.5};
    double v = q * d - 0.5 * (q - 1);
    if (std::abs(v) <= kBoundaryTol) v = 0.0;
    return {v, std::max(v, 0.0)};
}

double delta(int q, double d) { return delta_exponents(q, d).delta; }
double delta_plus(int q, double d) { return delta_exponents(q, d).delta_plus; }

bool on_boundary_lattice(double d) {
    check_d(d);
    double q = 1.0 / (1.0 - 2.0 * d);
    double qr = std::round(q);
    return qr >= 2.0 && std::abs(qr * (1.0 - 2.0 * d) - 1.0) <= kBoundaryTol;
}

void require_off_boundary(double d) {
    if (on_boundary_lattice(d)) {
        std::ostringstream os;
        os << "d = " << d << " lies on 1/2 - 1/(2q) for q = "
           << std::lround(1.0 / (1.0 - 2.0 * d));
        throw BoundaryError(os.str());
    }
}

int epsilon(int p, double d) {
    check_d(d);
    for (int s = 1; s <= p; ++s)
        if (std::abs(s * (1.0 - 2.0 * d) - 1.0) <= kBoundaryTol) return 1;
    return 0;
}

double lambda_factor(const std::vector<int>& a, double d) {
    check_d(d);
    double log_sum = 0.0;
    for (int ai : a) {
        if (ai < 0) throw DomainError("multi-index entries must be nonnegative");
        log_sum += std::lgamma(ai + 1.0);
    }
    return std::exp((1.0 - 2.0 * d) * log_sum);
}

namespace {

void check_triple(int q, int qp, int p) {
    if (q < 1 || q > qp) {
        std::ostringstream os;
        os << "need 1 <= q <= q', got q = " << q << ", q' = " << qp;
        throw OrderingError(os.str());
    }
    if (p < 0 || p > std::min(q, qp)) {
        std::ostringstream os;
        os << "p = " << p << " outside [0, " << std::min(q, qp) << "]";
        throw OrderingError(os.str());
    }
}

}  // namespace

double alpha_exponent(int q, int qp, int p, double d) {
    check_triple(q, qp, p);
    if (p == 0) return 0.5;
    return std::min(1.0 - delta_plus(q - p, d) - delta_plus(qp - p, d), 0.5);
}

double beta_exponent(int q, int p, double d) {
    if (p < 0 || p > q) throw OrderingError("beta needs 0 <= p <= q");
    return std::max(delta_plus(p, d) + delta_plus(q - p, d) - 0.5, 0.0);
}

double beta_prime_exponent(int q, int qp, int p, double d) {
    check_triple(q, qp, p);
    return std::max(2.0 * delta_plus(p, d) + delta_plus(q - p, d) + delta_plus(qp - p, d) - 1.0,
                    -0.5);
}

ChaosExponents chaos_exponents(int q, int qp, int p, double d) {
    check_triple(q, qp, p);
    check_d(d);
    ChaosExponents e;
    e.alpha = alpha_exponent(q, qp, p, d);
    e.beta = beta_exponent(q, p, d);
    e.beta_other = beta_exponent(qp, p, d);
    e.beta_prime = beta_prime_exponent(q, qp, p, d);
    e.epsilon = epsilon(q + qp - 2 * p, d);
    e.epsilon_other = epsilon(qp, d);
    e.lambda_factor = std::sqrt(lambda_factor({q - p, p}, d) * lambda_factor({qp - p, p}, d));
    return e;
}

RankProfile rank_profile(std::vector<int> coeff_indices, double d) {
    check_d(d);
    if (coeff_indices.empty()) throw DomainError("empty coefficient index set");
    std::sort(coeff_indices.begin(), coeff_indices.end());
    coeff_indices.erase(std::unique(coeff_indices.begin(), coeff_indices.end()),
                        coeff_indices.end());
    if (coeff_indices.front() < 1) throw DomainError("coefficient indices must be positive");

    RankProfile rp;
    rp.q_indices = coeff_indices;
    rp.q0 = coeff_indices.front();
    if (!(delta(rp.q0, d) > 0.0)) {
        std::ostringstream os;
        os << "q0 = " << rp.q0 << " >= 1/(1-2d) = " << 1.0 / (1.0 - 2.0 * d);
        throw LongMemoryError(os.str());
    }
    if (coeff_indices.size() > 1) rp.q1 = coeff_indices[1];

    for (std::size_t l = 0; l + 1 < coeff_indices.size(); ++l) {
        int r = coeff_indices[l + 1] - coeff_indices[l] - 1;
        rp.gap_sets[r].insert(static_cast<int>(l));
    }
    for (const auto& [r, ells] : rp.gap_sets) {
        rp.ell_markers[r] = *ells.begin();
        if (delta(r + 1, d) > 0.0) {
            rp.Q_set.insert(r);
            rp.Jd_set.insert(ells.begin(), ells.end());
        }
    }
    return rp;
}

CriticalExponentDetail critical_exponent_detail(const RankProfile& rp, double d) {
    check_d(d);
    CriticalExponentDetail out;
    const bool has_I0 = rp.gap_sets.count(0) > 0;
    auto q_at = [&](int ell) { return rp.q_indices.at(static_cast<std::size_t>(ell)); };

    if (rp.q_indices.size() == 1) {
        out.branch = 1;
        out.rule = "single nonzero coefficient";
        return out;
    }
    const bool small_d = !(delta(2, d) > 0.0);  // d <= 1/4
    if (rp.q0 == 1) {
        if (small_d && !has_I0) {
            out.branch = 2;
            out.rule = "q0 = 1, d <= 1/4, I_0 empty";
            return out;
        }
        if (small_d) {
            int ql0 = q_at(rp.ell_markers.at(0));
            double v = (d + 0.5 - 2.0 * delta_plus(ql0, d)) / d;
            out.branch = 3;
            out.rule = "q0 = 1, d <= 1/4, I_0 nonempty";
            out.terms.push_back({"(d + 1/2 - 2 delta+(q_l0)) / d", v});
            out.value = ExtendedReal::finite(v);
            return out;
        }
        double first = (1.0 - 2.0 * delta_plus(*rp.q1 - 1, d)) / (2.0 * d - 0.5);
        out.terms.push_back({"(1 - 2 delta+(q1 - 1)) / (2d - 1/2)", first});
        double v = first;
        if (rp.Jd_set.empty()) {
            out.branch = 4;
            out.rule = "q0 = 1, d > 1/4, J_d empty";
        } else {
            out.branch = 5;
            out.rule = "q0 = 1, d > 1/4, J_d nonempty";
            for (int r : rp.Q_set) {
                int qlr = q_at(rp.ell_markers.at(r));
                double dr = delta(r + 1, d);
                double t = (2.0 * d + 0.5 - 2.0 * delta_plus(qlr, d) - dr) / dr;
                out.terms.push_back({"r = " + std::to_string(r), t});
                v = std::min(v, t);
            }
        }
        out.value = ExtendedReal::finite(v);
        return out;
    }
    if (!has_I0) {
        out.branch = 6;
        out.rule = "q0 >= 2, I_0 empty";
        return out;
    }
    int ql0 = q_at(rp.ell_markers.at(0));
    double v = 1.0 + 4.0 * (delta(rp.q0, d) - delta_plus(ql0, d)) / (1.0 - 2.0 * d);
    out.branch = 7;
    out.rule = "q0 >= 2, I_0 nonempty";
    out.terms.push_back({"1 + 4 (delta(q0) - delta+(q_l0)) / (1 - 2d)", v});
    out.value = ExtendedReal::finite(v);
    return out;
}

ExtendedReal critical_exponent(const RankProfile& profile, double d) {
    return critical_exponent_detail(profile, d).value;
}

double zeta_exponent(double beta_smooth, double d, int q0, std::optional<int> q1,
                     double eps_shrink) {
    if (!(beta_smooth > 0.0 && beta_smooth <= 2.0))
        throw DomainError("smoothness exponent beta must lie in (0, 2]");
    if (!(eps_shrink > 0.0 && eps_shrink < 1.0)) throw DomainError("eps_shrink must lie in (0, 1)");
    double dq0 = delta(q0, d);
    if (!(dq0 > 0.0)) throw LongMemoryError("delta(q0) must be positive");
    double dq1 = q1 ? delta_plus(*q1, d) : 0.0;
    double z = std::min(beta_smooth, 2.0 * (dq0 - dq1));
    if (q0 >= 2 && z >= 2.0 * dq0) z *= (1.0 - eps_shrink);
    return z;
}

double rate_bound(int q, int qp, int p, double n, double gamma, const MemoryParams& params) {
    validate(params);
    if (n < 2.0 || gamma < 2.0) throw DomainError("rate_bound needs n >= 2 and gamma >= 2");
    ChaosExponents e = chaos_exponents(q, qp, p, params.d);
    return std::pow(gamma, 2.0 * params.K) *
           (std::pow(n, -e.alpha) * std::pow(gamma, e.beta_prime) +
            std::pow(n, -0.5) * std::pow(gamma, e.beta + e.beta_other));
}

}  // namespace scalolab
