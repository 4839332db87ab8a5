#include "scalolab/expansion.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "scalolab/errors.hpp"

namespace scalolab {

namespace {

GaussHermiteRule golub_welsch(int n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        J(k, k - 1) = std::sqrt(static_cast<double>(k));
        J(k - 1, k) = J(k, k - 1);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    GaussHermiteRule rule;
    rule.nodes = es.eigenvalues();
    // Christoffel weights 1 / sum_k h_k(x)^2 keep tiny tail weights accurate.
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = rule.nodes(i);
        double hm1 = 0.0, h = 1.0, s = 1.0;
        for (int k = 0; k + 1 < n; ++k) {
            double next = (x * h - std::sqrt(static_cast<double>(k)) * hm1) / std::sqrt(k + 1.0);
            hm1 = h;
            h = next;
            s += h * h;
        }
        rule.weights(i) = 1.0 / s;
    }
    rule.weights /= rule.weights.sum();
    return rule;
}

// Normalised Hermite functions h_q = H_q / sqrt(q!) at x, q = 0..qmax.
void normalised_hermite(int qmax, double x, std::vector<double>& out) {
    out.assign(qmax + 1, 0.0);
    out[0] = 1.0;
    if (qmax >= 1) out[1] = x;
    for (int q = 1; q < qmax; ++q)
        out[q + 1] = (x * out[q] - std::sqrt(static_cast<double>(q)) * out[q - 1]) / std::sqrt(q + 1.0);
}

double quad_mean(const GaussHermiteRule& r, const Eigen::VectorXd& v) { return r.weights.dot(v); }

}  // namespace

const GaussHermiteRule& gauss_hermite(int order) {
    if (order < 2) throw DomainError("Gauss-Hermite order must be at least 2");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[order];
    if (!slot) slot = std::make_unique<GaussHermiteRule>(golub_welsch(order));
    return *slot;
}

HermiteExpansion expand(const RealFunction& G, int qmax, int quad_order) {
    if (qmax < 1) throw DomainError("qmax must be at least 1");
    if (quad_order < 16) throw DomainError("quadrature order must be at least 16");
    const GaussHermiteRule& rule = gauss_hermite(quad_order);
    const GaussHermiteRule& coarse = gauss_hermite(quad_order / 2);

    Eigen::VectorXd g = rule.nodes.unaryExpr([&](double x) { return G(x); });
    Eigen::VectorXd gc = coarse.nodes.unaryExpr([&](double x) { return G(x); });
    double m2 = quad_mean(rule, g.array().square().matrix());
    double m2c = quad_mean(coarse, gc.array().square().matrix());
    if (!std::isfinite(m2) || !std::isfinite(m2c) || std::abs(m2 - m2c) > 0.05 * std::abs(m2)) {
        std::ostringstream os;
        os << "E[G(X)^2] does not stabilise: " << m2c << " at order " << quad_order / 2 << ", "
           << m2 << " at order " << quad_order;
        throw NonIntegrableError(os.str());
    }

    HermiteExpansion e;
    e.qmax = qmax;
    e.quadrature_order = quad_order;
    double mean = quad_mean(rule, g);
    if (std::abs(mean) > 1e-12 * std::max(1.0, std::sqrt(m2))) {
        e.centering = mean;
        g.array() -= mean;
        std::ostringstream os;
        os << "G auto-centred: removed mean " << mean;
        e.warnings.push_back(os.str());
    }
    e.second_moment = quad_mean(rule, g.array().square().matrix());

    std::vector<double> acc(qmax + 1, 0.0), h;
    for (int i = 0; i < rule.nodes.size(); ++i) {
        double wg = rule.weights(i) * g(i);
        if (wg == 0.0) continue;
        normalised_hermite(qmax, rule.nodes(i), h);
        for (int q = 1; q <= qmax; ++q) acc[q] += wg * h[q];
    }
    for (int q = 1; q <= qmax; ++q) {
        if (std::abs(acc[q]) < kZeroThreshold) continue;
        e.coeffs[q] = acc[q] * std::exp(0.5 * std::lgamma(q + 1.0));
        e.parseval_mass += acc[q] * acc[q];
    }
    return e;
}

HermiteExpansion expansion_from_coeffs(const std::map<int, double>& coeffs, int qmax) {
    HermiteExpansion e;
    e.qmax = qmax;
    for (const auto& [q, c] : coeffs) {
        if (q < 1) throw DomainError("expansion indices must be >= 1 (G is centred)");
        if (q > qmax) e.qmax = q;
        if (c == 0.0) continue;
        e.coeffs[q] = c;
        e.parseval_mass += c * c * std::exp(-std::lgamma(q + 1.0));
    }
    e.second_moment = e.parseval_mass;
    return e;
}

double evaluate(const HermiteExpansion& e, double x) {
    if (e.coeffs.empty()) return 0.0;
    int top = e.coeffs.rbegin()->first;
    double s = 0.0;
    double hm1 = 1.0, h = x;  // H_0, H_1
    double inv_fact = 1.0;    // 1 / q!
    for (int q = 1; q <= top; ++q) {
        inv_fact /= q;
        auto it = e.coeffs.find(q);
        if (it != e.coeffs.end()) s += it->second * inv_fact * h;
        double next = x * h - q * hm1;
        hm1 = h;
        h = next;
    }
    return s;
}

HermiteRank hermite_rank(const HermiteExpansion& e) {
    if (e.coeffs.empty()) throw DomainError("all Hermite coefficients vanish");
    auto it = e.coeffs.begin();
    HermiteRank r{it->first, std::nullopt};
    if (++it != e.coeffs.end()) r.q1 = it->first;
    return r;
}

std::vector<int> nonzero_indices(const HermiteExpansion& e) {
    std::vector<int> out;
    for (const auto& kv : e.coeffs) out.push_back(kv.first);
    return out;
}

DecayDiagnostic decay_check(const HermiteExpansion& e, double d) {
    DecayDiagnostic out;
    if (e.coeffs.empty()) {
        out.note = "no nonzero coefficients";
        return out;
    }
    int top = e.coeffs.rbegin()->first;
    if (top <= e.qmax - 5 || e.coeffs.size() < 3) {
        out.finite_support = true;
        out.note = "coefficients vanish before the truncation order";
        return out;
    }
    // Fit over the upper half of the nonzero indices.
    std::vector<std::pair<double, double>> pts;
    for (const auto& [q, c] : e.coeffs) pts.push_back({double(q), std::log(std::abs(c)) - d * std::lgamma(q + 1.0)});
    std::size_t start = pts.size() / 2;
    if (pts.size() - start < 3) start = pts.size() >= 3 ? pts.size() - 3 : 0;
    double mx = 0, my = 0;
    std::size_t n = pts.size() - start;
    for (std::size_t i = start; i < pts.size(); ++i) {
        mx += pts[i].first;
        my += pts[i].second;
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = start; i < pts.size(); ++i) {
        sxy += (pts[i].first - mx) * (pts[i].second - my);
        sxx += (pts[i].first - mx) * (pts[i].first - mx);
    }
    out.tail_terms = static_cast<int>(n);
    out.fitted_rate = -sxy / sxx;
    out.pass = out.fitted_rate > 0.0;
    out.note = out.pass ? "tail decays faster than (q!)^d" : "tail does not decay relative to (q!)^d";
    return out;
}

RealFunction hermite_function(int q) {
    if (q < 0) throw DomainError("Hermite order must be nonnegative");
    return [q](double x) { return hermite_eval(q, x); };
}

RealFunction polynomial_function(std::vector<double> c) {
    return [c = std::move(c)](double x) {
        double s = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
        return s;
    };
}

RealFunction exp_centered_function(double t) {
    double m = std::exp(0.5 * t * t);
    return [t, m](double x) { return std::exp(t * x) - m; };
}

RealFunction sign_function() {
    return [](double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); };
}

RealFunction abs_centered_function() {
    const double m = std::sqrt(2.0 / std::numbers::pi);
    return [m](double x) { return std::abs(x) - m; };
}

namespace {

class PolyParser {
public:
    explicit PolyParser(const std::string& s) {
        for (char ch : s)
            if (!std::isspace(static_cast<unsigned char>(ch))) text_ += ch;
    }

    std::vector<double> run() {
        if (text_.empty()) fail("empty polynomial");
        std::vector<double> c;
        bool first = true;
        while (pos_ < text_.size()) {
            double sign = 1.0;
            if (peek() == '+' || peek() == '-') {
                sign = (text_[pos_++] == '-') ? -1.0 : 1.0;
            } else if (!first) {
                fail("expected '+' or '-'");
            }
            first = false;
            double coef = 1.0;
            bool have_coef = false;
            if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
                coef = rational();
                have_coef = true;
                if (peek() == '*') ++pos_;
            }
            int power = 0;
            if (peek() == 'x') {
                ++pos_;
                power = 1;
                if (peek() == '^') {
                    ++pos_;
                    power = static_cast<int>(number());
                    if (power < 0) fail("negative power");
                }
            } else if (!have_coef) {
                fail("expected a coefficient or x");
            }
            if (c.size() <= static_cast<std::size_t>(power)) c.resize(power + 1, 0.0);
            c[power] += sign * coef;
        }
        return c;
    }

private:
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    double number() {
        std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') ++pos_;
        if (start == pos_) fail("expected a number");
        return std::stod(text_.substr(start, pos_ - start));
    }

    double rational() {
        double num = number();
        if (peek() == '/') {
            ++pos_;
            double den = number();
            if (den == 0.0) fail("zero denominator");
            num /= den;
        }
        return num;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        std::ostringstream os;
        os << "polynomial '" << text_ << "' at offset " << pos_ << ": " << msg;
        throw ParseError(os.str());
    }

    std::string text_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<double> parse_polynomial(const std::string& text) { return PolyParser(text).run(); }

}  // namespace scalolab
