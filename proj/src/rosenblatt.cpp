#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scalolab/errors.hpp"
#include "scalolab/inference.hpp"
#include "scalolab/stats.hpp"
#include "scalolab/synthesis.hpp"

namespace scalolab {

double rosenblatt_second_moment(double d) {
    if (!(d > 0.25 && d < 0.5)) throw DomainError("Rosenblatt law needs 1/4 < d < 1/2");
    // 2 c(2d, 2d) int |e^{is} - 1|^2 |s|^{-1-4d} ds
    return 8.0 * riesz_constant(2.0 * d, 2.0 * d) * (-std::tgamma(-4.0 * d) * std::cos(2.0 * M_PI * d));
}

std::vector<double> rosenblatt_sample(double d, std::size_t reps, std::uint64_t seed, int n_internal) {
    if (!(d > 0.25 && d < 0.5)) throw DomainError("Rosenblatt law needs 1/4 < d < 1/2");
    if (n_internal < 64) throw DomainError("n_internal must be >= 64");
    SpectralModel model = SpectralModel::unit_variance({d, 0});
    GaussianSampler sampler(model, n_internal);
    Eigen::VectorXd rho = autocov_X(model, n_internal);
    const double n = n_internal;
    long double ss = n * rho(0) * rho(0);
    for (int k = 1; k < n_internal; ++k) ss += 2.0L * (n - k) * rho(k) * rho(k);
    const double raw_var = 2.0 * static_cast<double>(ss);
    const double factor = std::sqrt(rosenblatt_second_moment(d) / raw_var);
    std::vector<double> out(reps);
    parallel_for(reps, [&](std::size_t r) {
        Eigen::VectorXd x = sampler.sample(seed, r, "rosenblatt");
        out[r] = factor * (x.squaredNorm() - n);
    });
    return out;
}

QuantileCache::QuantileCache(std::string path) : path_(std::move(path)) {
    if (!path_.empty()) load();
}

void QuantileCache::load() {
    std::ifstream in(path_);
    if (!in) return;
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw QuantileEngineError("unreadable quantile cache " + path_ + ": " + e.what());
    }
    for (const auto& e : j.at("entries")) {
        table_.push_back({e.at("d").get<double>(), e.at("prob").get<double>(), e.at("quantile").get<double>(),
                          e.at("n_internal").get<int>(), e.at("reps").get<std::size_t>(),
                          e.at("seed").get<std::uint64_t>(), true});
    }
}

void QuantileCache::store() const {
    if (path_.empty()) return;
    nlohmann::json j;
    j["entries"] = nlohmann::json::array();
    for (const auto& r : table_)
        j["entries"].push_back({{"d", r.d}, {"prob", r.prob}, {"quantile", r.quantile},
                                {"n_internal", r.n_internal}, {"reps", r.reps}, {"seed", r.seed}});
    std::string tmp = path_ + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw QuantileEngineError("cannot write quantile cache " + tmp);
        out << j.dump(2) << "\n";
    }
    if (std::rename(tmp.c_str(), path_.c_str()) != 0)
        throw QuantileEngineError("cannot replace quantile cache " + path_);
}

QuantileRecord QuantileCache::quantile(double d, double prob, int n_internal, std::size_t reps,
                                       std::uint64_t seed) {
    if (!(prob > 0.0 && prob < 1.0)) throw QuantileEngineError("quantile level outside (0, 1)");
    std::lock_guard<std::mutex> lock(mutex_);
    for (const auto& r : table_)
        if (r.d == d && r.prob == prob && r.n_internal == n_internal && r.reps == reps && r.seed == seed) {
            QuantileRecord hit = r;
            hit.from_cache = true;
            return hit;
        }
    auto key = std::make_tuple(d, n_internal, reps, seed);
    auto it = samples_.find(key);
    if (it == samples_.end()) {
        try {
            it = samples_.emplace(key, rosenblatt_sample(d, reps, seed, n_internal)).first;
        } catch (const Error& e) {
            throw QuantileEngineError(e.what());
        }
    }
    QuantileRecord r{d, prob, scalolab::quantile(it->second, prob), n_internal, reps, seed, false};
    table_.push_back(r);
    store();
    return r;
}

}  // namespace scalolab
