#include <fstream>
#include <set>
#include <sstream>

#include "scalolab/errors.hpp"
#include "scalolab/harness.hpp"
#include "scalolab/lrd_core.hpp"

namespace scalolab::harness {

using nlohmann::json;

namespace {

const std::set<std::string> kModes{"simulate", "analyze", "estimate", "test", "mc-experiment", "nu-c"};

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(path.empty() ? "config must be an object" : path + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) throw ConfigError((path.empty() ? key : path + "." + key) + ": unknown field");
    }
}

template <typename T>
T get(const json& obj, const std::string& key, const std::string& path, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError((path.empty() ? key : path + "." + key) + ": " + e.what());
    }
}

template <typename T>
T require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) throw ConfigError((path.empty() ? key : path + "." + key) + ": required field missing");
    return get<T>(obj, key, path, T{});
}

GSpec parse_G(const json& g) {
    check_keys(g, "G", {"kind", "q", "coefficients", "expr", "t"});
    GSpec s;
    s.kind = get<std::string>(g, "kind", "G", "hermite");
    if (s.kind == "hermite") {
        s.q = require<int>(g, "q", "G");
        if (s.q < 1) throw ConfigError("G.q: must be >= 1");
    } else if (s.kind == "polynomial") {
        if (g.contains("expr")) {
            try {
                s.poly = parse_polynomial(require<std::string>(g, "expr", "G"));
            } catch (const Error& e) {
                throw ConfigError(std::string("G.expr: ") + e.what());
            }
        } else {
            s.poly = require<std::vector<double>>(g, "coefficients", "G");
        }
        if (s.poly.empty()) throw ConfigError("G.coefficients: empty polynomial");
    } else if (s.kind == "exp-centered") {
        s.t = get<double>(g, "t", "G", 1.0);
    } else if (s.kind == "hermite-sum") {
        const json& c = g.contains("coefficients") ? g.at("coefficients") : json();
        if (!c.is_object() || c.empty()) throw ConfigError("G.coefficients: expected a nonempty {q: c_q} map");
        for (const auto& [k, v] : c.items()) {
            int q = 0;
            try {
                q = std::stoi(k);
            } catch (...) {
                throw ConfigError("G.coefficients." + k + ": key is not an integer");
            }
            if (q < 1) throw ConfigError("G.coefficients." + k + ": index must be >= 1");
            if (!v.is_number()) throw ConfigError("G.coefficients." + k + ": expected a number");
            s.coeffs[q] = v.get<double>();
        }
    } else if (s.kind != "sign" && s.kind != "abs-centered") {
        throw ConfigError("G.kind: unknown nonlinearity '" + s.kind + "'");
    }
    return s;
}

}  // namespace

ExperimentConfig parse_config(const json& root, const std::string& mode_override,
                              std::optional<std::uint64_t> seed_override) {
    check_keys(root, "", {"mode", "model", "G", "bank", "N", "j", "p", "replicates", "seed", "input", "out_dir",
                          "dump_coefficients", "test", "experiment", "nu_c"});
    ExperimentConfig c;
    c.mode = mode_override.empty() ? get<std::string>(root, "mode", "", "") : mode_override;
    if (!kModes.count(c.mode)) throw ConfigError("mode: unknown mode '" + c.mode + "'");

    if (root.contains("model")) {
        const json& m = root.at("model");
        check_keys(m, "model", {"d", "K", "ma", "beta_smooth"});
        c.model.d = require<double>(m, "d", "model");
        c.model.K = get<int>(m, "K", "model", 0);
        c.ma = get<std::vector<double>>(m, "ma", "model", {});
        c.beta_smooth = get<double>(m, "beta_smooth", "model", 2.0);
    } else if (c.mode != "nu-c" || !root.contains("nu_c")) {
        throw ConfigError("model: required field missing");
    }
    if (!(c.model.d > 0.0 && c.model.d < 0.5)) throw ConfigError("model.d: must lie in (0, 1/2)");
    if (c.model.K < 0) throw ConfigError("model.K: must be >= 0");
    if (!(c.beta_smooth > 0.0)) throw ConfigError("model.beta_smooth: must be positive");
    if (c.mode != "nu-c" && on_boundary_lattice(c.model.d))
        throw ConfigError("model.d: lies on the boundary lattice 1/2 - 1/(2q)");

    if (!root.contains("G")) throw ConfigError("G: required field missing");
    c.G = parse_G(root.at("G"));

    if (root.contains("bank")) {
        const json& b = root.at("bank");
        check_keys(b, "bank", {"family", "M"});
        c.family = get<std::string>(b, "family", "bank", "daubechies");
        c.M = get<int>(b, "M", "bank", c.family == "haar" ? 1 : 3);
        if (c.family != "daubechies" && c.family != "haar") throw ConfigError("bank.family: unknown family");
        if (c.M < 1 || c.M > 20) throw ConfigError("bank.M: must lie in [1, 20]");
    }

    c.N = get<long>(root, "N", "", c.N);
    c.j = get<int>(root, "j", "", c.j);
    c.p = get<int>(root, "p", "", c.p);
    c.replicates = get<int>(root, "replicates", "", c.replicates);
    c.seed = seed_override ? *seed_override : get<std::uint64_t>(root, "seed", "", c.seed);
    c.input = get<std::string>(root, "input", "", "");
    c.out_dir = get<std::string>(root, "out_dir", "", "out");
    c.dump_coefficients = get<bool>(root, "dump_coefficients", "", false);
    if (c.N < 64) throw ConfigError("N: must be >= 64");
    if (c.j < 1) throw ConfigError("j: must be >= 1");
    if (c.p < 1) throw ConfigError("p: must be >= 1");
    if (c.replicates < 1) throw ConfigError("replicates: must be >= 1");
    if (!c.input.empty() && !std::filesystem::exists(c.input))
        throw ConfigError("input: file '" + c.input + "' does not exist");

    if (root.contains("test")) {
        const json& t = root.at("test");
        check_keys(t, "test", {"d0_star", "alpha", "K_bar", "quantile", "enforce", "max_reduction_ratio",
                               "max_bias_term"});
        if (t.contains("d0_star")) c.d0_star = require<double>(t, "d0_star", "test");
        c.alpha = get<double>(t, "alpha", "test", c.alpha);
        c.K_bar = get<int>(t, "K_bar", "test", c.K_bar);
        c.enforce = get<bool>(t, "enforce", "test", false);
        c.max_reduction_ratio = get<double>(t, "max_reduction_ratio", "test", 1.0);
        c.max_bias_term = get<double>(t, "max_bias_term", "test", 1.0);
        if (t.contains("quantile")) {
            const json& q = t.at("quantile");
            check_keys(q, "test.quantile", {"n_internal", "reps", "seed", "cache"});
            c.quantile_n_internal = get<int>(q, "n_internal", "test.quantile", c.quantile_n_internal);
            c.quantile_reps = get<std::size_t>(q, "reps", "test.quantile", c.quantile_reps);
            c.quantile_seed = get<std::uint64_t>(q, "seed", "test.quantile", c.quantile_seed);
            c.quantile_cache = get<std::string>(q, "cache", "test.quantile", "");
        }
        if (!(c.alpha > 0.0 && c.alpha <= 1.0)) throw ConfigError("test.alpha: must lie in (0, 1]");
        if (c.K_bar < 0) throw ConfigError("test.K_bar: must be >= 0");
    }
    if (c.mode == "test" && !c.d0_star) throw ConfigError("test.d0_star: required in test mode");

    if (root.contains("experiment")) {
        const json& e = root.at("experiment");
        check_keys(e, "experiment", {"type", "regime", "schedule", "slope_tolerance", "threads"});
        c.experiment = get<std::string>(e, "type", "experiment", c.experiment);
        c.regime = get<std::string>(e, "regime", "experiment", "");
        c.slope_tolerance = get<double>(e, "slope_tolerance", "experiment", c.slope_tolerance);
        c.threads = get<unsigned>(e, "threads", "experiment", 0u);
        if (e.contains("schedule")) {
            const json& s = e.at("schedule");
            if (!s.is_array()) throw ConfigError("experiment.schedule: expected an array");
            for (std::size_t i = 0; i < s.size(); ++i) {
                std::string path = "experiment.schedule[" + std::to_string(i) + "]";
                check_keys(s[i], path, {"N", "j"});
                c.schedule.push_back({require<long>(s[i], "N", path), require<int>(s[i], "j", path)});
            }
        }
        if (c.experiment != "slope" && c.experiment != "estimator" && c.experiment != "test")
            throw ConfigError("experiment.type: expected slope, estimator or test");
        if (!c.regime.empty() && c.regime != "large-scale" && c.regime != "small-scale")
            throw ConfigError("experiment.regime: expected large-scale or small-scale");
    }
    if (c.mode == "mc-experiment" && c.experiment == "test" && !c.d0_star)
        throw ConfigError("test.d0_star: required for test experiments");

    if (root.contains("nu_c")) {
        const json& n = root.at("nu_c");
        check_keys(n, "nu_c", {"d_values"});
        c.nu_c_d_values = get<std::vector<double>>(n, "d_values", "nu_c", {});
        for (double d : c.nu_c_d_values)
            if (!(d > 0.0 && d < 0.5)) throw ConfigError("nu_c.d_values: every d must lie in (0, 1/2)");
    }
    if (c.mode == "nu-c" && c.nu_c_d_values.empty()) c.nu_c_d_values.push_back(c.model.d);

    c.resolved = root;
    c.resolved["mode"] = c.mode;
    c.resolved["seed"] = c.seed;
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::string& mode_override,
                             std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return parse_config(j, mode_override, seed_override);
}

RealFunction make_G(const GSpec& g) {
    if (g.kind == "hermite") return hermite_function(g.q);
    if (g.kind == "polynomial") return polynomial_function(g.poly);
    if (g.kind == "exp-centered") return exp_centered_function(g.t);
    if (g.kind == "sign") return sign_function();
    if (g.kind == "abs-centered") return abs_centered_function();
    if (g.kind == "hermite-sum") {
        auto coeffs = g.coeffs;
        return [coeffs](double x) {
            double s = 0.0;
            for (const auto& [q, c] : coeffs) s += c / std::tgamma(q + 1.0) * hermite_eval(q, x);
            return s;
        };
    }
    throw ConfigError("G.kind: unknown nonlinearity '" + g.kind + "'");
}

HermiteExpansion make_expansion(const GSpec& g) {
    if (g.kind == "hermite") return expansion_from_coeffs({{g.q, std::tgamma(g.q + 1.0)}});
    if (g.kind == "hermite-sum") return expansion_from_coeffs(g.coeffs);
    return expand(make_G(g));
}

SpectralModel make_model(const ExperimentConfig& c) {
    return SpectralModel::unit_variance(c.model, c.ma, c.beta_smooth);
}

}  // namespace scalolab::harness
