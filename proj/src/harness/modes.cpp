#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "internal.hpp"
#include "scalolab/errors.hpp"
#include "scalolab/inference.hpp"
#include "scalolab/lrd_core.hpp"

namespace scalolab::harness {

using nlohmann::json;

namespace detail {

PathSimulator::PathSimulator(const ExperimentConfig& c, const HermiteExpansion& e, long N)
    : c_(c), e_(e), G_(make_G(c.G)), sampler_(std::make_unique<GaussianSampler>(make_model(c), static_cast<int>(N))) {}

Eigen::VectorXd PathSimulator::path(std::uint64_t replicate) const {
    Eigen::VectorXd x = sampler_->sample(c_.seed, replicate);
    return integrate_K(apply_G(G_, e_, x), c_.model.K);
}

int max_scale(long N, int M) {
    const long T = 2L * M - 1;
    int j = 0;
    // filter length (2^j - 1) T + 1 must stay within N/4 and leave at least one coefficient
    while (((1L << (j + 1)) - 1) * T + 1 <= N / 4 && std::ldexp(static_cast<double>(N - T + 1), -(j + 1)) - T + 1 >= 1)
        ++j;
    return j;
}

json report_header(const ExperimentConfig& c) {
    return {{"version", kVersion},
            {"config", c.resolved},
            {"seeds", {{"root", c.seed}, {"substreams", {"gaussian-path", "rosenblatt"}}}}};
}

}  // namespace detail

namespace {

json to_json(const EstimationReport& r) {
    json j = {{"d0_hat", r.d0_hat}, {"j", r.j},           {"p", r.p},
              {"scales", r.scales}, {"n", r.n},           {"sigma2", r.sigma2},
              {"weights", r.weights}, {"consistency_only", r.consistency_only}};
    if (r.rate_stochastic) j["rate_stochastic"] = *r.rate_stochastic;
    if (r.rate_bias) j["rate_bias"] = *r.rate_bias;
    return j;
}

json to_json(const TestReport& r) {
    const TestPlan& p = r.plan;
    json j = {{"d0_star", p.d0_star},
              {"alpha", p.alpha},
              {"K_bar", p.K_bar},
              {"q0", p.q0},
              {"d_star", p.d_star},
              {"K_star", p.K_star},
              {"nu_c_star", p.nu_c_star.to_string()},
              {"zeta", p.zeta},
              {"u_N", p.u_N},
              {"s_N", p.s_N},
              {"d0_hat", r.estimate.d0_hat},
              {"statistic", r.statistic},
              {"decision", r.reject ? "reject" : "accept"},
              {"flags", {{"reduction_ratio", p.reduction_ratio}, {"bias_term", p.bias_term}}},
              {"estimate", to_json(r.estimate)}};
    if (p.q0 == 1) {
        j["limit"] = {{"kind", "gaussian"}, {"n_J_variance", p.law.d0_variance}};
    } else {
        j["limit"] = {{"kind", "rosenblatt"},
                      {"L_q0", p.law.L_q0},
                      {"L_q0_minus_1", p.law.L_q0m1},
                      {"scale", p.law.rosenblatt_scale}};
    }
    if (p.quantile)
        j["quantile"] = {{"prob", p.quantile->prob},       {"value", p.quantile->quantile},
                         {"mc_reps", p.quantile->reps},    {"seed", p.quantile->seed},
                         {"n_internal", p.quantile->n_internal}, {"from_cache", p.quantile->from_cache}};
    return j;
}

struct Loaded {
    Eigen::VectorXd y;
    json provenance;
    bool simulated;
};

Loaded load_series(const ExperimentConfig& c, const HermiteExpansion& e) {
    if (!c.input.empty()) {
        Series s = ingest(c.input);
        return {s.values, {{"source", s.source}, {"hash", s.hash}, {"length", s.values.size()}}, false};
    }
    detail::PathSimulator sim(c, e, c.N);
    json prov = {{"source", "simulated"}, {"replicate", 0}, {"length", c.N}};
    if (!sim.sampler().exact()) prov["warnings"] = sim.sampler().warnings();
    return {sim.path(0), prov, true};
}

int mode_simulate(const ExperimentConfig& c, OutputSet& out) {
    HermiteExpansion e = make_expansion(c.G);
    detail::PathSimulator sim(c, e, c.N);
    json rep = detail::report_header(c);
    json files = json::array();
    for (int r = 0; r < c.replicates; ++r) {
        std::string name = "path_" + std::to_string(r) + ".csv";
        write_series(out.file(name), sim.path(r));
        files.push_back(name);
    }
    rep["paths"] = files;
    rep["circulant_exact"] = sim.sampler().exact();
    rep["warnings"] = sim.sampler().warnings();
    out.write_json("simulate.json", rep);
    return 0;
}

int mode_analyze(const ExperimentConfig& c, OutputSet& out) {
    HermiteExpansion e = make_expansion(c.G);
    Loaded s = load_series(c, e);
    const int jmax = detail::max_scale(s.y.size(), c.M);
    if (jmax < 1) throw ScaleError("series too short for any scale");
    FilterBank bank = build_bank(c.family, c.M, jmax);
    std::ostringstream table, coeffs;
    table << "j,n_j,sigma2,log2_sigma2\n";
    coeffs << "j,k,value\n";
    table.precision(17);
    coeffs.precision(17);
    for (int j = 1; j <= jmax; ++j) {
        ScalogramSummary sc = scalogram(s.y, bank, j, c.dump_coefficients);
        table << j << "," << sc.n << "," << sc.sigma2 << "," << std::log2(sc.sigma2) << "\n";
        if (c.dump_coefficients)
            for (long k = 0; k < sc.n; ++k) coeffs << j << "," << sc.k_first + k << "," << sc.coeffs(k) << "\n";
    }
    out.write_text("scalogram.csv", table.str());
    if (c.dump_coefficients) out.write_text("coefficients.csv", coeffs.str());
    json norms = json::array();
    for (int j = 1; j <= jmax; ++j) norms.push_back(bank.filter(j).norm());
    json rep = detail::report_header(c);
    rep["series"] = s.provenance;
    rep["bank"] = {{"family", bank.family},
                   {"M", bank.M},
                   {"T", bank.T},
                   {"jmax", bank.jmax},
                   {"norms", norms},
                   {"validation",
                    {{"support_A", bank.validation.support_A},
                     {"w1", bank.validation.w1},
                     {"envelope_alpha", bank.validation.envelope_alpha},
                     {"envelope_C", bank.validation.envelope_C},
                     {"w2", bank.validation.w2},
                     {"w3_gaps", bank.validation.w3_gaps},
                     {"w3", bank.validation.w3},
                     {"note", bank.validation.note}}}};
    out.write_json("analyze.json", rep);
    return 0;
}

int mode_estimate(const ExperimentConfig& c, OutputSet& out) {
    HermiteExpansion e = make_expansion(c.G);
    Loaded s = load_series(c, e);
    FilterBank bank = build_bank(c.family, c.M, c.j + c.p);
    std::optional<double> d, zeta;
    if (s.simulated) {
        HermiteRank rank = hermite_rank(e);
        d = c.model.d;
        zeta = zeta_exponent(c.beta_smooth, c.model.d, rank.q0, rank.q1);
    }
    EstimationReport r = estimate_d0(s.y, bank, c.j, c.p, d, zeta);
    json rep = detail::report_header(c);
    rep["series"] = s.provenance;
    rep["estimate"] = to_json(r);
    out.write_json("estimate.json", rep);
    std::cout << "d0_hat = " << r.d0_hat << "\n";
    return 0;
}

int mode_test(const ExperimentConfig& c, OutputSet& out) {
    HermiteExpansion e = make_expansion(c.G);
    Loaded s = load_series(c, e);
    FilterBank bank = build_bank(c.family, c.M, c.j + c.p);
    QuantileCache cache(c.quantile_cache);
    QuantileOptions q{c.quantile_n_internal, c.quantile_reps, c.quantile_seed, &cache};
    TestReport r = run_test(s.y, bank, c.j, c.p, *c.d0_star, c.alpha, c.K_bar, e, c.beta_smooth, q);
    json rep = detail::report_header(c);
    rep["series"] = s.provenance;
    rep["test"] = to_json(r);
    out.write_json("test.json", rep);
    std::cout << "decision = " << (r.reject ? "reject" : "accept") << " (|d0_hat - d0*| = " << r.statistic
              << ", s_N = " << r.plan.s_N << ")\n";
    if (c.enforce) {
        if (r.plan.reduction_ratio > c.max_reduction_ratio) {
            std::ostringstream os;
            os << "reduction ratio " << r.plan.reduction_ratio << " exceeds " << c.max_reduction_ratio;
            throw PreconditionError(os.str());
        }
        if (r.plan.bias_term > c.max_bias_term) {
            std::ostringstream os;
            os << "bias term " << r.plan.bias_term << " exceeds " << c.max_bias_term;
            throw PreconditionError(os.str());
        }
    }
    return 0;
}

int mode_nu_c(const ExperimentConfig& c, OutputSet& out) {
    json rep = detail::report_header(c);
    rep["cases"] = json::array();
    for (double d : c.nu_c_d_values) {
        json r = nu_c_report(c.G, d);
        std::cout << r.dump(2) << "\n";
        rep["cases"].push_back(r);
    }
    out.write_json("nu_c.json", rep);
    return 0;
}

}  // namespace

nlohmann::json nu_c_report(const GSpec& g, double d) {
    HermiteExpansion e = make_expansion(g);
    RankProfile prof = rank_profile(nonzero_indices(e), d);
    CriticalExponentDetail det = critical_exponent_detail(prof, d);
    json gaps = json::object(), ells = json::object();
    for (const auto& [r, set] : prof.gap_sets) gaps[std::to_string(r)] = set;
    for (const auto& [r, l] : prof.ell_markers) ells[std::to_string(r)] = l;
    json terms = json::array();
    for (const auto& [name, v] : det.terms) terms.push_back({{"term", name}, {"value", v}});
    json r = {{"d", d},
              {"q_indices", prof.q_indices},
              {"q0", prof.q0},
              {"gap_sets", gaps},
              {"ell_markers", ells},
              {"Q", prof.Q_set},
              {"J_d", prof.Jd_set},
              {"nu_c", det.value.to_string()},
              {"branch", det.branch},
              {"rule", det.rule},
              {"terms", terms}};
    if (prof.q1) r["q1"] = *prof.q1;
    return r;
}

Eigen::VectorXd simulate_path(const ExperimentConfig& c, const HermiteExpansion& e, long N, std::uint64_t replicate) {
    return detail::PathSimulator(c, e, N).path(replicate);
}

int run(const ExperimentConfig& c) {
    OutputSet out(c.out_dir);
    int status = 0;
    if (c.mode == "simulate") status = mode_simulate(c, out);
    else if (c.mode == "analyze") status = mode_analyze(c, out);
    else if (c.mode == "estimate") status = mode_estimate(c, out);
    else if (c.mode == "test") status = mode_test(c, out);
    else if (c.mode == "nu-c") status = mode_nu_c(c, out);
    else if (c.mode == "mc-experiment") detail::run_mc_experiment(c, out);
    else throw ConfigError("mode: unknown mode '" + c.mode + "'");
    out.commit();
    return status;
}

int main_entry(int argc, char** argv) {
    CLI::App app{"Wavelet scalogram analysis of non-linear long-memory series"};
    std::string mode, config, out_dir;
    std::optional<std::uint64_t> seed;
    app.add_option("mode", mode, "simulate | analyze | estimate | test | mc-experiment | nu-c")->required();
    app.add_option("--config", config, "JSON config")->required();
    app.add_option("--seed", seed, "root seed override");
    app.add_option("--out", out_dir, "output directory override");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        ExperimentConfig c = load_config(config, mode, seed);
        if (!out_dir.empty()) {
            c.out_dir = out_dir;
            c.resolved["out_dir"] = out_dir;
        }
        return run(c);
    } catch (const Error& e) {
        std::cerr << "scalolab: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::config: return 2;
            case ErrorKind::precondition: return 4;
            default: return 3;
        }
    } catch (const std::exception& e) {
        std::cerr << "scalolab: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace scalolab::harness
