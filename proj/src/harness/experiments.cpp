#include <cmath>
#include <limits>
#include <sstream>

#include "internal.hpp"
#include "scalolab/errors.hpp"
#include "scalolab/inference.hpp"
#include "scalolab/lrd_core.hpp"
#include "scalolab/stats.hpp"

namespace scalolab::harness::detail {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Row {
    long N;
    int j;
    std::string regime;
    double reduction_ratio = kNaN;
    double mean = kNaN, bias = kNaN, sd = kNaN, rmse = kNaN, skewness = kNaN, ad_pvalue = kNaN;
    double rejection_rate = kNaN;
    double slope_expected = kNaN, slope_mean = kNaN;
    int slope_pass = -1;
};

std::string cell(double v) {
    if (std::isnan(v)) return "";
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

double reduction_ratio(long N, int j, const ExtendedReal& nu) {
    if (nu.is_infinite()) return 0.0;
    return std::ldexp(static_cast<double>(N), -j) / std::exp2(j * nu.value());
}

}  // namespace

void run_mc_experiment(const ExperimentConfig& c, OutputSet& out) {
    HermiteExpansion e = make_expansion(c.G);
    HermiteRank rank = hermite_rank(e);
    const double d = c.model.d;
    RankProfile prof = rank_profile(nonzero_indices(e), d);
    const ExtendedReal nu = critical_exponent(prof, d);
    const double d0 = c.model.K + delta(rank.q0, d);

    std::vector<ScheduleEntry> schedule = c.schedule;
    if (schedule.empty()) {
        if (c.regime.empty()) {
            schedule.push_back({c.N, c.j});
        } else {
            const int top = max_scale(c.N, c.M) - c.p;
            for (int j = 1; j <= top; ++j) {
                bool large = reduction_ratio(c.N, j, nu) < 1.0;
                if ((c.regime == "large-scale") == large) schedule.push_back({c.N, j});
            }
            if (schedule.empty()) throw ConfigError("experiment.regime: no scale of N falls in the " + c.regime + " regime");
        }
    }

    std::vector<Row> rows;
    for (const auto& s : schedule) {
        FilterBank bank = build_bank(c.family, c.M, s.j + c.p);
        PathSimulator sim(c, e, s.N);
        Row row{s.N, s.j, ""};
        row.reduction_ratio = reduction_ratio(s.N, s.j, nu);
        row.regime = row.reduction_ratio < 1.0 ? "large-scale" : "small-scale (exploratory)";

        const std::size_t R = static_cast<std::size_t>(c.replicates);
        std::vector<double> value(R, kNaN), slope(R, kNaN);
        std::vector<int> reject(R, 0);
        std::optional<TestPlan> plan;
        QuantileCache cache(c.quantile_cache);
        if (c.experiment == "test") {
            QuantileOptions q{c.quantile_n_internal, c.quantile_reps, c.quantile_seed, &cache};
            plan = plan_test(bank, s.N, s.j, c.p, *c.d0_star, c.alpha, c.K_bar, e, c.beta_smooth, q);
        }
        parallel_for(
            R,
            [&](std::size_t r) {
                Eigen::VectorXd y = sim.path(r);
                if (c.experiment == "slope") {
                    Eigen::VectorXd js(c.p + 1), ls(c.p + 1);
                    for (int i = 0; i <= c.p; ++i) {
                        js(i) = s.j + i;
                        ls(i) = std::log2(scalogram(y, bank, s.j + i).sigma2);
                    }
                    slope[r] = ols_slope(js, ls);
                } else if (c.experiment == "estimator") {
                    value[r] = estimate_d0(y, bank, s.j, c.p).d0_hat;
                } else {
                    TestReport t = run_test(y, bank, *plan);
                    value[r] = t.estimate.d0_hat;
                    reject[r] = t.reject ? 1 : 0;
                }
            },
            c.threads);

        if (c.experiment == "slope") {
            row.slope_expected = 2.0 * d0;
            row.slope_mean = mean(slope);
            row.sd = R > 1 ? std::sqrt(variance(slope)) : kNaN;
            row.slope_pass = std::abs(row.slope_mean - row.slope_expected) <= c.slope_tolerance ? 1 : 0;
        } else {
            const double target = c.experiment == "test" ? *c.d0_star : d0;
            row.mean = mean(value);
            row.bias = row.mean - target;
            double ss = 0.0;
            for (double v : value) ss += (v - d0) * (v - d0);
            row.rmse = std::sqrt(ss / R);
            if (R > 1) row.sd = std::sqrt(variance(value));
            if (R > 2) row.skewness = skewness(value);
            if (R >= 8) row.ad_pvalue = anderson_darling_normal(value).p_value;
            if (c.experiment == "test") {
                long k = 0;
                for (int v : reject) k += v;
                row.rejection_rate = static_cast<double>(k) / R;
            }
        }
        rows.push_back(row);
    }

    std::ostringstream csv;
    csv << "N,j,p,replicates,regime,reduction_ratio,mean,bias,sd,rmse,skewness,ad_pvalue,rejection_rate,"
           "slope_expected,slope_mean,slope_pass\n";
    json jrows = json::array();
    for (const auto& r : rows) {
        csv << r.N << "," << r.j << "," << c.p << "," << c.replicates << "," << r.regime << ","
            << cell(r.reduction_ratio) << "," << cell(r.mean) << "," << cell(r.bias) << "," << cell(r.sd) << ","
            << cell(r.rmse) << "," << cell(r.skewness) << "," << cell(r.ad_pvalue) << ","
            << cell(r.rejection_rate) << "," << cell(r.slope_expected) << "," << cell(r.slope_mean) << ","
            << (r.slope_pass < 0 ? "" : std::to_string(r.slope_pass)) << "\n";
        json jr = {{"N", r.N}, {"j", r.j}, {"regime", r.regime}, {"reduction_ratio", r.reduction_ratio}};
        auto put = [&](const char* k, double v) {
            if (!std::isnan(v)) jr[k] = v;
        };
        put("mean", r.mean);
        put("bias", r.bias);
        put("sd", r.sd);
        put("rmse", r.rmse);
        put("skewness", r.skewness);
        put("ad_pvalue", r.ad_pvalue);
        put("rejection_rate", r.rejection_rate);
        put("slope_expected", r.slope_expected);
        put("slope_mean", r.slope_mean);
        if (r.slope_pass >= 0) jr["slope_pass"] = r.slope_pass == 1;
        jrows.push_back(jr);
    }
    out.write_text("aggregate.csv", csv.str());
    json rep = report_header(c);
    rep["experiment"] = c.experiment;
    rep["d0"] = d0;
    rep["nu_c"] = nu.to_string();
    rep["rows"] = jrows;
    out.write_json("mc_experiment.json", rep);
}

}  // namespace scalolab::harness::detail
