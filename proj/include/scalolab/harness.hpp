#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "scalolab/expansion.hpp"
#include "scalolab/spectral.hpp"
#include "scalolab/wavelet.hpp"

namespace scalolab::harness {

inline constexpr const char* kVersion = "scalolab 0.1.0";

struct GSpec {
    // hermite | polynomial | exp-centered | sign | abs-centered | hermite-sum
    std::string kind = "hermite";
    int q = 1;
    std::vector<double> poly;          // monomial coefficients, lowest first
    double t = 1.0;                    // exp-centered
    std::map<int, double> coeffs;      // hermite-sum: q -> c_q
};

struct ScheduleEntry {
    long N;
    int j;
};

struct ExperimentConfig {
    std::string mode;
    MemoryParams model;
    std::vector<double> ma;
    double beta_smooth = 2.0;
    GSpec G;
    std::string family = "daubechies";
    int M = 3;
    long N = 1 << 14;
    int j = 4;
    int p = 3;
    int replicates = 1;
    std::uint64_t seed = 1;
    std::string input;
    std::filesystem::path out_dir = "out";
    bool dump_coefficients = false;
    // test
    std::optional<double> d0_star;
    double alpha = 0.1;
    int K_bar = 0;
    int quantile_n_internal = 1 << 14;
    std::size_t quantile_reps = 10000;
    std::uint64_t quantile_seed = 20240601;
    std::string quantile_cache;
    bool enforce = false;
    double max_reduction_ratio = 1.0;
    double max_bias_term = 1.0;
    // mc-experiment
    std::string experiment = "estimator";  // slope | estimator | test
    std::string regime;                    // "", large-scale, small-scale
    std::vector<ScheduleEntry> schedule;
    double slope_tolerance = 0.1;
    unsigned threads = 0;
    // nu-c
    std::vector<double> nu_c_d_values;

    nlohmann::json resolved;  // normalized config embedded in every report
};

// Field paths appear in ConfigError messages, e.g. "model.d".
ExperimentConfig parse_config(const nlohmann::json& j, const std::string& mode_override = "",
                              std::optional<std::uint64_t> seed_override = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path, const std::string& mode_override = "",
                             std::optional<std::uint64_t> seed_override = std::nullopt);

RealFunction make_G(const GSpec& g);
HermiteExpansion make_expansion(const GSpec& g);
SpectralModel make_model(const ExperimentConfig& c);

struct Series {
    Eigen::VectorXd values;
    std::string source;
    std::string hash;  // FNV-1a 64 of the file bytes, hex
};

Series ingest(const std::filesystem::path& csv);
void write_series(const std::filesystem::path& csv, const Eigen::VectorXd& x);

// Files created during a run; removed again if the run fails.
class OutputSet {
public:
    explicit OutputSet(std::filesystem::path dir);
    std::filesystem::path file(const std::string& name);
    void write_text(const std::string& name, const std::string& text);
    void write_json(const std::string& name, const nlohmann::json& j);
    void commit() { committed_ = true; }
    ~OutputSet();
    const std::vector<std::filesystem::path>& written() const { return written_; }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> written_;
    bool committed_ = false;
};

// Y = Delta^{-K} G(X) for one replicate.
Eigen::VectorXd simulate_path(const ExperimentConfig& c, const HermiteExpansion& e, long N,
                              std::uint64_t replicate);

nlohmann::json nu_c_report(const GSpec& g, double d);

// Returns the process exit status; throws scalolab::Error on failure.
int run(const ExperimentConfig& c);

// CLI entry point: scalolab <mode> --config path [--seed u64] [--out dir]
int main_entry(int argc, char** argv);

}  // namespace scalolab::harness
