#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "scalolab/errors.hpp"
#include "scalolab/harness.hpp"

namespace scalolab::harness {

namespace {

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

Series ingest(const std::filesystem::path& csv) {
    std::ifstream in(csv, std::ios::binary);
    if (!in) throw ConfigError("input: cannot open '" + csv.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();

    std::vector<double> values;
    std::istringstream lines(bytes);
    std::string line;
    long row = 0;
    while (std::getline(lines, line)) {
        ++row;
        std::string cell = trim(line);
        if (cell.empty()) continue;
        if (cell.find(',') != std::string::npos) {
            std::ostringstream os;
            os << csv.string() << " row " << row << ": expected a single column";
            throw ParseError(os.str());
        }
        char* end = nullptr;
        double v = std::strtod(cell.c_str(), &end);
        bool numeric = end != cell.c_str() && *end == '\0';
        if (!numeric) {
            if (values.empty() && row == 1) continue;  // header
            std::ostringstream os;
            os << csv.string() << " row " << row << ": not a number ('" << cell << "')";
            throw ParseError(os.str());
        }
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << csv.string() << " row " << row << ": non-finite value";
            throw ParseError(os.str());
        }
        values.push_back(v);
    }
    if (values.size() < 64) {
        std::ostringstream os;
        os << csv.string() << ": " << values.size() << " rows, need at least 64";
        throw ParseError(os.str());
    }
    Series s;
    s.values = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    s.source = csv.string();
    s.hash = fnv1a_hex(bytes);
    return s;
}

void write_series(const std::filesystem::path& csv, const Eigen::VectorXd& x) {
    std::ofstream out(csv);
    if (!out) throw ConfigError("cannot write '" + csv.string() + "'");
    out << "value\n" << std::setprecision(17);
    for (Eigen::Index i = 0; i < x.size(); ++i) out << x(i) << "\n";
}

OutputSet::OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw ConfigError("out_dir: cannot create '" + dir_.string() + "': " + ec.message());
}

std::filesystem::path OutputSet::file(const std::string& name) {
    auto p = dir_ / name;
    written_.push_back(p);
    return p;
}

void OutputSet::write_text(const std::string& name, const std::string& text) {
    auto p = file(name);
    std::ofstream out(p);
    if (!out) throw ConfigError("cannot write '" + p.string() + "'");
    out << text;
}

void OutputSet::write_json(const std::string& name, const nlohmann::json& j) { write_text(name, j.dump(2) + "\n"); }

OutputSet::~OutputSet() {
    if (committed_) return;
    for (const auto& p : written_) {
        std::error_code ec;
        std::filesystem::remove(p, ec);
    }
}

}  // namespace scalolab::harness
