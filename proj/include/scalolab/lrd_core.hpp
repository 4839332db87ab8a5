#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "scalolab/extended_real.hpp"

namespace scalolab {

// Tolerance used for rational-boundary detection (s(1-2d) = 1) and for
// snapping delta(q) to zero.
inline constexpr double kBoundaryTol = 1e-12;

struct MemoryParams {
    double d = 0.25;
    int K = 0;
};

void validate(const MemoryParams& params);

struct DeltaPair {
    double delta;
    double delta_plus;
};

// delta(q) = q d - (q-1)/2 for q >= 1, delta(0) = 1/2.
DeltaPair delta_exponents(int q, double d);
double delta(int q, double d);
double delta_plus(int q, double d);

// True when d = 1/2 - 1/(2q) for some integer q >= 2.
bool on_boundary_lattice(double d);
void require_off_boundary(double d);

// epsilon(p) = 1 iff some s in {1..p} has s(1-2d) = 1.
int epsilon(int p, double d);

// Lambda_s(a) = prod (a_i!)^{1-2d}
double lambda_factor(const std::vector<int>& a, double d);

struct ChaosExponents {
    double alpha = 0.5;
    double beta = 0.0;        // beta(q, p)
    double beta_other = 0.0;  // beta(q', p)
    double beta_prime = 0.0;
    int epsilon = 0;          // epsilon(q + q' - 2p)
    int epsilon_other = 0;    // epsilon(q')
    double lambda_factor = 1.0;
};

double alpha_exponent(int q, int qp, int p, double d);
double beta_exponent(int q, int p, double d);
double beta_prime_exponent(int q, int qp, int p, double d);
ChaosExponents chaos_exponents(int q, int qp, int p, double d);

struct RankProfile {
    std::vector<int> q_indices;
    int q0 = 0;
    std::optional<int> q1;
    std::map<int, std::set<int>> gap_sets;  // r -> I_r
    std::map<int, int> ell_markers;         // r -> l_r
    std::set<int> Q_set;
    std::set<int> Jd_set;
};

RankProfile rank_profile(std::vector<int> coeff_indices, double d);

struct CriticalExponentDetail {
    ExtendedReal value = ExtendedReal::infinity();
    int branch = 0;  // 1..7, in the order of the definition
    std::string rule;
    std::vector<std::pair<std::string, double>> terms;
};

CriticalExponentDetail critical_exponent_detail(const RankProfile& profile, double d);
ExtendedReal critical_exponent(const RankProfile& profile, double d);

double zeta_exponent(double beta_smooth, double d, int q0, std::optional<int> q1,
                     double eps_shrink = 1e-6);

// Rate part of the chaos bound; the multiplicative constant is not known.
double rate_bound(int q, int qp, int p, double n, double gamma, const MemoryParams& params);

}  // namespace scalolab
