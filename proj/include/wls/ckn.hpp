#pragma once

#include <vector>

#include "wls/parameter_space.hpp"

namespace wls {

struct CknPoint {
    double p = 0.0;
    double theta = 0.0;
    double zeta = 0.0;
    double b = 0.0;
    double c_star_p = 0.0;  // value of the CKN quotient at the Aubin-Talenti profile
    double k_star_p = 0.0;  // same quantity in alpha-coordinates, c_star_p = alpha^zeta k_star_p
    double log_c_star_p = 0.0;
    Region region = Region::Inadmissible;
};

double ckn_b(double n, double p);
double ckn_theta(const ProblemParams& params, double p);
// theta/2 + (1-theta)/(p+1) - 1/(2p)
double zeta_from_theta(double theta, double p);
// (p-1) / (p b(p))
double ckn_zeta(double n, double p);

// Throws DomainError unless admissible and 1 < p <= p_star.
CknPoint ckn_constants(const ProblemParams& params, double p);

struct LimitProbe {
    double limit = 0.0;      // Richardson limit of 4 (C_p - 1)/(p - 1)
    double log_limit = 0.0;  // same for 4 log C_p / (p - 1)
    std::vector<double> raw;
    std::vector<double> diagonal;  // successive extrapolated estimates
};

// p_seq must be decreasing towards 1 with ratio (p_k - 1)/(p_{k+1} - 1) = 2.
// Throws ConvergenceError when the extrapolated estimates do not settle and
// ConsistencyError when the two variants disagree.
LimitProbe limit_probe(const ProblemParams& params, const std::vector<double>& p_seq);

// p_seq = 1 + 2^{-k}, k = k_min..k_max
std::vector<double> dyadic_sequence(int k_min = 6, int k_max = 16);

// (1 + |x|^{2+beta-gamma})^{-1/(p-1)}
double aubin_talenti_eval(const ProblemParams& params, double p, double x_abs);
// (1 + (p-1) s^2 / 2)^{-1/(p-1)}, which tends to exp(-s^2/2) as p -> 1.
double aubin_talenti_alpha_profile(double p, double s);

}  // namespace wls
