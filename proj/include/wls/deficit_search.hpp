#pragma once

#include <cstdint>
#include <vector>

#include "wls/functionals.hpp"
#include "wls/parameter_space.hpp"

namespace wls {

enum class AnsatzKind { radial_spline, gaussian_times_poly, eigenmode_perturbation };

const char* to_string(AnsatzKind k);

// radial_spline:          g*(s) exp(B(s)), B a uniform cubic B-spline with
//                         knots on [0, spline_span]
// gaussian_times_poly:    exp(-e^{c0} s^2/4) (1 + sum_k c_k s^{2k}/(2k)!)^2
// eigenmode_perturbation: g* exp(c0 s^2/8 + c1 s^4/64) + epsilon phi_1 Y_1,
//                         phi_1 Y_1 scaled to unit norm like g*
struct Ansatz {
    AnsatzKind kind = AnsatzKind::radial_spline;
    std::vector<double> coefficients;
    double epsilon = 0.0;
};

inline constexpr double spline_span = 8.0;

// Number of coefficients searched for a family (epsilon included for the
// eigenmode family, stored separately in Ansatz::epsilon).
int ansatz_dimension(AnsatzKind k);
Ansatz zero_ansatz(AnsatzKind k);
Candidate make_candidate(const Ansatz& a, const DerivedParams& dp);

struct SearchSettings {
    int budget = 400;  // objective evaluations, >= 100
    std::uint64_t seed = 20240611;
    int restarts = 4;
    EvalSettings eval{512, 24, 1.0, RadialKind::adaptive_panel};
};

struct SearchResult {
    double best_deficit = 0.0;  // scale-invariant deficit at K*, per unit norm
    double k_implied = 0.0;     // smallest K the best candidate allows
    Ansatz ansatz;
    int iterations = 0;
    bool converged = false;
    std::vector<double> history;  // best value after each evaluation
};

// Deficit at K* divided by the norm, for a fixed candidate.
double normalized_deficit(const Candidate& c, const DerivedParams& dp, const EvalSettings& settings);
double implied_k(const Candidate& c, const DerivedParams& dp, const EvalSettings& settings);

// Nelder-Mead (GSL nmsimplex2) with restarts. The objective is
// (n alpha^2/4) (1 - rhs/|D g|^2), which is invariant under multiplication
// and dilation and equals the normalized deficit at the scale of g*.
SearchResult minimize_deficit(const ProblemParams& params, AnsatzKind family, const SearchSettings& settings = {});

enum class CertificateVerdict { certified_breaking, no_improvement };

const char* to_string(CertificateVerdict v);

struct Certificate {
    CertificateVerdict verdict = CertificateVerdict::no_improvement;
    double epsilon = 0.0;
    double deficit = 0.0;  // normalized deficit of g* + epsilon phi_1 Y_1
    std::vector<double> eps_grid;
    std::vector<double> deficit_grid;
};

// Line search along g* + epsilon phi_1 Y_1 on a log grid 1e-4..1, refined by
// Brent's method; certified when the deficit is below -1e-8.
Certificate sb_certificate(const ProblemParams& params, const EvalSettings& settings = {256, 24, 1.0,
                                                                                      RadialKind::adaptive_panel},
                           int grid_points = 25);

struct CertificateCell {
    ProblemParams params;
    Region region = Region::Inadmissible;
    bool evaluated = false;
    Certificate certificate;
};

// steps x steps grid, gamma outer, beta inner over the admissible strip
// beta in (gamma-2, (d-2) gamma/d), gamma in (gamma_min, gamma_max).
std::vector<ProblemParams> certificate_points(int d, double gamma_min, double gamma_max, int steps);
std::vector<CertificateCell> certificate_grid_serial(const std::vector<ProblemParams>& points,
                                                     const EvalSettings& settings, int grid_points = 25);
std::vector<CertificateCell> certificate_grid_parallel(const std::vector<ProblemParams>& points,
                                                       const EvalSettings& settings, int grid_points = 25);

}  // namespace wls
