#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "wls/parameter_space.hpp"
#include "wls/quadrature.hpp"

namespace wls {

// A radial profile with its first derivative.
struct Profile {
    std::function<double(double)> value;
    std::function<double(double)> slope;
};

struct AngularMode {
    int ell = 1;
    Profile amplitude;
};

// g(s, omega) = g0(s) + g1(s) Y_ell(omega).
struct Candidate {
    Profile radial;
    std::optional<AngularMode> mode;
};

Profile zero_profile();

// Zonal harmonic of degree ell on S^{d-1} as a function of the polar angle.
double zonal_harmonic(int d, int ell, double theta);

// g* = c_{n,d} exp(-s^2/4).
Profile optimizer_profile(const DerivedParams& dp);

// Optimizer of the sigma form: (2 sigma/alpha^2)^{n/4} g*(sqrt(2 sigma) s / alpha).
Profile sigma_optimizer_profile(const DerivedParams& dp, double sigma);

// c s^{1+delta} exp(-s^2/4) with delta = lambda1 / alpha^2 and
// c = exp(log_factor), evaluated in log form.
Profile instability_mode_profile(const DerivedParams& dp, double log_factor = 0.0);

struct EvalSettings {
    int radial_count = 512;
    int sphere_count = 48;
    double scale = 1.0;
    RadialKind kind = RadialKind::adaptive_panel;
};

struct NormsEntropy {
    double norm_sq = 0.0;
    double grad_sq = 0.0;
    double entropy = 0.0;      // int |g|^2 log(|g|^2 / norm_sq)
    double entropy_raw = 0.0;  // int |g|^2 log |g|^2
    double second_moment = 0.0;  // int |g|^2 s^2
};

NormsEntropy norms_and_entropy(const Candidate& c, const DerivedParams& dp, const EvalSettings& settings = {});

enum class DeficitForm { scale_invariant, sigma_form, gaussian_form };

struct DeficitSpec {
    DeficitForm form = DeficitForm::scale_invariant;
    double k = 0.0;
    double sigma = 0.5;
};

struct DeficitReport {
    double norm_sq = 0.0;
    double grad_sq = 0.0;
    double entropy = 0.0;
    double deficit = 0.0;
    DeficitSpec spec;
};

// For gaussian_form the candidate is v and every integral is taken against
// d nu_sigma = |g*^{alpha,sigma}|^2 d mu_n.
DeficitReport deficit(const Candidate& c, const DerivedParams& dp, const DeficitSpec& spec,
                      const EvalSettings& settings = {});

double log_holder_gap(const Candidate& c, const DerivedParams& dp, double p, const EvalSettings& settings = {});

double potential(const DerivedParams& dp, double sigma, double x_abs);
double potential_min_radius(const DerivedParams& dp, double sigma);

// g = e^{(n+1)/2} exp(-s^2 / (2 alpha^2)), an exact radial solution.
Profile el_solution_profile(const DerivedParams& dp);

// |-L g + g - g log g^2| / max|g| on s_j = (j+1) h, 4th-order differences
// (one-sided at the two ends of the grid).
std::vector<double> el_residual_nodes(const Profile& g, const DerivedParams& dp, int grid_size = 2048);

// Maximum of el_residual_nodes over interior nodes.
double el_residual(const Profile& g, const DerivedParams& dp, int grid_size = 2048);

}  // namespace wls
