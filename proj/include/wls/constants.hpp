#pragma once

#include "wls/parameter_space.hpp"

namespace wls {

struct ConstantsReport {
    double c_nd = 0.0;     // normalization of g*
    double c_star = 0.0;   // C*_{beta,gamma}
    double k_star = 0.0;   // K*_{n,alpha} = C* - log alpha
    double y_star = 0.0;   // entropy of g*^2
    double sigma_d = 0.0;  // |S^{d-1}|
};

double sphere_volume(int d);
double log_sphere_volume(int d);

ConstantsReport evaluate_constants(const DerivedParams& dp, int d);

// -log((sigma_d/2) alpha^{n-1} (n e/2)^{n/2} Gamma(n/2)).
double c_star_alternative(const DerivedParams& dp, int d);

// Lowest non-radial eigenvalue shift; negative iff alpha > alpha_FS.
double lambda1(int d, double n, double alpha);

double delta_coefficient(int d, double n);

struct HyperSchedule {
    double sigma = 0.0;
    double t_star = 0.0;
    double h_const = 0.0;
};

HyperSchedule hyper_schedule(double n, double c, double q, double r);

}  // namespace wls
