#pragma once

#include <memory>
#include <span>
#include <vector>

namespace wls {

enum class RadialKind { gauss_transformed, adaptive_panel };

// Integrates f(s) against s^{n-1} ds on (0, inf), or against
// s^{n-1} exp(-s^2 / (2 scale^2)) ds when `gaussian` is set.
struct RadialRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    double exponent = 0.0;  // n - 1
    RadialKind kind = RadialKind::adaptive_panel;
    bool gaussian = false;
    double scale = 1.0;
};

double default_s_max(double n);

RadialRule radial_rule(double n, int count, RadialKind kind, bool gaussian = false, double scale = 1.0);

// Azimuthal rule on S^{d-1}: theta in (0, pi), or (0, 2 pi) for d = 2.
// Weights integrate against the surface measure, or its normalization.
struct SphereRule {
    int d = 2;
    std::vector<double> theta;
    std::vector<double> weights;
    bool normalized = false;
};

SphereRule sphere_rule(int d, int count, bool normalized = false);

struct RadialField {
    std::shared_ptr<const RadialRule> rule;
    std::vector<double> values;
};

double integrate(std::span<const double> values, const RadialRule& rule);
double integrate(const RadialField& field);
double integrate(std::span<const double> values, const SphereRule& rule);

// Symmetric tridiagonal Golub-Welsch: diag alpha_k, off-diagonal beta_k
// (squared, k = 1..m-1), zeroth moment mu0.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule golub_welsch(std::span<const double> diag, std::span<const double> offdiag_sq, double mu0);

// Gauss rule for weight x^b on [0, 1].
GaussRule gauss_jacobi_unit(int m, double b);

// Gauss-Legendre on [-1, 1].
GaussRule gauss_legendre(int m);

}  // namespace wls
