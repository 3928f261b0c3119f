#pragma once

#include <functional>
#include <vector>

#include "wls/functionals.hpp"
#include "wls/jet.hpp"
#include "wls/parameter_space.hpp"

namespace wls {

using Jet3 = Jet<3>;

// Azimuthal pressure p(r, theta) written over jets; its partial derivatives
// are exact (automatic differentiation), never finite differences.
using PressureFn = std::function<Jet3(const Jet3& r, const Jet3& theta)>;

struct PressureSample {
    double r = 1.0, theta = 1.0;
    double p = 0, pr = 0, pt = 0;
    double prr = 0, prt = 0, ptt = 0;
    double prrr = 0, prrt = 0, prtt = 0, pttt = 0;
    int order = 3;  // highest derivative order supplied
};

PressureSample sample_pressure(const PressureFn& p, double r, double theta);

struct PressureField {
    std::vector<PressureSample> samples;
};

// Tensor grid of samples.
PressureField make_pressure_field(const PressureFn& p, const std::vector<double>& r_nodes,
                                  const std::vector<double>& theta_nodes);

enum class OperatorKind { D_alpha, L_alpha, laplace_beltrami };

// D_alpha: (alpha p_r, p_theta / r); the scalar operators fill `radial`.
struct OperatorValue {
    double radial = 0.0;
    double angular = 0.0;
};

OperatorValue apply_operator(OperatorKind which, const PressureSample& s, const DerivedParams& dp);
std::vector<OperatorValue> apply_operator(OperatorKind which, const PressureField& f, const DerivedParams& dp);

struct BulkTerms {
    double direct = 0.0;        // 1/2 L|Dp|^2 - Dp.DLp - (Lp)^2/n
    double hessian_term = 0.0;  // alpha^4 (1-1/n) |p'' - p'/r - ...|^2
    double mixed_term = 0.0;    // (2 alpha^2/r^2) |grad p' - grad p / r|^2
    double k_term = 0.0;        // k[p] / r^4
    double scale = 0.0;         // largest of the three pieces of `direct`
};

BulkTerms k_bulk_point(const PressureSample& s, const DerivedParams& dp);

struct IdentityReport {
    double max_residual = 0.0;      // relative to the largest term or piece of `direct`
    double max_abs_residual = 0.0;
    double max_term = 0.0;
    double min_hessian_term = 0.0;
    double min_mixed_term = 0.0;
    std::vector<BulkTerms> terms;
};

IdentityReport k_bulk(const PressureField& f, const DerivedParams& dp);

// k[p] from angular derivatives of p at polar angle theta.
double k_sphere(double pt, double ptt, double pttt, double theta, const DerivedParams& dp);

// Positive azimuthal profile u(theta) over a one-variable jet (theta slot).
using SphereFn = std::function<Jet3(const Jet3& theta)>;

struct SphereMargin {
    double margin = 0.0;
    double k_term = 0.0;         // int k[p] u
    double gradient_term = 0.0;  // (n-2)(alpha_FS^2 - alpha^2) int |grad p|^2 u
    double quartic_term = 0.0;   // delta int u |grad p|^4
    // Same with the d = 2 quartic coefficient (n-2)/(12(n-1)) that the
    // circle argument yields; equal to `margin` for d >= 3.
    double margin_supported = 0.0;
};

// p = log u on the unnormalized sphere measure.
SphereMargin sphere_inequality_margin(const SphereFn& u, const DerivedParams& dp, int count = 256);

// Radial density u(s) (against s^{n-1} ds) over a jet in the r slot.
using RadialJetFn = std::function<Jet3(const Jet3& s)>;

struct FluxIdentity {
    double lhs = 0.0;  // int u x.D(|F|^2) - 2 int u F.D(F.x)
    double rhs = 0.0;  // -2 alpha int u |F|^2
};

// F = D_alpha p with p = log u + s^2 / (2 alpha).
FluxIdentity flux_identity(const RadialJetFn& u, const DerivedParams& dp, const EvalSettings& settings = {});

}  // namespace wls

namespace wls {

// p = a r^2 + b r^3 + c exp(-e r^2) cos(k theta) + f r sin(theta) with
// coefficients drawn from the seed; used as a randomized test pressure.
PressureFn random_test_pressure(unsigned long long seed);

}  // namespace wls
