#pragma once

#include <vector>

#include "wls/functionals.hpp"
#include "wls/parameter_space.hpp"

namespace wls {

// H = -alpha^2 (d_ss + (n-1)/s d_s) + (d-1)/s^2 + (alpha^2/4) s^2 on
// L^2(s^{n-1} ds); lambda = Lambda - alpha^2 (1 + n/2).
struct EigenResult {
    double lambda_numeric = 0.0;
    double lambda_formula = 0.0;
    double shift = 0.0;        // alpha^2 (1 + n/2)
    double big_lambda = 0.0;   // extrapolated bottom of H
    double error_estimate = 0.0;
    std::vector<double> levels;  // raw bottom of H on J, 2J, 4J cells
    std::vector<double> nodes;   // cell centres of the finest grid
    std::vector<double> mode;    // ground state at the nodes, max-normalized
    int sign_changes = 0;
};

// <(H - shift) phi, phi> for a pure l = 1 candidate.
double hessian_form(const Candidate& phi, const DerivedParams& dp, const EvalSettings& settings = {});

// Throws ConvergenceError when the Richardson estimates at (J, 2J) and
// (2J, 4J) disagree by more than tol.
EigenResult radial_eigensolve(int d, const DerivedParams& dp, int grid_size = 4096, double tol = 1e-6);

// (H_h phi - Lambda phi)_j / max |Lambda phi| for the closed-form mode on a
// J-cell grid, Richardson-combined with the 2J grid the solver also uses;
// also returns the cell centres.
struct ModeResidual {
    std::vector<double> nodes;
    std::vector<double> residual;
};
ModeResidual eigenmode_residual(int d, const DerivedParams& dp, int grid_size = 4096);

enum class Stability { stable, unstable, marginal };
const char* to_string(Stability s);

struct StabilityCertificate {
    Stability verdict = Stability::marginal;
    double lambda_formula = 0.0;
    double hessian_per_norm = 0.0;  // F[phi] / |phi|^2 on the explicit mode
};

// Throws ConsistencyError when the closed form and the quadratic form
// disagree in sign beyond tol.
StabilityCertificate instability_certificate(const ProblemParams& params, double tol = 1e-8);

}  // namespace wls
