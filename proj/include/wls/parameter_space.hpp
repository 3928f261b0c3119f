#pragma once

#include <optional>
#include <string_view>

namespace wls {

struct ProblemParams {
    int d = 3;
    double beta = 0.0;
    double gamma = 0.0;
};

struct DerivedParams {
    int d = 3;
    double n = 0.0;
    double alpha = 0.0;
    double nu = 0.0;
    double p_star = 0.0;
    double alpha_fs = 0.0;
    std::optional<double> beta_fs;  // empty when (d-gamma)^2 < 4(d-1)
};

enum class Region { Inadmissible, Symmetry, SymmetryBreaking, FSBoundary };

std::string_view to_string(Region r);

// Throws DomainError when beta + 2 - gamma == 0.
DerivedParams derive(const ProblemParams& p);

// Builds a DerivedParams directly from (d, n, alpha).
DerivedParams derive_from_n_alpha(int d, double n, double alpha);

// Inverse of (beta, gamma) -> (n, alpha) at fixed d.
ProblemParams params_from_n_alpha(int d, double n, double alpha);

std::optional<double> beta_fs(int d, double gamma);

// gamma - 2 < beta < (d-2) gamma / d, gamma < d, and (beta, gamma) != (0, 0).
bool admissible(const ProblemParams& p);

Region classify(const ProblemParams& p, double tol = 1e-12);

}  // namespace wls
