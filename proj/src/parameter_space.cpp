#include "wls/parameter_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wls/errors.hpp"

namespace wls {

std::string_view to_string(Region r) {
    switch (r) {
        case Region::Inadmissible: return "Inadmissible";
        case Region::Symmetry: return "Symmetry";
        case Region::SymmetryBreaking: return "SymmetryBreaking";
        case Region::FSBoundary: return "FSBoundary";
    }
    return "Unknown";
}

std::optional<double> beta_fs(int d, double gamma) {
    const double disc = (d - gamma) * (d - gamma) - 4.0 * (d - 1);
    if (disc < 0.0) return std::nullopt;
    return d - 2.0 - std::sqrt(disc);
}

DerivedParams derive(const ProblemParams& p) {
    const double denom = p.beta + 2.0 - p.gamma;
    if (denom == 0.0) throw DomainError("derive: beta + 2 - gamma = 0");
    DerivedParams dp;
    dp.d = p.d;
    dp.n = 2.0 * (p.d - p.gamma) / denom;
    dp.alpha = 1.0 + (p.beta - p.gamma) / 2.0;
    dp.nu = p.d - dp.n;
    // No upper limit on p when d - 2 - beta <= 0 (only possible for d <= 2).
    const double crit = p.d - 2.0 - p.beta;
    dp.p_star = crit > 0.0 ? (p.d - p.gamma) / crit : std::numeric_limits<double>::infinity();
    dp.alpha_fs = std::sqrt((p.d - 1.0) / (dp.n - 1.0));
    dp.beta_fs = beta_fs(p.d, p.gamma);
    return dp;
}

ProblemParams params_from_n_alpha(int d, double n, double alpha) {
    if (!(n > 0.0) || !(alpha > 0.0)) throw DomainError("params_from_n_alpha: need n > 0 and alpha > 0");
    ProblemParams p;
    p.d = d;
    p.gamma = d - n * alpha;
    p.beta = p.gamma + 2.0 * alpha - 2.0;
    return p;
}

DerivedParams derive_from_n_alpha(int d, double n, double alpha) {
    DerivedParams dp = derive(params_from_n_alpha(d, n, alpha));
    // Keep the requested values exactly rather than their round trip.
    dp.n = n;
    dp.alpha = alpha;
    dp.nu = d - n;
    dp.alpha_fs = std::sqrt((d - 1.0) / (n - 1.0));
    return dp;
}

bool admissible(const ProblemParams& p) {
    if (p.d < 1) return false;
    if (p.beta == 0.0 && p.gamma == 0.0) return false;
    return p.gamma - 2.0 < p.beta && p.beta < (p.d - 2.0) * p.gamma / p.d && p.gamma < p.d;
}

Region classify(const ProblemParams& p, double tol) {
    if (!admissible(p)) return Region::Inadmissible;
    if (p.d == 1) return Region::Symmetry;
    const auto bfs = beta_fs(p.d, p.gamma);
    if (!bfs) return Region::Symmetry;
    if (std::abs(p.beta - *bfs) <= tol * std::max(1.0, std::abs(*bfs))) return Region::FSBoundary;
    if (p.gamma < 0.0 && p.beta > *bfs) return Region::SymmetryBreaking;
    return Region::Symmetry;
}

}  // namespace wls
