#include "wls/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "wls/constants.hpp"
#include "wls/errors.hpp"

namespace wls {

const char* to_string(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        case Stability::marginal: return "marginal";
    }
    return "unknown";
}

double hessian_form(const Candidate& phi, const DerivedParams& dp, const EvalSettings& settings) {
    if (!phi.mode || phi.mode->ell != 1) throw DomainError("hessian_form: candidate needs an l = 1 mode");
    const RadialRule probe = radial_rule(dp.n, settings.radial_count, settings.kind, false, settings.scale);
    double radial = 0.0, amp = 0.0;
    for (double s : probe.nodes) {
        radial = std::max(radial, std::abs(phi.radial.value(s)));
        amp = std::max(amp, std::abs(phi.mode->amplitude.value(s)));
    }
    if (radial > 1e-12 * std::max(amp, 1e-300) && radial > 0.0)
        throw DomainError("hessian_form: candidate has a radial component");
    Candidate pure{zero_profile(), phi.mode};
    const NormsEntropy ne = norms_and_entropy(pure, dp, settings);
    const double a2 = dp.alpha * dp.alpha;
    return ne.grad_sq - a2 * (1.0 + 0.5 * dp.n) * ne.norm_sq + 0.25 * a2 * ne.second_moment;
}

namespace {

// Cell-centred finite volumes on a softplus-graded grid: geometric cells
// from s ~ 1e-13 up to s ~ 1, uniform beyond. All cell moments are formed
// as ratios so that s^n never underflows.
struct FvOperator {
    std::vector<double> s;      // cell centres
    std::vector<double> diag;   // H_jj
    std::vector<double> up;     // -H_{j,j+1}
    std::vector<double> down;   // -H_{j,j-1}
    std::vector<double> off;    // symmetric off-diagonal, entry (j-1, j) at j-1
    std::vector<double> log_w;  // log cell volume
};

constexpr double kSoftplusKnee = 0.3;
constexpr double kInnerDecades = 13.0;

double softplus(double z) { return z > 30.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

FvOperator build_operator(int d, const DerivedParams& dp, int J) {
    const double n = dp.n, a2 = dp.alpha * dp.alpha;
    const double S = default_s_max(n);
    const double L = kInnerDecades * std::log(10.0) / kSoftplusKnee;
    const double norm = softplus(L * (1.0 - kSoftplusKnee));
    std::vector<double> xi(J + 1);
    for (int j = 0; j <= J; ++j) xi[j] = S * softplus(L * (static_cast<double>(j) / J - kSoftplusKnee)) / norm;
    xi[J] = S;

    FvOperator op;
    op.s.resize(J);
    op.diag.assign(J, 0.0);
    op.up.assign(J, 0.0);
    op.down.assign(J, 0.0);
    op.off.assign(J > 0 ? J - 1 : 0, 0.0);
    op.log_w.resize(J);
    std::vector<double> omega(J), ratio(J);
    for (int j = 0; j < J; ++j) {
        op.s[j] = 0.5 * (xi[j] + xi[j + 1]);
        ratio[j] = xi[j] / xi[j + 1];
        const double lr = std::log(ratio[j]);
        omega[j] = -std::expm1(n * lr) / n;
        op.log_w[j] = n * std::log(xi[j + 1]) + std::log(omega[j]);
        const double b = xi[j + 1];
        const double pot = (d - 1.0) * (-std::expm1((n - 2.0) * lr)) / ((n - 2.0) * b * b * omega[j]) +
                           0.25 * a2 * b * b * (-std::expm1((n + 2.0) * lr)) / ((n + 2.0) * omega[j]);
        op.diag[j] = pot;
    }
    for (int j = 0; j + 1 < J; ++j) {
        // Interface xi_{j+1} between cells j and j+1.
        const double ds = op.s[j + 1] - op.s[j];
        const double b = xi[j + 1];
        op.up[j] = a2 / (ds * b * omega[j]);
        const double r = ratio[j + 1];
        op.down[j + 1] = a2 * std::pow(r, n - 1.0) / (ds * xi[j + 2] * omega[j + 1]);
        op.off[j] = -a2 * std::pow(r, 0.5 * n) / (b * ds * std::sqrt(omega[j] * omega[j + 1]));
        op.diag[j] += op.up[j];
        op.diag[j + 1] += op.down[j + 1];
    }
    // Dirichlet through a ghost value at S.
    op.diag[J - 1] += a2 / ((S - op.s[J - 1]) * S * omega[J - 1]);
    return op;
}

int sturm_count(const FvOperator& op, double x) {
    int count = 0;
    double q = op.diag[0] - x;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < op.diag.size(); ++i) {
        if (q == 0.0) q = 1e-300;
        q = op.diag[i] - x - op.off[i - 1] * op.off[i - 1] / q;
        if (q < 0.0) ++count;
    }
    return count;
}

double lowest_eigenvalue(const FvOperator& op) {
    double lo = 0.0, hi = 1.0;
    while (sturm_count(op, lo) > 0) lo = lo * 2.0 - 1.0;
    while (sturm_count(op, hi) < 1) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(op, mid) >= 1)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Inverse iteration with a shift just below the eigenvalue, where the
// shifted matrix is positive definite and LDL^T needs no pivoting.
std::vector<double> ground_state(const FvOperator& op, double lambda) {
    const std::size_t J = op.diag.size();
    const double mu = lambda - 1e-9 * std::max(1.0, std::abs(lambda));
    std::vector<double> dd(J), x(J, 1.0);
    dd[0] = op.diag[0] - mu;
    for (std::size_t i = 1; i < J; ++i) dd[i] = op.diag[i] - mu - op.off[i - 1] * op.off[i - 1] / dd[i - 1];
    for (int it = 0; it < 4; ++it) {
        for (std::size_t i = 1; i < J; ++i) x[i] -= op.off[i - 1] / dd[i - 1] * x[i - 1];
        x[J - 1] /= dd[J - 1];
        for (std::size_t i = J - 1; i-- > 0;) x[i] = (x[i] - op.off[i] * x[i + 1]) / dd[i];
        double m = 0.0;
        for (double v : x) m = std::max(m, std::abs(v));
        for (double& v : x) v /= m;
    }
    return x;
}

}  // namespace

EigenResult radial_eigensolve(int d, const DerivedParams& dp, int grid_size, double tol) {
    if (d < 2) throw DomainError("radial_eigensolve: d must be >= 2");
    if (!(dp.n > 2.0) || !(dp.alpha > 0.0)) throw DomainError("radial_eigensolve: need n > 2 and alpha > 0");
    if (grid_size < 64) throw DomainError("radial_eigensolve: grid_size must be >= 64");
    EigenResult r;
    r.shift = dp.alpha * dp.alpha * (1.0 + 0.5 * dp.n);
    r.lambda_formula = lambda1(d, dp.n, dp.alpha);
    FvOperator finest;
    for (int level = 0; level < 3; ++level) {
        FvOperator op = build_operator(d, dp, grid_size << level);
        r.levels.push_back(lowest_eigenvalue(op));
        if (level == 2) finest = std::move(op);
    }
    const double r1 = r.levels[1] + (r.levels[1] - r.levels[0]) / 3.0;
    const double r2 = r.levels[2] + (r.levels[2] - r.levels[1]) / 3.0;
    r.big_lambda = r2 + (r2 - r1) / 15.0;
    r.error_estimate = std::abs(r2 - r1);
    if (!(r.error_estimate <= tol))
        throw ConvergenceError("radial_eigensolve: Richardson estimates disagree; refine the grid");
    r.lambda_numeric = r.big_lambda - r.shift;

    const std::vector<double> x = ground_state(finest, r.levels[2]);
    r.nodes = finest.s;
    r.mode.resize(x.size());
    double peak = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        r.mode[j] = x[j] == 0.0 ? 0.0 : std::copysign(std::exp(std::log(std::abs(x[j])) - 0.5 * finest.log_w[j]), x[j]);
        if (std::abs(r.mode[j]) > std::abs(peak)) peak = r.mode[j];
    }
    int prev = 0;
    for (double& v : r.mode) {
        v /= peak;
        const int sg = v > 1e-12 ? 1 : (v < -1e-12 ? -1 : 0);
        if (sg != 0 && prev != 0 && sg != prev) ++r.sign_changes;
        if (sg != 0) prev = sg;
    }
    return r;
}

namespace {

std::vector<double> signed_residual(const FvOperator& op, const Profile& phi, double lam) {
    const std::size_t J = op.s.size();
    std::vector<double> v(J), out(J);
    for (std::size_t j = 0; j < J; ++j) v[j] = phi.value(op.s[j]);
    for (std::size_t j = 0; j < J; ++j) {
        double hv = op.diag[j] * v[j];
        if (j > 0) hv -= op.down[j] * v[j - 1];
        if (j + 1 < J) hv -= op.up[j] * v[j + 1];
        out[j] = hv - lam * v[j];
    }
    return out;
}

}  // namespace

ModeResidual eigenmode_residual(int d, const DerivedParams& dp, int grid_size) {
    if (grid_size < 64) throw DomainError("eigenmode_residual: grid_size must be >= 64");
    const FvOperator op = build_operator(d, dp, grid_size);
    const FvOperator fine = build_operator(d, dp, 2 * grid_size);
    const Profile phi = instability_mode_profile(dp);
    const double lam = lambda1(d, dp.n, dp.alpha) + dp.alpha * dp.alpha * (1.0 + 0.5 * dp.n);
    const std::vector<double> rc = signed_residual(op, phi, lam), rf = signed_residual(fine, phi, lam);
    const std::size_t J = op.s.size();
    double scale = 0.0;
    for (std::size_t j = 0; j < J; ++j) scale = std::max(scale, std::abs(lam * phi.value(op.s[j])));
    ModeResidual out;
    out.nodes = op.s;
    out.residual.resize(J);
    for (std::size_t j = 0; j < J; ++j) {
        // second-order error removed with the two children of cell j
        const double s0 = fine.s[2 * j], s1 = fine.s[2 * j + 1];
        const double t = (op.s[j] - s0) / (s1 - s0);
        const double r2 = (1.0 - t) * rf[2 * j] + t * rf[2 * j + 1];
        out.residual[j] = std::abs((4.0 * r2 - rc[j]) / 3.0) / scale;
    }
    return out;
}

StabilityCertificate instability_certificate(const ProblemParams& params, double tol) {
    if (params.d < 2) throw DomainError("instability_certificate: d must be >= 2");
    if (!admissible(params)) throw DomainError("instability_certificate: parameters not admissible");
    const DerivedParams dp = derive(params);
    StabilityCertificate c;
    c.lambda_formula = lambda1(params.d, dp.n, dp.alpha);
    Candidate phi{zero_profile(), AngularMode{1, instability_mode_profile(dp)}};
    const double form = hessian_form(phi, dp);
    const double norm = norms_and_entropy(phi, dp).norm_sq;
    c.hessian_per_norm = form / norm;
    if (std::abs(c.lambda_formula) <= tol) {
        c.verdict = Stability::marginal;
        return c;
    }
    if ((c.lambda_formula < 0.0) != (c.hessian_per_norm < 0.0) && std::abs(c.hessian_per_norm) > tol)
        throw ConsistencyError("instability_certificate: closed form and quadratic form disagree in sign");
    c.verdict = c.lambda_formula < 0.0 ? Stability::unstable : Stability::stable;
    return c;
}

}  // namespace wls
