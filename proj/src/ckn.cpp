#include "wls/ckn.hpp"

#include <cmath>

#include "wls/constants.hpp"
#include "wls/errors.hpp"
#include "wls/special.hpp"

namespace wls {

double ckn_b(double n, double p) { return n + 2.0 - p * (n - 2.0); }

double ckn_theta(const ProblemParams& q, double p) {
    const double d = q.d;
    return (d - q.gamma) * (p - 1.0) / (p * ((d + 2.0 + q.beta - 2.0 * q.gamma) - p * (d - 2.0 - q.beta)));
}

double zeta_from_theta(double theta, double p) { return theta / 2.0 + (1.0 - theta) / (p + 1.0) - 1.0 / (2.0 * p); }

double ckn_zeta(double n, double p) { return (p - 1.0) / (p * ckn_b(n, p)); }

namespace {

// log C_p for the Aubin-Talenti profile. The dimension-n part is the optimal
// Gagliardo-Nirenberg constant with y = (p+1)/(p-1):
//   1/K = alpha^{n zeta} (sigma_d Gamma(n/2)/2)^zeta (2n/((p+1)(p-1)))^{n zeta/2}
//         (2(p+1)/b)^{1/(2p)} (Gamma(y - n/2)/Gamma(y))^zeta
double log_k_star(const DerivedParams& dp, double p) {
    const double n = dp.n, a = dp.alpha;
    const double b = ckn_b(n, p), z = ckn_zeta(n, p);
    const double y = (p + 1.0) / (p - 1.0);
    const double log_sphere_gamma = log_sphere_volume(dp.d) + log_gamma(0.5 * n) - std::log(2.0);
    const double inner = n * std::log(a) + log_sphere_gamma +
                         0.5 * n * (std::log(2.0 * n) - std::log(p + 1.0) - std::log(p - 1.0)) +
                         log_gamma_ratio(y, 0.5 * n);
    return -(z * inner + std::log(2.0 * (p + 1.0) / b) / (2.0 * p));
}

}  // namespace

CknPoint ckn_constants(const ProblemParams& params, double p) {
    if (!admissible(params)) throw DomainError("ckn_constants: inadmissible parameters");
    const DerivedParams dp = derive(params);
    if (!(p > 1.0) || p > dp.p_star * (1.0 + 1e-14))
        throw DomainError("ckn_constants: p must lie in (1, p_star]");
    CknPoint pt;
    pt.p = p;
    pt.b = ckn_b(dp.n, p);
    pt.theta = ckn_theta(params, p);
    pt.zeta = ckn_zeta(dp.n, p);
    const double lk = log_k_star(dp, p);
    pt.log_c_star_p = pt.zeta * std::log(dp.alpha) + lk;
    pt.k_star_p = std::exp(lk);
    pt.c_star_p = std::exp(pt.log_c_star_p);
    pt.region = classify(params);
    return pt;
}

std::vector<double> dyadic_sequence(int k_min, int k_max) {
    std::vector<double> seq;
    for (int k = k_min; k <= k_max; ++k) seq.push_back(1.0 + std::ldexp(1.0, -k));
    return seq;
}

namespace {

// Richardson table for F(h) = L + a1 h + a2 h^2 + ..., h halving.
std::vector<double> richardson_diagonal(const std::vector<double>& f) {
    std::vector<double> row = f, diag{f.front()};
    for (std::size_t m = 1; m < f.size(); ++m) {
        const double factor = std::ldexp(1.0, static_cast<int>(m));
        std::vector<double> next(row.size() - 1);
        for (std::size_t i = 0; i + 1 < row.size(); ++i) next[i] = row[i + 1] + (row[i + 1] - row[i]) / (factor - 1.0);
        row = std::move(next);
        diag.push_back(row.front());
    }
    return diag;
}

}  // namespace

LimitProbe limit_probe(const ProblemParams& params, const std::vector<double>& p_seq) {
    if (p_seq.size() < 3) throw DomainError("limit_probe: need at least 3 points");
    for (std::size_t i = 1; i < p_seq.size(); ++i) {
        const double ratio = (p_seq[i - 1] - 1.0) / (p_seq[i] - 1.0);
        if (!(p_seq[i] > 1.0) || std::abs(ratio - 2.0) > 1e-9)
            throw DomainError("limit_probe: p_seq must approach 1 with ratio 2");
    }
    LimitProbe lp;
    std::vector<double> logs;
    for (double p : p_seq) {
        const double lc = ckn_constants(params, p).log_c_star_p;
        lp.raw.push_back(4.0 * std::expm1(lc) / (p - 1.0));
        logs.push_back(4.0 * lc / (p - 1.0));
    }
    lp.diagonal = richardson_diagonal(lp.raw);
    lp.limit = lp.diagonal.back();
    lp.log_limit = richardson_diagonal(logs).back();
    const std::size_t m = lp.diagonal.size();
    const double last = std::abs(lp.diagonal[m - 1] - lp.diagonal[m - 2]);
    const double first = std::abs(lp.diagonal[1] - lp.diagonal[0]);
    const double scale = std::max(1.0, std::abs(lp.limit));
    if (!std::isfinite(lp.limit) || last > first || last > 1e-4 * scale)
        throw ConvergenceError("limit_probe: extrapolated estimates do not settle");
    if (std::abs(lp.limit - lp.log_limit) > 1e-6 * scale)
        throw ConsistencyError("limit_probe: linear and logarithmic limits disagree");
    return lp;
}

double aubin_talenti_eval(const ProblemParams& params, double p, double x_abs) {
    const double m = 2.0 + params.beta - params.gamma;
    return std::exp(-std::log1p(std::pow(x_abs, m)) / (p - 1.0));
}

double aubin_talenti_alpha_profile(double p, double s) {
    return std::exp(-std::log1p(0.5 * (p - 1.0) * s * s) / (p - 1.0));
}

}  // namespace wls
