#include "wls/constants.hpp"

#include <cmath>
#include <numbers>

#include "wls/errors.hpp"
#include "wls/special.hpp"

namespace wls {

using std::numbers::pi;

double log_sphere_volume(int d) {
    if (d < 1) throw DomainError("sphere_volume: d must be >= 1");
    return std::log(2.0) + 0.5 * d * std::log(pi) - log_gamma(0.5 * d);
}

double sphere_volume(int d) { return std::exp(log_sphere_volume(d)); }

ConstantsReport evaluate_constants(const DerivedParams& dp, int d) {
    const double n = dp.n;
    const double a = dp.alpha;
    if (!(n > 0.0)) throw DomainError("evaluate_constants: n must be positive");
    if (!(a > 0.0)) throw DomainError("evaluate_constants: alpha must be positive");
    ConstantsReport r;
    const double lg_d = log_gamma(0.5 * d);
    const double lg_n = log_gamma(0.5 * n);
    const double log_c2 = lg_d - 0.5 * n * std::log(2.0) - 0.5 * d * std::log(pi) - lg_n;
    r.c_nd = std::exp(0.5 * log_c2);
    r.c_star = 0.5 * n * std::log(2.0 / (n * std::numbers::e)) + lg_d - (n - 1.0) * std::log(a) -
               0.5 * d * std::log(pi) - lg_n;
    r.k_star = r.c_star - std::log(a);
    r.y_star = log_c2 - 0.5 * n;
    r.sigma_d = sphere_volume(d);
    return r;
}

double c_star_alternative(const DerivedParams& dp, int d) {
    const double n = dp.n;
    if (!(n > 0.0)) throw DomainError("c_star_alternative: n must be positive");
    return -(log_sphere_volume(d) - std::log(2.0) + (n - 1.0) * std::log(dp.alpha) +
             0.5 * n * std::log(0.5 * n * std::numbers::e) + log_gamma(0.5 * n));
}

double lambda1(int d, double n, double alpha) {
    // (a/2)(sqrt(A) - a n) rationalized: the numerator carries the exact sign.
    const double root = std::sqrt(4.0 * (d - 1) + alpha * alpha * (n - 2.0) * (n - 2.0));
    return 2.0 * alpha * ((d - 1.0) - alpha * alpha * (n - 1.0)) / (root + alpha * n);
}

double delta_coefficient(int d, double n) {
    if (d < 2) throw DomainError("delta_coefficient: d must be >= 2");
    if (d == 2) return 1.0 / 12.0;
    const double e = n - d;
    const double dp1 = d + 1.0;
    return e * (4.0 * dp1 * (d - 2.0) + (4.0 * d - 5.0) * e) / (4.0 * (n - 1.0) * (n - 2.0) * dp1 * dp1);
}

HyperSchedule hyper_schedule(double n, double c, double q, double r) {
    if (!(r > q)) throw DomainError("hyper_schedule: need r > q");
    if (!(q > 1.0)) throw DomainError("hyper_schedule: need q > 1");
    if (!(n > 0.0)) throw DomainError("hyper_schedule: n must be positive");
    HyperSchedule h;
    h.sigma = (2.0 / n) * std::exp(1.0 - 2.0 * c / n);
    h.t_star = std::log((r - 1.0) / (q - 1.0)) / (4.0 * h.sigma);
    h.h_const = std::pow(h.t_star, 0.5 * n * (r - q) / (q * r));
    return h;
}

}  // namespace wls
