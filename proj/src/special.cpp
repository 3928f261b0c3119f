#include "wls/special.hpp"

#include <cmath>
#include <stdexcept>

#include "wls/errors.hpp"

namespace wls {

double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
    int sign = 1;
    return ::lgamma_r(x, &sign);
}

namespace {

// Stirling tail sum_{k} B_{2k} / (2k (2k-1) z^{2k-1}).
double stirling_tail(double z) {
    const double z2 = 1.0 / (z * z);
    return (1.0 / 12.0 + z2 * (-1.0 / 360.0 + z2 * (1.0 / 1260.0 + z2 * (-1.0 / 1680.0)))) / z;
}

}  // namespace

double log_gamma_ratio(double x, double a) {
    if (!(x - a > 0.0)) throw DomainError("log_gamma_ratio: x - a must be positive");
    if (x <= 1e6) return log_gamma(x - a) - log_gamma(x);
    const double lead = -a * std::log(x) + (x - a - 0.5) * std::log1p(-a / x) + a;
    return lead + stirling_tail(x - a) - stirling_tail(x);
}

double compensated_dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DomainError("compensated_dot: length mismatch");
    CompensatedSum s;
    for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
    return s.value();
}

}  // namespace wls
