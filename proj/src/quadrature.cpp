#include "wls/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "wls/constants.hpp"
#include "wls/errors.hpp"
#include "wls/special.hpp"

namespace wls {

GaussRule golub_welsch(std::span<const double> diag, std::span<const double> offdiag_sq, double mu0) {
    const auto m = static_cast<Eigen::Index>(diag.size());
    Eigen::VectorXd a(m), b(std::max<Eigen::Index>(m - 1, 0));
    for (Eigen::Index i = 0; i < m; ++i) a[i] = diag[i];
    for (Eigen::Index i = 0; i + 1 < m; ++i) b[i] = std::sqrt(offdiag_sq[i]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(a, b, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw ConvergenceError("golub_welsch: eigen-solve failed");
    GaussRule r;
    r.nodes.resize(m);
    r.weights.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        r.nodes[i] = es.eigenvalues()[i];
        const double v = es.eigenvectors()(0, i);
        r.weights[i] = mu0 * v * v;
    }
    return r;
}

GaussRule gauss_legendre(int m) {
    std::vector<double> a(m, 0.0), b(std::max(m - 1, 0));
    for (int k = 1; k < m; ++k) b[k - 1] = k * k / (4.0 * k * k - 1.0);
    return golub_welsch(a, b, 2.0);
}

GaussRule gauss_jacobi_unit(int m, double bb) {
    // Jacobi weight (1+x)^b on [-1,1], then x -> (1+x)/2.
    std::vector<double> diag(m), off(std::max(m - 1, 0));
    for (int k = 0; k < m; ++k) {
        const double s = 2.0 * k + bb;
        diag[k] = (k == 0) ? bb / (bb + 2.0) : bb * bb / (s * (s + 2.0));
    }
    for (int k = 1; k < m; ++k) {
        const double s = 2.0 * k + bb;
        off[k - 1] = 4.0 * k * k * (k + bb) * (k + bb) / (s * s * (s + 1.0) * (s - 1.0));
    }
    const double mu0 = std::pow(2.0, bb + 1.0) / (bb + 1.0);
    GaussRule r = golub_welsch(diag, off, mu0);
    const double wscale = std::pow(2.0, -(bb + 1.0));
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        r.nodes[i] = 0.5 * (1.0 + r.nodes[i]);
        r.weights[i] *= wscale;
    }
    return r;
}

double default_s_max(double n) { return std::sqrt(2.0 * (n + 80.0 * std::log(10.0))); }

namespace {

double gaussian_moment(double n) { return std::exp((0.5 * n - 1.0) * std::log(2.0) + log_gamma(0.5 * n)); }

// Generalized Gauss-Laguerre in t = s^2/2 with exponent a = n/2 - 1.
RadialRule gauss_transformed(double n, int count, bool gaussian, double scale) {
    const double a = 0.5 * n - 1.0;
    std::vector<double> diag(count), off(count - 1);
    for (int k = 0; k < count; ++k) diag[k] = 2.0 * k + a + 1.0;
    for (int k = 1; k < count; ++k) off[k - 1] = k * (k + a);
    const GaussRule gw = golub_welsch(diag, off, 1.0);

    // Weights from Christoffel sums of the orthonormal recurrence, in log
    // space; the eigenvector route loses relative accuracy in the tail.
    const double log_mu0 = log_gamma(a + 1.0);
    RadialRule rule;
    rule.exponent = n - 1.0;
    rule.kind = RadialKind::gauss_transformed;
    rule.gaussian = gaussian;
    rule.scale = scale;
    const double log_jac = (0.5 * n - 1.0) * std::log(2.0) + n * std::log(scale);
    for (int i = 0; i < count; ++i) {
        // Newton polish on the monic recurrence: eigenvalues carry an
        // absolute error of eps times the largest node, too much near 0.
        double t = gw.nodes[i];
        for (int it = 0; it < 3; ++it) {
            double p0 = 0.0, p1 = 1.0, d0 = 0.0, d1 = 0.0;
            for (int k = 0; k < count; ++k) {
                const double bk = (k == 0) ? 0.0 : off[k - 1];
                const double p2 = (t - diag[k]) * p1 - bk * p0;
                const double d2 = p1 + (t - diag[k]) * d1 - bk * d0;
                p0 = p1, p1 = p2, d0 = d1, d1 = d2;
                const double m = std::max(std::abs(p1), std::abs(d1));
                if (m > 1e150) p0 *= 1e-150, p1 *= 1e-150, d0 *= 1e-150, d1 *= 1e-150;
            }
            if (d1 == 0.0) break;
            const double step = p1 / d1;
            if (!std::isfinite(step) || std::abs(step) > 1e-6 * (1.0 + t)) break;
            t -= step;
        }
        double q_prev = 0.0, q = 1.0, sum = 1.0, log_scale = 0.0;
        for (int k = 0; k + 1 < count; ++k) {
            const double bk = (k == 0) ? 0.0 : std::sqrt(off[k - 1]);
            const double q_next = ((t - diag[k]) * q - bk * q_prev) / std::sqrt(off[k]);
            q_prev = q;
            q = q_next;
            sum += q * q;
            if (std::abs(q) > 1e150) {
                q *= 1e-150;
                q_prev *= 1e-150;
                sum *= 1e-300;
                log_scale += 300.0 * std::log(10.0);
            }
        }
        double log_w = log_mu0 - std::log(sum) - log_scale + log_jac;
        if (!gaussian) log_w += t;
        const double w = std::exp(log_w);
        if (!std::isfinite(w) || w == 0.0) continue;
        rule.nodes.push_back(scale * std::sqrt(2.0 * t));
        rule.weights.push_back(w);
    }
    return rule;
}

RadialRule adaptive_panel(double n, int count, bool gaussian, double scale) {
    const int panels = count / 8;
    const int geometric = (panels + 3) / 4;
    const int uniform = panels - 1 - geometric;
    const double s_c = scale;
    const double s_max = scale * default_s_max(n);
    const GaussRule gl = gauss_legendre(8);

    RadialRule rule;
    rule.exponent = n - 1.0;
    rule.kind = RadialKind::adaptive_panel;
    rule.gaussian = gaussian;
    rule.scale = scale;
    auto push = [&](double s, double w) {
        if (gaussian) w *= std::exp(-0.5 * (s / scale) * (s / scale));
        rule.nodes.push_back(s);
        rule.weights.push_back(w);
    };

    // Innermost panel absorbs s^{n-1} exactly.
    const double s0 = s_c * std::ldexp(1.0, -geometric);
    const GaussRule gj = gauss_jacobi_unit(8, n - 1.0);
    const double jac0 = std::pow(s0, n);
    for (int i = 0; i < 8; ++i) push(s0 * gj.nodes[i], jac0 * gj.weights[i]);

    auto panel = [&](double lo, double hi) {
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        for (int i = 0; i < 8; ++i) {
            const double s = mid + half * gl.nodes[i];
            push(s, half * gl.weights[i] * std::pow(s, n - 1.0));
        }
    };
    for (int g = geometric; g >= 1; --g) panel(s_c * std::ldexp(1.0, -g), s_c * std::ldexp(1.0, -g + 1));
    const double h = (s_max - s_c) / uniform;
    for (int u = 0; u < uniform; ++u) panel(s_c + u * h, s_c + (u + 1) * h);
    return rule;
}

}  // namespace

RadialRule radial_rule(double n, int count, RadialKind kind, bool gaussian, double scale) {
    if (!(n > 0.0)) throw DomainError("radial_rule: n must be positive");
    if (!(scale > 0.0)) throw DomainError("radial_rule: scale must be positive");
    if (count < 1) throw DomainError("radial_rule: count must be positive");
    const int min_count = (kind == RadialKind::gauss_transformed) ? 8 : 64;
    if (count < min_count) throw AccuracyError("radial_rule: count too small to certify accuracy");

    RadialRule rule = (kind == RadialKind::gauss_transformed) ? gauss_transformed(n, count, gaussian, scale)
                                                              : adaptive_panel(n, count, gaussian, scale);

    // Certify on the Gaussian zeroth moment.
    CompensatedSum s;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = rule.nodes[i] / scale;
        s.add(gaussian ? rule.weights[i] : rule.weights[i] * std::exp(-0.5 * x * x));
    }
    const double exact = gaussian_moment(n) * std::pow(scale, n);
    if (std::abs(s.value() - exact) > 1e-12 * exact)
        throw AccuracyError("radial_rule: zeroth moment check failed");
    return rule;
}

SphereRule sphere_rule(int d, int count, bool normalized) {
    if (d < 2) throw DomainError("sphere_rule: d must be >= 2");
    if (count < 1) throw DomainError("sphere_rule: count must be positive");
    SphereRule r;
    r.d = d;
    r.normalized = normalized;
    const double total = normalized ? 1.0 : sphere_volume(d);
    if (d == 2) {
        for (int k = 0; k < count; ++k) {
            r.theta.push_back(2.0 * std::numbers::pi * (k + 0.5) / count);
            r.weights.push_back(total / count);
        }
        return r;
    }
    // Gauss-Gegenbauer in x = cos(theta), weight (1-x^2)^{(d-3)/2}.
    const double a = 0.5 * (d - 3);
    std::vector<double> diag(count, 0.0), off(count - 1);
    for (int k = 1; k < count; ++k) off[k - 1] = k * (k + 2.0 * a) / (4.0 * (k + a + 0.5) * (k + a - 0.5));
    const GaussRule g = golub_welsch(diag, off, 1.0);
    for (int k = count - 1; k >= 0; --k) {
        r.theta.push_back(std::acos(std::clamp(g.nodes[k], -1.0, 1.0)));
        r.weights.push_back(total * g.weights[k]);
    }
    return r;
}

double integrate(std::span<const double> values, const RadialRule& rule) {
    if (values.size() != rule.weights.size()) throw DomainError("integrate: length mismatch");
    return compensated_dot(values, rule.weights);
}

double integrate(const RadialField& field) {
    if (!field.rule) throw DomainError("integrate: field has no rule");
    return integrate(field.values, *field.rule);
}

double integrate(std::span<const double> values, const SphereRule& rule) {
    if (values.size() != rule.weights.size()) throw DomainError("integrate: length mismatch");
    return compensated_dot(values, rule.weights);
}

}  // namespace wls
