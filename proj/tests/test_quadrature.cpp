#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "wls/constants.hpp"
#include "wls/errors.hpp"
#include "wls/quadrature.hpp"

using namespace wls;

namespace {

// int_0^inf s^{n-1+k} e^{-s^2/(2 c^2)} ds
double gaussian_moment(double n, double k, double c = 1.0) {
    const double a = 0.5 * (n + k);
    return std::exp((a - 1.0) * std::log(2.0) + std::lgamma(a) + 2.0 * a * std::log(c));
}

double apply(const RadialRule& rule, auto f) {
    std::vector<double> v(rule.nodes.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(rule.nodes[i]);
    return integrate(v, rule);
}

}  // namespace

TEST_CASE("radial moments against the Gamma oracle") {
    for (RadialKind kind : {RadialKind::adaptive_panel, RadialKind::gauss_transformed}) {
        for (double n : {1.0, 2.5, 4.0, 7.3, 16.0, 40.0}) {
            const int count = n > 20.0 ? 512 : 256;
            const RadialRule g = radial_rule(n, count, kind, true);
            const RadialRule plain = radial_rule(n, count, kind, false);
            for (int k : {0, 2, 4, 6}) {
                const double exact = gaussian_moment(n, k);
                CHECK(apply(g, [k](double s) { return std::pow(s, k); }) == doctest::Approx(exact).epsilon(1e-11));
                CHECK(apply(plain, [k](double s) { return std::pow(s, k) * std::exp(-0.5 * s * s); }) ==
                      doctest::Approx(exact).epsilon(1e-11));
            }
        }
    }
}

TEST_CASE("scaled Gaussian weight") {
    for (double c : {0.3, 1.0, 2.5}) {
        const RadialRule g = radial_rule(5.0, 256, RadialKind::adaptive_panel, true, c);
        CHECK(apply(g, [](double) { return 1.0; }) == doctest::Approx(gaussian_moment(5.0, 0.0, c)).epsilon(1e-11));
        CHECK(apply(g, [](double s) { return s * s; }) == doctest::Approx(gaussian_moment(5.0, 2.0, c)).epsilon(1e-11));
    }
}

TEST_CASE("property: random n and odd moments") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 40; ++t) {
        const double n = 1.0 + 30.0 * u(rng);
        const RadialRule g = radial_rule(n, 384, RadialKind::adaptive_panel, true);
        for (int k : {1, 3, 5}) {
            CHECK(apply(g, [k](double s) { return std::pow(s, k); }) ==
                  doctest::Approx(gaussian_moment(n, k)).epsilon(1e-10));
        }
    }
}

TEST_CASE("rule shape") {
    const RadialRule g = radial_rule(4.0, 256, RadialKind::adaptive_panel, true);
    CHECK(g.nodes.size() == g.weights.size());
    CHECK(g.exponent == 3.0);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        CHECK(g.nodes[i] > 0.0);
        CHECK(g.weights[i] >= 0.0);
    }
    CHECK(default_s_max(4.0) > 8.0);
    CHECK(default_s_max(40.0) > default_s_max(4.0));
}

TEST_CASE("bad arguments") {
    CHECK_THROWS_AS(radial_rule(0.0, 256, RadialKind::adaptive_panel), DomainError);
    CHECK_THROWS_AS(radial_rule(4.0, 0, RadialKind::adaptive_panel), DomainError);
    CHECK_THROWS_AS(sphere_rule(1, 16), DomainError);
}

TEST_CASE("sphere rules") {
    for (int d : {2, 3, 4, 5}) {
        const SphereRule s = sphere_rule(d, 24);
        std::vector<double> one(s.theta.size(), 1.0), c2(s.theta.size()), c4(s.theta.size());
        for (std::size_t i = 0; i < s.theta.size(); ++i) {
            c2[i] = std::pow(std::cos(s.theta[i]), 2);
            c4[i] = std::pow(std::cos(s.theta[i]), 4);
        }
        const double sd = sphere_volume(d);
        CHECK(integrate(one, s) == doctest::Approx(sd).epsilon(1e-13));
        CHECK(integrate(c2, s) == doctest::Approx(sd / d).epsilon(1e-13));
        CHECK(integrate(c4, s) == doctest::Approx(3.0 * sd / (d * (d + 2.0))).epsilon(1e-13));
        const SphereRule sn = sphere_rule(d, 24, true);
        CHECK(integrate(one, sn) == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("Gauss-Legendre and Gauss-Jacobi") {
    const GaussRule gl = gauss_legendre(10);
    for (int k = 0; k < 20; ++k) {
        double sum = 0.0;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) sum += gl.weights[i] * std::pow(gl.nodes[i], k);
        CHECK(sum == doctest::Approx(k % 2 ? 0.0 : 2.0 / (k + 1.0)).epsilon(1e-13).scale(1.0));
    }
    for (double b : {0.0, 0.5, 3.7, 15.0}) {
        const GaussRule gj = gauss_jacobi_unit(8, b);
        for (int k = 0; k < 16; ++k) {
            double sum = 0.0;
            for (std::size_t i = 0; i < gj.nodes.size(); ++i) sum += gj.weights[i] * std::pow(gj.nodes[i], k);
            CHECK(sum == doctest::Approx(1.0 / (b + k + 1.0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("Golub-Welsch with the Hermite recurrence") {
    // probabilists' Hermite: a_k = 0, b_k = k, mu0 = sqrt(2 pi)
    const int m = 12;
    std::vector<double> diag(m, 0.0), off(m - 1);
    for (int k = 1; k < m; ++k) off[k - 1] = k;
    const GaussRule g = golub_welsch(diag, off, std::sqrt(2.0 * std::numbers::pi));
    double m4 = 0.0, m6 = 0.0;
    for (int i = 0; i < m; ++i) {
        m4 += g.weights[i] * std::pow(g.nodes[i], 4);
        m6 += g.weights[i] * std::pow(g.nodes[i], 6);
    }
    CHECK(m4 / std::sqrt(2.0 * std::numbers::pi) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(m6 / std::sqrt(2.0 * std::numbers::pi) == doctest::Approx(15.0).epsilon(1e-13));
}

TEST_CASE("RadialField integrates through its shared rule") {
    auto rule = std::make_shared<const RadialRule>(radial_rule(3.0, 256, RadialKind::adaptive_panel, true));
    RadialField f{rule, std::vector<double>(rule->nodes.size(), 1.0)};
    CHECK(integrate(f) == doctest::Approx(gaussian_moment(3.0, 0.0)).epsilon(1e-12));
}

TEST_CASE("too few panels cannot be certified") {
    CHECK_THROWS_AS(radial_rule(16.0, 64, RadialKind::adaptive_panel), AccuracyError);
}
