#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <random>

#include "wls/ckn.hpp"
#include "wls/constants.hpp"
#include "wls/errors.hpp"
#include "wls/parameter_space.hpp"

using namespace wls;

namespace {

// |g|_{2p,gamma} / (|grad g|_{2,beta}^theta |g|_{p+1,gamma}^{1-theta}) for the
// Aubin-Talenti function, by double exponential quadrature on (0, inf).
double quotient_oracle(const ProblemParams& q, double p) {
    boost::math::quadrature::exp_sinh<double> ex;
    const double d = q.d, a = 2.0 + q.beta - q.gamma, e = 1.0 / (p - 1.0);
    const double sd = sphere_volume(q.d);
    auto guard = [](auto f) { return [f](double r) { return (r > 0.0 && r < 1e200) ? f(r) : 0.0; }; };
    auto lg = [&](double r) { return -e * std::log1p(std::pow(r, a)); };
    const double i2p = sd * ex.integrate(guard([&](double r) { return std::exp(2.0 * p * lg(r) + (d - 1.0 - q.gamma) * std::log(r)); }));
    const double ip1 = sd * ex.integrate(guard([&](double r) { return std::exp((p + 1.0) * lg(r) + (d - 1.0 - q.gamma) * std::log(r)); }));
    const double igr = sd * ex.integrate(guard([&](double r) {
        const double ldg = std::log(a * e) + (a - 1.0) * std::log(r) + lg(r) - std::log1p(std::pow(r, a));
        return std::exp(2.0 * ldg + (d - 1.0 - q.beta) * std::log(r));
    }));
    const double th = ckn_theta(q, p);
    return std::pow(i2p, 1.0 / (2.0 * p)) / (std::pow(igr, 0.5 * th) * std::pow(ip1, (1.0 - th) / (p + 1.0)));
}

}  // namespace

TEST_CASE("b, theta and zeta at simple points") {
    CHECK(ckn_b(4.0, 1.0) == 4.0);
    CHECK(ckn_b(16.0, 1.0) == 4.0);
    const double h = 1e-6;
    CHECK((ckn_b(7.0, 1.0 + h) - ckn_b(7.0, 1.0 - h)) / (2 * h) == doctest::Approx(-5.0).epsilon(1e-9));
    const ProblemParams q{3, -1.0, -1.0};
    CHECK(ckn_theta(q, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ckn_constants(q, 2.0).theta == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(ckn_theta(q, 1.0 + 1e-9)) < 1e-8);
    CHECK(ckn_zeta(4.0, 1.0) == 0.0);
}

TEST_CASE("zeta'(1) = 1/4 by finite differences") {
    for (double n : {2.4, 4.0, 16.0, 33.0}) {
        const double h = 1e-6;
        const double fd = (ckn_zeta(n, 1.0 + h) - ckn_zeta(n, 1.0 - h)) / (2.0 * h);
        CHECK(std::abs(fd - 0.25) < 1e-6);
        CHECK(std::abs(ckn_zeta(n, 1.0)) < 1e-15);
    }
}

TEST_CASE("property: zeta formulas agree and theta lies in (0, 1]") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int used = 0;
    for (int t = 0; t < 2000; ++t) {
        const int d = 1 + static_cast<int>(rng() % 4);
        const double g = -5.0 + (d + 5.0) * u(rng) * 0.99;
        const double lo = g - 2.0, hi = (d - 2.0) * g / d;
        const ProblemParams q{d, lo + (hi - lo) * (0.01 + 0.98 * u(rng)), g};
        if (!admissible(q)) continue;
        const DerivedParams dp = derive(q);
        const double p = 1.0 + std::min(dp.p_star - 1.0, 4.0) * (0.001 + 0.998 * u(rng));
        const double th = ckn_theta(q, p);
        CHECK(th > 0.0);
        CHECK(th <= 1.0 + 1e-12);
        // the theta form sums O(1) terms to a small zeta near p = 1: absolute check
        CHECK(zeta_from_theta(th, p) == doctest::Approx(ckn_zeta(dp.n, p)).epsilon(1e-13).scale(1.0));
        const CknPoint c = ckn_constants(q, p);
        CHECK(c.log_c_star_p == doctest::Approx(c.zeta * std::log(dp.alpha) + std::log(c.k_star_p)).epsilon(1e-12).scale(1.0));
        CHECK(c.b == doctest::Approx(dp.n + 2.0 - p * (dp.n - 2.0)).epsilon(1e-14));
        ++used;
    }
    CHECK(used > 1500);
}

TEST_CASE("closed form against the quadrature quotient") {
    struct Case {
        ProblemParams q;
        double p;
    };
    for (const Case& c : {Case{{3, -1.0, -1.0}, 1.5}, Case{{3, -2.5, -1.0}, 1.1}, Case{{2, -0.5, -1.0}, 1.7},
                          Case{{4, -1.0, -0.5}, 1.2}, Case{{3, -1.0, -1.0}, 2.0}}) {
        const CknPoint k = ckn_constants(c.q, c.p);
        CHECK(k.c_star_p == doctest::Approx(quotient_oracle(c.q, c.p)).epsilon(1e-9));
    }
}

TEST_CASE("limit probe reproduces C* in the symmetry range") {
    for (const ProblemParams& q : {ProblemParams{3, -2.5, -1.0}, ProblemParams{2, -2.5, -1.0}, ProblemParams{4, -3.0, -1.5}}) {
        REQUIRE(classify(q) == Region::Symmetry);
        const double cs = evaluate_constants(derive(q), q.d).c_star;
        const LimitProbe lp = limit_probe(q, dyadic_sequence(6, 16));
        CHECK(std::abs(lp.limit - cs) < 1e-4);
        CHECK(std::abs(lp.log_limit - cs) < 1e-4);
        CHECK(lp.raw.size() == 11);
        // settling of the accelerated sequence
        REQUIRE(lp.diagonal.size() >= 3);
        const std::size_t m = lp.diagonal.size();
        CHECK(std::abs(lp.diagonal[m - 1] - lp.diagonal[m - 2]) <= std::abs(lp.diagonal[1] - lp.diagonal[0]));
    }
}

TEST_CASE("closed limit at (d, n, alpha) = (3, 4, 1)") {
    // (3,-1,-1) is in the breaking range; the closed form is still exact
    const LimitProbe lp = limit_probe({3, -1.0, -1.0}, dyadic_sequence());
    CHECK(std::abs(lp.limit + 2.0 + std::log(8.0 * M_PI)) < 1e-4);
}

TEST_CASE("near p = 1") {
    const ProblemParams q{3, -2.5, -1.0};
    for (double h : {1e-4, 1e-6, 1e-8}) {
        const CknPoint c = ckn_constants(q, 1.0 + h);
        CHECK(std::isfinite(c.log_c_star_p));
        CHECK(std::isfinite(c.k_star_p));
        CHECK(std::abs(c.c_star_p - 1.0) < 10.0 * h);
    }
    const double cs = evaluate_constants(derive(q), 3).c_star;
    CHECK(4.0 * ckn_constants(q, 1.0 + 1e-8).log_c_star_p / 1e-8 == doctest::Approx(cs).epsilon(1e-6));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(ckn_constants({3, -1.0, -1.0}, 1.0), DomainError);
    CHECK_THROWS_AS(ckn_constants({3, -1.0, -1.0}, 2.5), DomainError);
    CHECK_THROWS_AS(ckn_constants({3, 0.0, 0.0}, 1.5), DomainError);
    CHECK_THROWS_AS(limit_probe({3, -2.5, -1.0}, {1.1, 1.01, 1.001}), DomainError);
    CHECK_THROWS_AS(limit_probe({3, -2.5, -1.0}, {1.1, 1.05}), DomainError);
}

TEST_CASE("Aubin-Talenti profile") {
    CHECK(aubin_talenti_eval({3, -1.0, -1.0}, 1.5, 0.0) == 1.0);
    CHECK(aubin_talenti_eval({3, -1.0, -1.0}, 2.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(aubin_talenti_eval({3, -2.5, -1.0}, 1.1, 2.0) ==
          doctest::Approx(std::pow(1.0 + std::pow(2.0, 0.5), -10.0)).epsilon(1e-13));
    for (double s : {0.0, 0.5, 1.0, 2.5}) {
        CHECK(aubin_talenti_alpha_profile(1.0 + 1e-7, s) == doctest::Approx(std::exp(-0.5 * s * s)).epsilon(1e-6));
        CHECK(std::abs(aubin_talenti_alpha_profile(1.01, s) - std::exp(-0.5 * s * s)) <
              std::abs(aubin_talenti_alpha_profile(1.5, s) - std::exp(-0.5 * s * s)) + 1e-300);
    }
}
