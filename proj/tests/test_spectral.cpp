#include <doctest.h>

#include <cmath>
#include <random>

#include "wls/constants.hpp"
#include "wls/errors.hpp"
#include "wls/functionals.hpp"
#include "wls/parameter_space.hpp"
#include "wls/spectral.hpp"

using namespace wls;

TEST_CASE("eigenvalue at (3,4,1)") {
    const EigenResult r = radial_eigensolve(3, derive_from_n_alpha(3, 4.0, 1.0));
    CHECK(r.big_lambda == doctest::Approx(1.0 + std::sqrt(3.0)).epsilon(1e-7));
    CHECK(std::abs(r.lambda_numeric - (std::sqrt(3.0) - 2.0)) < 1e-6);
    CHECK(r.shift == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(r.lambda_formula == doctest::Approx(std::sqrt(3.0) - 2.0).epsilon(1e-14));
    CHECK(r.sign_changes == 0);
    CHECK(r.levels.size() == 3);
    CHECK(r.error_estimate < 1e-6);
}

TEST_CASE("eigenvalue at (3,16,1/4)") {
    const EigenResult r = radial_eigensolve(3, derive_from_n_alpha(3, 16.0, 0.25));
    CHECK(std::abs(r.lambda_numeric - 0.0625) < 1e-6);
}

TEST_CASE("eigenvalue vanishes on the threshold") {
    for (int d : {2, 3, 4}) {
        for (double n : {d + 0.5, 8.0, 30.0}) {
            const double afs = std::sqrt((d - 1.0) / (n - 1.0));
            const EigenResult r = radial_eigensolve(d, derive_from_n_alpha(d, n, afs));
            CHECK(std::abs(r.lambda_numeric) < 1e-6);
        }
    }
}

TEST_CASE("property: numeric and closed form agree on random (d, n, alpha)") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 12; ++t) {
        const int d = 2 + static_cast<int>(rng() % 3);
        const double n = d + 0.05 + (40.0 - d - 0.05) * u(rng);
        const double a = 0.1 + 2.9 * u(rng);
        const EigenResult r = radial_eigensolve(d, derive_from_n_alpha(d, n, a));
        CHECK(std::abs(r.lambda_numeric - r.lambda_formula) < 1e-6);
        CHECK(r.sign_changes == 0);
    }
}

TEST_CASE("ground state is nodeless and matches the closed-form mode") {
    const DerivedParams dp = derive_from_n_alpha(3, 4.0, 1.0);
    const EigenResult r = radial_eigensolve(3, dp);
    REQUIRE(r.mode.size() == r.nodes.size());
    double mx = 0.0;
    for (double v : r.mode) {
        CHECK(v >= 0.0);
        mx = std::max(mx, v);
    }
    CHECK(mx == doctest::Approx(1.0).epsilon(1e-14));
    // compare shape with s^{1+delta} e^{-s^2/4} after max normalization
    const Profile phi = instability_mode_profile(dp);
    double pmax = 0.0;
    for (double s : r.nodes) pmax = std::max(pmax, phi.value(s));
    double err = 0.0;
    for (std::size_t j = 0; j < r.nodes.size(); ++j) err = std::max(err, std::abs(r.mode[j] - phi.value(r.nodes[j]) / pmax));
    CHECK(err < 1e-4);
}

TEST_CASE("discrete operator on the closed-form mode") {
    for (auto [d, n, a] : {std::tuple{3, 4.0, 1.0}, {3, 16.0, 0.25}, {2, 2.5, 3.0}, {4, 40.0, 0.1}}) {
        const ModeResidual m = eigenmode_residual(d, derive_from_n_alpha(d, n, a), 4096);
        // the first and last 5% of a grid S (j/J)^1.5
        const double S = m.nodes.back(), lo = S * std::pow(0.05, 1.5), hi = S * std::pow(0.95, 1.5);
        double worst = 0.0;
        for (std::size_t j = 0; j < m.nodes.size(); ++j)
            if (m.nodes[j] >= lo && m.nodes[j] <= hi) worst = std::max(worst, m.residual[j]);
        CHECK(worst <= 1e-5);
    }
}

TEST_CASE("coarse grid with a tight tolerance is refused") {
    CHECK_THROWS_AS(radial_eigensolve(3, derive_from_n_alpha(3, 4.0, 1.0), 64, 1e-14), ConvergenceError);
    CHECK_THROWS_AS(radial_eigensolve(1, derive_from_n_alpha(1, 4.0, 1.0)), DomainError);
}

TEST_CASE("quadratic form on the explicit mode") {
    const DerivedParams a = derive_from_n_alpha(3, 4.0, 1.0), b = derive_from_n_alpha(3, 16.0, 0.25);
    CHECK(hessian_form({zero_profile(), AngularMode{1, instability_mode_profile(a)}}, a) < 0.0);
    CHECK(hessian_form({zero_profile(), AngularMode{1, instability_mode_profile(b)}}, b) > 0.0);
    CHECK(hessian_form({zero_profile(), AngularMode{1, zero_profile()}}, a) == 0.0);
    CHECK_THROWS_AS(hessian_form({optimizer_profile(a), AngularMode{1, instability_mode_profile(a)}}, a), DomainError);
    CHECK_THROWS_AS(hessian_form({zero_profile(), {}}, a), DomainError);
}

TEST_CASE("property: Rayleigh quotient of the explicit mode is lambda1") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const int d = 2 + static_cast<int>(rng() % 3);
        const double g = -5.0 + (d + 5.0) * u(rng) * 0.98;
        const double lo = g - 2.0, hi = (d - 2.0) * g / d;
        const ProblemParams p{d, lo + (hi - lo) * (0.02 + 0.96 * u(rng)), g};
        if (!admissible(p) || derive(p).n > 60.0) continue;
        const StabilityCertificate c = instability_certificate(p);
        const double l = c.lambda_formula;
        // |phi|^2/s^2 s^{n-1} ~ s^{2m+n-3} near 0; when 2m+n-2 is small the
        // inner quadrature panel cannot resolve it, and only the sign is checked
        const DerivedParams dp = derive(p);
        const double m = 1.0 + l / (dp.alpha * dp.alpha);
        if (2.0 * m + dp.n - 2.0 > 1.0) CHECK(c.hessian_per_norm == doctest::Approx(l).epsilon(1e-8).scale(1.0));
        if (std::abs(l) > 1e-8) {
            CHECK((c.hessian_per_norm < 0.0) == (l < 0.0));
            CHECK((c.verdict == Stability::unstable) == (l < 0.0));
        }
    }
}

TEST_CASE("certificates at the reference points") {
    CHECK(instability_certificate({3, -1.0, -1.0}).verdict == Stability::unstable);
    CHECK(instability_certificate({3, -2.5, -1.0}).verdict == Stability::stable);
    const double b = beta_fs(3, -1.0).value();
    CHECK(instability_certificate({3, b, -1.0}).verdict == Stability::marginal);
    CHECK_THROWS_AS(instability_certificate({3, 0.0, 0.0}), DomainError);
    CHECK(std::string(to_string(Stability::unstable)) == "unstable");
}
