#include "wls/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "wls/constants.hpp"
#include "wls/errors.hpp"
#include "wls/special.hpp"

namespace wls {

Profile zero_profile() {
    return {[](double) { return 0.0; }, [](double) { return 0.0; }};
}

double zonal_harmonic(int d, int ell, double theta) {
    if (d < 2) throw DomainError("zonal_harmonic: d must be >= 2");
    if (ell < 0) throw DomainError("zonal_harmonic: ell must be >= 0");
    if (d == 2) return std::cos(ell * theta);
    // Gegenbauer C_ell^lambda(cos theta) / C_ell^lambda(1).
    const double lam = 0.5 * (d - 2);
    auto gegen = [&](double x) {
        double c0 = 1.0, c1 = 2.0 * lam * x;
        if (ell == 0) return c0;
        for (int k = 1; k < ell; ++k) {
            const double c2 = (2.0 * (k + lam) * x * c1 - (k + 2.0 * lam - 1.0) * c0) / (k + 1.0);
            c0 = c1;
            c1 = c2;
        }
        return c1;
    };
    return gegen(std::cos(theta)) / gegen(1.0);
}

Profile optimizer_profile(const DerivedParams& dp) {
    const double c = evaluate_constants(dp, dp.d).c_nd;
    return {[c](double s) { return c * std::exp(-0.25 * s * s); },
            [c](double s) { return -0.5 * s * c * std::exp(-0.25 * s * s); }};
}

Profile sigma_optimizer_profile(const DerivedParams& dp, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("sigma_optimizer_profile: sigma must be positive");
    const double c = evaluate_constants(dp, dp.d).c_nd;
    const double lam2 = 2.0 * sigma / (dp.alpha * dp.alpha);
    const double amp = c * std::pow(lam2, 0.25 * dp.n);
    return {[=](double s) { return amp * std::exp(-0.25 * lam2 * s * s); },
            [=](double s) { return -0.5 * lam2 * s * amp * std::exp(-0.25 * lam2 * s * s); }};
}

Profile instability_mode_profile(const DerivedParams& dp, double log_factor) {
    const double m = 1.0 + lambda1(dp.d, dp.n, dp.alpha) / (dp.alpha * dp.alpha);
    auto value = [m, log_factor](double s) {
        return s > 0.0 ? std::exp(log_factor + m * std::log(s) - 0.25 * s * s) : 0.0;
    };
    return {value, [m, value](double s) { return s > 0.0 ? (m / s - 0.5 * s) * value(s) : 0.0; }};
}

namespace {

double xlogx2(double g2) { return g2 < 1e-300 ? 0.0 : g2 * std::log(g2); }

void require_finite(double v) {
    if (!std::isfinite(v)) throw DomainError("functionals: non-finite integrand");
}

struct Angular {
    std::vector<double> w, y;
    double a0 = 0.0, a1 = 0.0, a2 = 0.0;
    int ell = 0;
};

Angular angular_data(const Candidate& c, int d, int count) {
    Angular a;
    if (!c.mode) {
        a.a0 = sphere_volume(d);
        return a;
    }
    if (d < 2) throw DomainError("functionals: angular modes need d >= 2");
    a.ell = c.mode->ell;
    if (a.ell < 1) throw DomainError("functionals: angular mode needs ell >= 1");
    const SphereRule sr = sphere_rule(d, std::max(count, 2 * a.ell + 2));
    a.w = sr.weights;
    CompensatedSum s0, s1, s2;
    for (std::size_t k = 0; k < sr.theta.size(); ++k) {
        const double y = zonal_harmonic(d, a.ell, sr.theta[k]);
        a.y.push_back(y);
        s0.add(a.w[k]);
        s1.add(a.w[k] * y);
        s2.add(a.w[k] * y * y);
    }
    a.a0 = s0.value();
    a.a1 = s1.value();
    a.a2 = s2.value();
    return a;
}

// Shared evaluation: optional extra radial weight (gaussian form) and an
// optional |g|^p moment.
struct Sums {
    double norm_sq, grad_sq, entropy_raw, second, lp;
};

Sums evaluate(const Candidate& c, const DerivedParams& dp, const EvalSettings& st,
              const std::function<double(double)>* extra_weight, double p) {
    const RadialRule rule = radial_rule(dp.n, st.radial_count, st.kind, false, st.scale);
    const Angular ang = angular_data(c, dp.d, st.sphere_count);
    const double a2 = dp.alpha * dp.alpha;
    const double lb = c.mode ? ang.ell * (ang.ell + dp.d - 2.0) : 0.0;
    CompensatedSum n2, gr, en, m2, lp;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double s = rule.nodes[i];
        double w = rule.weights[i];
        if (extra_weight) w *= (*extra_weight)(s);
        if (w == 0.0) continue;
        const double g0 = c.radial.value(s), d0 = c.radial.slope(s);
        double g1 = 0.0, d1 = 0.0;
        if (c.mode) {
            g1 = c.mode->amplitude.value(s);
            d1 = c.mode->amplitude.slope(s);
        }
        require_finite(g0 + d0 + g1 + d1);
        const double grad = a2 * (d0 * d0 * ang.a0 + 2.0 * d0 * d1 * ang.a1 + d1 * d1 * ang.a2) +
                            lb * ang.a2 * g1 * g1 / (s * s);
        gr.add(w * grad);
        if (!c.mode) {
            const double g2 = g0 * g0;
            n2.add(w * ang.a0 * g2);
            en.add(w * ang.a0 * xlogx2(g2));
            m2.add(w * ang.a0 * g2 * s * s);
            if (p > 0.0) lp.add(w * ang.a0 * std::pow(std::abs(g0), p));
        } else {
            for (std::size_t k = 0; k < ang.w.size(); ++k) {
                const double g = g0 + g1 * ang.y[k];
                const double g2 = g * g;
                const double wk = w * ang.w[k];
                n2.add(wk * g2);
                en.add(wk * xlogx2(g2));
                m2.add(wk * g2 * s * s);
                if (p > 0.0) lp.add(wk * std::pow(std::abs(g), p));
            }
        }
    }
    return {n2.value(), gr.value(), en.value(), m2.value(), lp.value()};
}

}  // namespace

NormsEntropy norms_and_entropy(const Candidate& c, const DerivedParams& dp, const EvalSettings& settings) {
    const Sums s = evaluate(c, dp, settings, nullptr, 0.0);
    NormsEntropy r;
    r.norm_sq = s.norm_sq;
    r.grad_sq = s.grad_sq;
    r.entropy_raw = s.entropy_raw;
    r.entropy = s.norm_sq > 0.0 ? s.entropy_raw - s.norm_sq * std::log(s.norm_sq) : 0.0;
    r.second_moment = s.second;
    return r;
}

DeficitReport deficit(const Candidate& c, const DerivedParams& dp, const DeficitSpec& spec,
                      const EvalSettings& settings) {
    const double n = dp.n;
    DeficitReport r;
    r.spec = spec;
    if (spec.form == DeficitForm::gaussian_form) {
        const Profile g = sigma_optimizer_profile(dp, spec.sigma);
        const std::function<double(double)> w = [&g](double s) {
            const double v = g.value(s);
            return v * v;
        };
        const Sums s = evaluate(c, dp, settings, &w, 0.0);
        if (!(s.norm_sq > 0.0)) throw DomainError("deficit: zero norm");
        const double k_star = evaluate_constants(dp, dp.d).k_star;
        r.norm_sq = s.norm_sq;
        r.grad_sq = s.grad_sq;
        r.entropy = s.entropy_raw - s.norm_sq * std::log(s.norm_sq);
        r.deficit = r.grad_sq - spec.sigma * r.entropy - spec.sigma * (k_star - spec.k) * r.norm_sq;
        return r;
    }
    const NormsEntropy ne = norms_and_entropy(c, dp, settings);
    if (!(ne.norm_sq > 0.0)) throw DomainError("deficit: zero norm");
    r.norm_sq = ne.norm_sq;
    r.grad_sq = ne.grad_sq;
    r.entropy = ne.entropy;
    if (spec.form == DeficitForm::scale_invariant) {
        const double rhs = std::exp(-2.0 * spec.k / n + (1.0 - 2.0 / n) * std::log(ne.norm_sq) +
                                    (2.0 / n) * ne.entropy_raw / ne.norm_sq);
        r.deficit = ne.grad_sq - rhs;
    } else {
        const double sg = spec.sigma;
        if (!(sg > 0.0)) throw DomainError("deficit: sigma must be positive");
        r.deficit = ne.grad_sq - sg * ne.entropy -
                    sg * (0.5 * n * std::log(2.0 * std::numbers::e / (n * sg)) - spec.k) * ne.norm_sq;
    }
    return r;
}

double log_holder_gap(const Candidate& c, const DerivedParams& dp, double p, const EvalSettings& settings) {
    if (!(p > 2.0)) throw DomainError("log_holder_gap: need p > 2");
    const Sums s = evaluate(c, dp, settings, nullptr, p);
    if (!(s.norm_sq > 0.0)) throw DomainError("log_holder_gap: zero norm");
    const double ent = s.entropy_raw - s.norm_sq * std::log(s.norm_sq);
    const double lp2 = std::exp((2.0 / p) * std::log(s.lp));
    return (p / (p - 2.0)) * s.norm_sq * std::log(lp2 / s.norm_sq) - ent;
}

double potential(const DerivedParams& dp, double sigma, double x_abs) {
    if (!(x_abs > 0.0)) throw DomainError("potential: |x| must be positive");
    const double nu = dp.nu, a2 = dp.alpha * dp.alpha;
    return -(a2 * nu * (2.0 * (dp.d - 2) - nu) / 4.0) / (x_abs * x_abs) - sigma * nu * std::log(x_abs);
}

double potential_min_radius(const DerivedParams& dp, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("potential_min_radius: sigma must be positive");
    return dp.alpha * std::sqrt((2.0 * (dp.d - 2) - dp.nu) / (2.0 * sigma));
}

Profile el_solution_profile(const DerivedParams& dp) {
    const double amp = std::exp(0.5 * (dp.n + 1.0));
    const double a = 1.0 / (2.0 * dp.alpha * dp.alpha);
    return {[=](double s) { return amp * std::exp(-a * s * s); },
            [=](double s) { return -2.0 * a * s * amp * std::exp(-a * s * s); }};
}

std::vector<double> el_residual_nodes(const Profile& g, const DerivedParams& dp, int grid_size) {
    const int N = grid_size;
    if (N < 8) throw DomainError("el_residual: grid too small");
    const double S = dp.alpha * std::sqrt(dp.n + 80.0 * std::log(10.0));
    const double h = S / N;
    std::vector<double> v(N);
    double vmax = 0.0;
    for (int j = 0; j < N; ++j) {
        v[j] = g.value((j + 1) * h);
        if (!(v[j] > 0.0)) throw DomainError("el_residual: non-positive values encountered");
        vmax = std::max(vmax, v[j]);
    }
    auto first = [&](int j) {
        if (j >= 2 && j <= N - 3) return (v[j - 2] - 8 * v[j - 1] + 8 * v[j + 1] - v[j + 2]) / (12 * h);
        if (j == 0) return (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * h);
        if (j == 1) return (-3 * v[0] - 10 * v[1] + 18 * v[2] - 6 * v[3] + v[4]) / (12 * h);
        if (j == N - 2) return (3 * v[N - 1] + 10 * v[N - 2] - 18 * v[N - 3] + 6 * v[N - 4] - v[N - 5]) / (12 * h);
        return (25 * v[N - 1] - 48 * v[N - 2] + 36 * v[N - 3] - 16 * v[N - 4] + 3 * v[N - 5]) / (12 * h);
    };
    auto second = [&](int j) {
        const double h2 = 12 * h * h;
        if (j >= 2 && j <= N - 3) return (-v[j - 2] + 16 * v[j - 1] - 30 * v[j] + 16 * v[j + 1] - v[j + 2]) / h2;
        if (j == 0) return (45 * v[0] - 154 * v[1] + 214 * v[2] - 156 * v[3] + 61 * v[4] - 10 * v[5]) / h2;
        if (j == 1) return (10 * v[0] - 15 * v[1] - 4 * v[2] + 14 * v[3] - 6 * v[4] + v[5]) / h2;
        if (j == N - 2)
            return (10 * v[N - 1] - 15 * v[N - 2] - 4 * v[N - 3] + 14 * v[N - 4] - 6 * v[N - 5] + v[N - 6]) / h2;
        return (45 * v[N - 1] - 154 * v[N - 2] + 214 * v[N - 3] - 156 * v[N - 4] + 61 * v[N - 5] - 10 * v[N - 6]) / h2;
    };
    const double a2 = dp.alpha * dp.alpha;
    std::vector<double> res(N);
    for (int j = 0; j < N; ++j) {
        const double s = (j + 1) * h;
        const double lg = a2 * (second(j) + (dp.n - 1.0) * first(j) / s);
        res[j] = std::abs(-lg + v[j] - v[j] * std::log(v[j] * v[j])) / vmax;
    }
    return res;
}

double el_residual(const Profile& g, const DerivedParams& dp, int grid_size) {
    const std::vector<double> res = el_residual_nodes(g, dp, grid_size);
    // Interior nodes: those reached by the central stencil.
    return *std::max_element(res.begin() + 2, res.end() - 2);
}

}  // namespace wls
