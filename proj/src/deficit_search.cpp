#include "wls/deficit_search.hpp"

#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <random>

#include "wls/constants.hpp"
#include "wls/errors.hpp"
#include "wls/special.hpp"

namespace wls {

const char* to_string(AnsatzKind k) {
    switch (k) {
        case AnsatzKind::radial_spline: return "radial_spline";
        case AnsatzKind::gaussian_times_poly: return "gaussian_times_poly";
        case AnsatzKind::eigenmode_perturbation: return "eigenmode_perturbation";
    }
    return "unknown";
}

const char* to_string(CertificateVerdict v) {
    return v == CertificateVerdict::certified_breaking ? "certified_breaking" : "no_improvement";
}

namespace {

constexpr int spline_basis = 8;
constexpr int poly_terms = 4;

// Uniform cubic B-spline kernel on [-2, 2] and its derivative.
double bspline(double x) {
    const double a = std::abs(x);
    if (a >= 2.0) return 0.0;
    if (a >= 1.0) return (2.0 - a) * (2.0 - a) * (2.0 - a) / 6.0;
    return 2.0 / 3.0 - a * a + 0.5 * a * a * a;
}

double bspline_slope(double x) {
    const double a = std::abs(x), sg = x < 0.0 ? -1.0 : 1.0;
    if (a >= 2.0) return 0.0;
    if (a >= 1.0) return -0.5 * sg * (2.0 - a) * (2.0 - a);
    return sg * (-2.0 * a + 1.5 * a * a);
}

struct Spline {
    std::vector<double> c;
    double h = spline_span / (spline_basis - 3);
    double value(double s) const {
        double v = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) v += c[k] * bspline((s - (k - 1.0) * h) / h);
        return v;
    }
    double slope(double s) const {
        double v = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) v += c[k] * bspline_slope((s - (k - 1.0) * h) / h);
        return v / h;
    }
};

double factorial(int m) { return std::tgamma(m + 1.0); }

}  // namespace

int ansatz_dimension(AnsatzKind k) {
    switch (k) {
        case AnsatzKind::radial_spline: return spline_basis;
        case AnsatzKind::gaussian_times_poly: return 1 + poly_terms;
        case AnsatzKind::eigenmode_perturbation: return 3;
    }
    return 0;
}

Ansatz zero_ansatz(AnsatzKind k) {
    Ansatz a;
    a.kind = k;
    a.coefficients.assign(k == AnsatzKind::eigenmode_perturbation ? 2 : ansatz_dimension(k), 0.0);
    return a;
}

Candidate make_candidate(const Ansatz& a, const DerivedParams& dp) {
    for (double c : a.coefficients)
        if (!std::isfinite(c)) throw DomainError("make_candidate: non-finite coefficient");
    if (!std::isfinite(a.epsilon)) throw DomainError("make_candidate: non-finite epsilon");
    const Profile gs = optimizer_profile(dp);
    Candidate cand;
    switch (a.kind) {
        case AnsatzKind::radial_spline: {
            if (a.coefficients.size() != static_cast<std::size_t>(spline_basis))
                throw DomainError("make_candidate: radial_spline needs 8 coefficients");
            auto sp = std::make_shared<Spline>();
            sp->c = a.coefficients;
            cand.radial.value = [gs, sp](double s) { return gs.value(s) * std::exp(sp->value(s)); };
            cand.radial.slope = [gs, sp](double s) {
                return (gs.slope(s) + gs.value(s) * sp->slope(s)) * std::exp(sp->value(s));
            };
            break;
        }
        case AnsatzKind::gaussian_times_poly: {
            if (a.coefficients.size() != static_cast<std::size_t>(1 + poly_terms))
                throw DomainError("make_candidate: gaussian_times_poly needs 5 coefficients");
            const double w = std::exp(a.coefficients[0]) / 4.0;
            std::vector<double> c(poly_terms);
            for (int k = 1; k <= poly_terms; ++k) c[k - 1] = a.coefficients[k] / factorial(2 * k);
            auto poly = [c](double s, double& dpoly) {
                double v = 1.0, dv = 0.0, s2 = s * s, pw = 1.0;
                for (int k = 1; k <= poly_terms; ++k) {
                    dv += c[k - 1] * 2.0 * k * pw * s;  // d/ds s^{2k} = 2k s^{2k-1}
                    pw *= s2;
                    v += c[k - 1] * pw;
                }
                dpoly = dv;
                return v;
            };
            cand.radial.value = [w, poly](double s) {
                double dp_;
                const double q = poly(s, dp_);
                return std::exp(-w * s * s) * q * q;
            };
            cand.radial.slope = [w, poly](double s) {
                double dq;
                const double q = poly(s, dq);
                return std::exp(-w * s * s) * (2.0 * q * dq - 2.0 * w * s * q * q);
            };
            break;
        }
        case AnsatzKind::eigenmode_perturbation: {
            if (a.coefficients.size() != 2) throw DomainError("make_candidate: eigenmode_perturbation needs 2 coefficients");
            const double c0 = a.coefficients[0], c1 = a.coefficients[1];
            auto tweak = [c0, c1](double s) { return c0 * s * s / 8.0 + c1 * s * s * s * s / 64.0; };
            auto tweak_slope = [c0, c1](double s) { return c0 * s / 4.0 + c1 * s * s * s / 16.0; };
            cand.radial.value = [gs, tweak](double s) { return gs.value(s) * std::exp(tweak(s)); };
            cand.radial.slope = [gs, tweak, tweak_slope](double s) {
                return (gs.slope(s) + gs.value(s) * tweak_slope(s)) * std::exp(tweak(s));
            };
            if (a.epsilon != 0.0) {
                if (dp.d < 2) throw DomainError("make_candidate: the l=1 channel needs d >= 2");
                // Unit L^2 norm of phi_1 Y_1, with int Y_1^2 = |S^{d-1}|/d.
                const double m = 1.0 + lambda1(dp.d, dp.n, dp.alpha) / (dp.alpha * dp.alpha);
                const double log_norm2 = (m + 0.5 * dp.n - 1.0) * std::log(2.0) + log_gamma(m + 0.5 * dp.n) +
                                         log_sphere_volume(dp.d) - std::log(static_cast<double>(dp.d));
                const Profile phi = instability_mode_profile(dp, std::log(std::abs(a.epsilon)) - 0.5 * log_norm2);
                const double sg = a.epsilon < 0.0 ? -1.0 : 1.0;
                cand.mode = AngularMode{1, {[phi, sg](double s) { return sg * phi.value(s); },
                                            [phi, sg](double s) { return sg * phi.slope(s); }}};
            }
            break;
        }
    }
    return cand;
}

double normalized_deficit(const Candidate& c, const DerivedParams& dp, const EvalSettings& settings) {
    const double k_star = evaluate_constants(dp, dp.d).k_star;
    const DeficitReport r = deficit(c, dp, {DeficitForm::scale_invariant, k_star, 0.5}, settings);
    return r.deficit / r.norm_sq;
}

double implied_k(const Candidate& c, const DerivedParams& dp, const EvalSettings& settings) {
    const NormsEntropy ne = norms_and_entropy(c, dp, settings);
    return ne.entropy / ne.norm_sq - 0.5 * dp.n * std::log(ne.grad_sq / ne.norm_sq);
}

namespace {

// |phi_1|^2 s^{n-1} peaks near s^2 = 2m + n - 1, beyond the reach of the
// default rule when delta is large (small alpha); stretch the rule to cover it.
EvalSettings covering_mode(EvalSettings settings, const DerivedParams& dp) {
    if (dp.d < 2) return settings;
    const double m = 1.0 + lambda1(dp.d, dp.n, dp.alpha) / (dp.alpha * dp.alpha);
    settings.scale *= std::max(1.0, default_s_max(dp.n + 2.0 * m) / default_s_max(dp.n));
    return settings;
}

struct SearchState {
    const DerivedParams* dp = nullptr;
    AnsatzKind kind = AnsatzKind::radial_spline;
    const SearchSettings* settings = nullptr;
    double k_star = 0.0;
    double scale = 0.0;  // n alpha^2 / 4
    int evaluations = 0;
    int finite = 0;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_x;
    std::vector<double> history;
};

Ansatz ansatz_from(AnsatzKind kind, const double* x, int dim) {
    Ansatz a;
    a.kind = kind;
    if (kind == AnsatzKind::eigenmode_perturbation) {
        a.epsilon = x[0];
        a.coefficients.assign(x + 1, x + dim);
    } else {
        a.coefficients.assign(x, x + dim);
    }
    return a;
}

constexpr double penalty = 1e3;

double objective(const gsl_vector* v, void* raw) {
    auto* st = static_cast<SearchState*>(raw);
    const int dim = static_cast<int>(v->size);
    std::vector<double> x(dim);
    for (int i = 0; i < dim; ++i) x[i] = gsl_vector_get(v, i);
    ++st->evaluations;
    double value = penalty;
    bool bounded = true;
    for (double c : x) bounded = bounded && std::abs(c) <= 20.0;
    if (st->kind == AnsatzKind::gaussian_times_poly) bounded = bounded && std::abs(x[0]) <= 3.0;
    if (bounded) {
        try {
            const Candidate cand = make_candidate(ansatz_from(st->kind, x.data(), dim), *st->dp);
            const DeficitReport r =
                deficit(cand, *st->dp, {DeficitForm::scale_invariant, st->k_star, 0.5}, st->settings->eval);
            const double rel = st->scale * r.deficit / r.grad_sq;
            if (std::isfinite(rel)) {
                value = rel;
                ++st->finite;
            }
        } catch (const Error&) {
        }
    }
    if (value < st->best) {
        st->best = value;
        st->best_x = x;
    }
    st->history.push_back(st->best);
    return value;
}

}  // namespace

SearchResult minimize_deficit(const ProblemParams& params, AnsatzKind family, const SearchSettings& settings) {
    if (!admissible(params)) throw DomainError("minimize_deficit: inadmissible parameters");
    if (settings.budget < 100) throw DomainError("minimize_deficit: budget must be >= 100");
    if (family == AnsatzKind::eigenmode_perturbation && params.d < 2)
        throw DomainError("minimize_deficit: eigenmode family needs d >= 2");
    const DerivedParams dp = derive(params);
    SearchState st;
    st.dp = &dp;
    st.kind = family;
    SearchSettings local = settings;
    if (family == AnsatzKind::eigenmode_perturbation) local.eval = covering_mode(settings.eval, dp);
    st.settings = &local;
    st.k_star = evaluate_constants(dp, dp.d).k_star;
    st.scale = 0.25 * dp.n * dp.alpha * dp.alpha;

    const int dim = ansatz_dimension(family);
    std::mt19937_64 rng(settings.seed);
    std::normal_distribution<double> jitter(0.0, 1.0);

    std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> mz(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim), &gsl_multimin_fminimizer_free);
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(dim), &gsl_vector_free);
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> step(gsl_vector_alloc(dim), &gsl_vector_free);
    gsl_multimin_function fn{&objective, static_cast<std::size_t>(dim), &st};

    SearchResult res;
    std::vector<double> start(dim, 0.0);
    if (family == AnsatzKind::eigenmode_perturbation) start[0] = 0.05;
    const int restarts = std::max(1, settings.restarts);
    for (int r = 0; r < restarts && st.evaluations < settings.budget; ++r) {
        const double width = 0.3 / (1 << r);
        for (int i = 0; i < dim; ++i) {
            const double base = (r == 0 || st.best_x.empty()) ? start[i] : st.best_x[i];
            gsl_vector_set(x.get(), i, base + (r == 0 ? 0.0 : 0.1 * width * jitter(rng)));
            gsl_vector_set(step.get(), i, width);
        }
        gsl_multimin_fminimizer_set(mz.get(), &fn, x.get(), step.get());
        res.converged = false;
        while (st.evaluations < settings.budget) {
            if (gsl_multimin_fminimizer_iterate(mz.get()) != GSL_SUCCESS) break;
            ++res.iterations;
            if (gsl_multimin_fminimizer_size(mz.get()) < 1e-7) {
                res.converged = true;
                break;
            }
        }
    }
    if (st.finite == 0) throw ConvergenceError("minimize_deficit: degenerate family (no finite evaluation)");

    res.best_deficit = st.best;
    res.ansatz = ansatz_from(family, st.best_x.data(), dim);
    res.k_implied = implied_k(make_candidate(res.ansatz, dp), dp, local.eval);
    res.history = std::move(st.history);
    return res;
}

Certificate sb_certificate(const ProblemParams& params, const EvalSettings& settings, int grid_points) {
    if (params.d < 2) throw DomainError("sb_certificate: needs d >= 2");
    if (!admissible(params)) throw DomainError("sb_certificate: inadmissible parameters");
    if (grid_points < 3) throw DomainError("sb_certificate: need at least 3 grid points");
    const DerivedParams dp = derive(params);
    const EvalSettings eval_settings = covering_mode(settings, dp);
    auto eval = [&](double log_eps) {
        Ansatz a = zero_ansatz(AnsatzKind::eigenmode_perturbation);
        a.epsilon = std::exp(log_eps);
        return normalized_deficit(make_candidate(a, dp), dp, eval_settings);
    };
    Certificate cert;
    const double lo = std::log(1e-4), hi = 0.0;
    std::size_t best = 0;
    for (int i = 0; i < grid_points; ++i) {
        const double le = lo + (hi - lo) * i / (grid_points - 1);
        cert.eps_grid.push_back(std::exp(le));
        cert.deficit_grid.push_back(eval(le));
        if (cert.deficit_grid.back() < cert.deficit_grid[best]) best = i;
    }
    double best_le = std::log(cert.eps_grid[best]);
    double best_val = cert.deficit_grid[best];
    if (best > 0 && best + 1 < cert.eps_grid.size()) {
        const auto [le, val] = boost::math::tools::brent_find_minima(
            eval, std::log(cert.eps_grid[best - 1]), std::log(cert.eps_grid[best + 1]), 30);
        if (val < best_val) {
            best_le = le;
            best_val = val;
        }
    }
    cert.epsilon = std::exp(best_le);
    cert.deficit = best_val;
    cert.verdict = best_val < -1e-8 ? CertificateVerdict::certified_breaking : CertificateVerdict::no_improvement;
    return cert;
}

std::vector<ProblemParams> certificate_points(int d, double gamma_min, double gamma_max, int steps) {
    if (steps < 2) throw DomainError("certificate_points: steps must be >= 2");
    if (!(gamma_max > gamma_min) || gamma_max > d) throw DomainError("certificate_points: bad gamma range");
    std::vector<ProblemParams> pts;
    for (int i = 0; i < steps; ++i) {
        const double g = gamma_min + (i + 0.5) * (gamma_max - gamma_min) / steps;
        const double blo = g - 2.0, bhi = (d - 2.0) * g / d;
        for (int j = 0; j < steps; ++j) pts.push_back({d, blo + (j + 0.5) * (bhi - blo) / steps, g});
    }
    return pts;
}

namespace {

CertificateCell certify_cell(const ProblemParams& p, const EvalSettings& settings, int grid_points) {
    CertificateCell cell;
    cell.params = p;
    cell.region = classify(p);
    if (cell.region != Region::Inadmissible && p.d >= 2) {
        cell.certificate = sb_certificate(p, settings, grid_points);
        cell.evaluated = true;
    }
    return cell;
}

}  // namespace

std::vector<CertificateCell> certificate_grid_serial(const std::vector<ProblemParams>& points,
                                                     const EvalSettings& settings, int grid_points) {
    std::vector<CertificateCell> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(certify_cell(p, settings, grid_points));
    return out;
}

std::vector<CertificateCell> certificate_grid_parallel(const std::vector<ProblemParams>& points,
                                                       const EvalSettings& settings, int grid_points) {
    std::vector<CertificateCell> out(points.size());
    std::exception_ptr failure;
    const long count = static_cast<long>(points.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
        try {
            out[i] = certify_cell(points[i], settings, grid_points);
        } catch (...) {
#pragma omp critical(wls_certificate_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace wls
