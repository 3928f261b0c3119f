#include "wls/flow.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "wls/constants.hpp"
#include "wls/errors.hpp"
#include "wls/quadrature.hpp"
#include "wls/special.hpp"

namespace wls {

const char* to_string(FlowVariant v) {
    switch (v) {
        case FlowVariant::heat: return "heat";
        case FlowVariant::fokker_planck: return "fokker_planck";
        case FlowVariant::ornstein_uhlenbeck: return "ornstein_uhlenbeck";
    }
    return "unknown";
}

double self_similar_radius(double t, double r0, const DerivedParams& dp) {
    if (t < 0.0 || r0 < 0.0) throw DomainError("self_similar_radius: need t >= 0 and r0 >= 0");
    const double a = dp.alpha;
    return std::pow(std::pow(r0, 2.0 * a) + 2.0 * a * t, 1.0 / (2.0 * a));
}

namespace {

// log of the f-variable mass of exp(-y^2/(2 alpha)).
double log_stationary_mass(const DerivedParams& dp) {
    const double a = dp.alpha, n = dp.n;
    return log_sphere_volume(dp.d) - std::log(a) + log_gamma(0.5 * n) + 0.5 * n * std::log(2.0 * a) - std::log(2.0);
}

double log_stationary(double y, const DerivedParams& dp) { return -y * y / (2.0 * dp.alpha) - log_stationary_mass(dp); }

double log_self_similar(double t, double s, double r0, const DerivedParams& dp) {
    const double R = self_similar_radius(t, r0, dp);
    const double Ra = std::pow(R, dp.alpha);
    return -dp.alpha * dp.n * std::log(R) + log_stationary(s / Ra, dp);
}

// phi(x) = x log x - x + 1 with a series near x = 1.
double entropy_density(double x) {
    const double e = x - 1.0;
    if (std::abs(e) < 1e-2) {
        double sum = 0.0, p = e * e;
        for (int k = 2; k <= 10; ++k) {
            sum += ((k % 2 == 0) ? 1.0 : -1.0) * p / (k * (k - 1.0));
            p *= e;
        }
        return sum;
    }
    if (x <= 0.0) return 1.0;
    return x * std::log(x) - x + 1.0;
}

struct Grid {
    std::vector<double> xi, s, vol;
    std::vector<double> k;      // conductance at interfaces 0..J (k[0] = 0)
    std::vector<double> ref;    // operator reference at centres (psi = u / ref)
    double ghost = 0.0;         // psi value beyond s_max
};

Grid build_grid(const FlowConfig& cfg, double s_max) {
    const DerivedParams& dp = cfg.dp;
    const int J = cfg.grid_size;
    const double n = dp.n, a = dp.alpha, a2 = a * a;
    Grid g;
    g.xi.resize(J + 1);
    for (int j = 0; j <= J; ++j) g.xi[j] = s_max * std::pow(static_cast<double>(j) / J, cfg.kappa);
    g.s.resize(J);
    g.vol.resize(J);
    g.ref.assign(J, 1.0);
    g.k.assign(J + 1, 0.0);
    const bool ou = cfg.variant == FlowVariant::ornstein_uhlenbeck;
    const bool fp = cfg.variant == FlowVariant::fokker_planck;
    const double log_z = log_gamma(0.5 * n) + 0.5 * n * std::log(2.0 * a) - std::log(2.0);
    for (int j = 0; j < J; ++j) {
        g.s[j] = 0.5 * (g.xi[j] + g.xi[j + 1]);
        const double lo = g.xi[j], hi = g.xi[j + 1];
        if (ou) {
            const double xl = lo * lo / (2.0 * a), xh = hi * hi / (2.0 * a);
            g.vol[j] = (xl > 0.5 * n) ? boost::math::gamma_q(0.5 * n, xl) - boost::math::gamma_q(0.5 * n, xh)
                                      : boost::math::gamma_p(0.5 * n, xh) - boost::math::gamma_p(0.5 * n, xl);
        } else {
            g.vol[j] = (std::pow(hi, n) - std::pow(lo, n)) / n;
        }
        if (fp) g.ref[j] = std::exp(-g.s[j] * g.s[j] / (2.0 * a));
    }
    auto weight = [&](double x) {
        if (ou) return std::exp((n - 1.0) * std::log(x) - x * x / (2.0 * a) - log_z);
        const double w = std::pow(x, n - 1.0);
        return fp ? w * std::exp(-x * x / (2.0 * a)) : w;
    };
    for (int j = 1; j < J; ++j) g.k[j] = a2 * weight(g.xi[j]) / (g.s[j] - g.s[j - 1]);
    g.k[J] = a2 * weight(s_max) / (s_max - g.s[J - 1]);
    g.ghost = ou ? 1.0 : 0.0;
    return g;
}

// (vol - theta h T) u_new = (vol + (1-theta) h T) u + h b
void step(const Grid& g, std::vector<double>& u, double h, double theta, std::vector<double>& work_a,
          std::vector<double>& work_b, std::vector<double>& work_c, std::vector<double>& rhs) {
    const std::size_t J = u.size();
    for (std::size_t j = 0; j < J; ++j) {
        const double kl = g.k[j], kr = g.k[j + 1];
        const double lower = (j > 0) ? kl / g.ref[j - 1] : 0.0;
        const double mid = -(kl + kr) / g.ref[j];
        const double upper = (j + 1 < J) ? kr / g.ref[j + 1] : 0.0;
        double tu = mid * u[j];
        if (j > 0) tu += lower * u[j - 1];
        if (j + 1 < J) tu += upper * u[j + 1];
        rhs[j] = g.vol[j] * u[j] + (1.0 - theta) * h * tu;
        if (j + 1 == J) rhs[j] += h * kr * g.ghost;
        work_a[j] = -theta * h * lower;
        work_b[j] = g.vol[j] - theta * h * mid;
        work_c[j] = -theta * h * upper;
    }
    // Thomas; the matrix is an M-matrix, so no pivoting is needed.
    for (std::size_t j = 1; j < J; ++j) {
        const double m = work_a[j] / work_b[j - 1];
        work_b[j] -= m * work_c[j - 1];
        rhs[j] -= m * rhs[j - 1];
    }
    u[J - 1] = rhs[J - 1] / work_b[J - 1];
    for (std::size_t j = J - 1; j-- > 0;) u[j] = (rhs[j] - work_c[j] * u[j + 1]) / work_b[j];
}

struct Sample {
    double mass, entropy, fisher, distance;
};

Sample measure(const FlowConfig& cfg, const Grid& g, const std::vector<double>& u, double t, double f_factor,
               std::map<double, std::vector<double>>& lq) {
    const DerivedParams& dp = cfg.dp;
    const std::size_t J = u.size();
    CompensatedSum mass;
    for (std::size_t j = 0; j < J; ++j) mass.add(g.vol[j] * u[j]);
    const double M = f_factor * mass.value();
    auto log_ref = [&](double s) {
        switch (cfg.variant) {
            case FlowVariant::heat: return std::log(M) + log_self_similar(t, s, cfg.r0, dp);
            case FlowVariant::fokker_planck: return std::log(M) + log_stationary(s, dp);
            default: return std::log(M);
        }
    };
    std::vector<double> lr(J);
    CompensatedSum ent, dist;
    for (std::size_t j = 0; j < J; ++j) {
        lr[j] = log_ref(g.s[j]);
        const double ref = std::exp(lr[j]);
        const double uj = std::max(u[j], 0.0);
        double term;
        if (uj == 0.0)
            term = ref;
        else if (lr[j] < -600.0)
            term = uj * (std::log(uj) - lr[j]) - uj + ref;
        else
            term = ref * entropy_density(uj / ref);
        ent.add(g.vol[j] * term);
        if (cfg.variant == FlowVariant::ornstein_uhlenbeck)
            dist.add(g.vol[j] * (u[j] - M) * (u[j] - M));
        else
            dist.add(g.vol[j] * std::abs(u[j] - ref));
    }
    CompensatedSum fis;
    const double a2 = dp.alpha * dp.alpha, n = dp.n;
    for (std::size_t j = 1; j < J; ++j) {
        const double ul = std::max(u[j - 1], 0.0), ur = std::max(u[j], 0.0);
        if (ul == 0.0 && ur == 0.0) continue;
        const double x = g.xi[j];
        const double lx = log_ref(x);
        const double el = std::exp(lx - lr[j - 1]), er = std::exp(lx - lr[j]);
        const double psum = ur * er + ul * el;  // 2 psi_hat ref(xi)
        const double rel = 2.0 * (ur * er - ul * el) / psum;
        const double ds = g.s[j] - g.s[j - 1];
        // OU conductances already carry the normalized density.
        const double cond = (cfg.variant == FlowVariant::ornstein_uhlenbeck) ? g.k[j] : a2 * std::pow(x, n - 1.0) / ds;
        fis.add(cond * rel * rel * 0.5 * psum);
    }
    for (auto& [q, vals] : lq) {
        CompensatedSum s;
        for (std::size_t j = 0; j < J; ++j) s.add(g.vol[j] * std::pow(std::abs(u[j]), q));
        vals.push_back(std::pow(f_factor * s.value(), 1.0 / q));
    }
    const double distance = (cfg.variant == FlowVariant::ornstein_uhlenbeck) ? std::sqrt(dist.value())
                                                                              : f_factor * dist.value();
    return {M, f_factor * ent.value(), f_factor * fis.value(), distance};
}

}  // namespace

double flow_default_s_max(const FlowConfig& cfg, double t_end) {
    const DerivedParams& dp = cfg.dp;
    double width2 = dp.alpha;
    if (cfg.variant == FlowVariant::heat)
        width2 = dp.alpha * (std::pow(cfg.r0, 2.0 * dp.alpha) + 2.0 * dp.alpha * t_end);
    return std::sqrt(width2) * default_s_max(dp.n);
}

FlowTrace simulate(const FlowConfig& cfg, const std::function<double(double)>& u0, double t_end) {
    if (!(cfg.dt > 0.0)) throw DomainError("simulate: dt must be positive");
    if (!(t_end >= 0.0)) throw DomainError("simulate: t_end must be nonnegative");
    if (cfg.grid_size < 16) throw DomainError("simulate: grid_size too small");
    const double s_max = cfg.s_max > 0.0 ? cfg.s_max : flow_default_s_max(cfg, t_end);
    const Grid g = build_grid(cfg, s_max);
    const std::size_t J = g.s.size();
    const bool ou = cfg.variant == FlowVariant::ornstein_uhlenbeck;
    const double f_factor = ou ? 1.0 : sphere_volume(cfg.dp.d) / cfg.dp.alpha;

    std::vector<double> u(J);
    for (std::size_t j = 0; j < J; ++j) {
        u[j] = u0(g.s[j]);
        if (!std::isfinite(u[j]) || u[j] < 0.0) throw DomainError("simulate: initial data must be finite and >= 0");
    }

    std::vector<double> times;
    if (!cfg.sample_times.empty()) {
        times = cfg.sample_times;
        std::sort(times.begin(), times.end());
        times.erase(std::remove_if(times.begin(), times.end(), [&](double t) { return t <= 0.0 || t > t_end; }),
                    times.end());
        times.erase(std::unique(times.begin(), times.end()), times.end());
    } else {
        if (!(cfg.sample_interval > 0.0)) throw DomainError("simulate: sample_interval must be positive");
        const int m = static_cast<int>(std::floor(t_end / cfg.sample_interval + 1e-9));
        for (int k = 1; k <= m; ++k) times.push_back(k * cfg.sample_interval);
        if (times.empty() || times.back() < t_end - 1e-12) times.push_back(t_end);
    }

    FlowTrace tr;
    tr.variant = cfg.variant;
    tr.alpha = cfg.dp.alpha;
    tr.r0 = cfg.r0;
    tr.nodes = g.s;
    for (double q : cfg.q_list) tr.lq_norms[q] = {};
    auto record = [&](double t) {
        const Sample s = measure(cfg, g, u, t, f_factor, tr.lq_norms);
        if (cfg.variant != FlowVariant::heat && !tr.entropy.empty() && tr.entropy.size() > 1) {
            const double prev = tr.entropy.back();
            if (s.entropy > prev * (1.0 + 1e-9) + 1e-15)
                throw ConsistencyError("simulate: entropy increased along the flow");
        }
        tr.times.push_back(t);
        tr.mass.push_back(s.mass);
        tr.entropy.push_back(s.entropy);
        tr.fisher.push_back(s.fisher);
        tr.distance.push_back(s.distance);
    };
    record(0.0);

    std::vector<double> wa(J), wb(J), wc(J), rhs(J);
    double t = 0.0;
    int startup = cfg.startup_steps;
    for (double target : times) {
        while (t < target - 1e-14 * std::max(1.0, target)) {
            const double h = std::min(cfg.dt, target - t);
            if (startup > 0) {
                for (int k = 0; k < startup; ++k) step(g, u, h / startup, 1.0, wa, wb, wc, rhs);
                startup = 0;
            } else {
                step(g, u, h, 0.5, wa, wb, wc, rhs);
            }
            t += h;
            double peak = 0.0, low = 0.0;
            for (double v : u) {
                peak = std::max(peak, std::abs(v));
                low = std::min(low, v);
            }
            if (low < -1e-12 * peak) throw ConvergenceError("simulate: stability failure (negative values)");
        }
        t = target;
        record(t);
    }
    tr.final_state = u;
    return tr;
}

double stationary_profile(double y, const DerivedParams& dp) { return std::exp(log_stationary(y, dp)); }

double self_similar_heat(double t, double s, double r0, const DerivedParams& dp) {
    return std::exp(log_self_similar(t, s, r0, dp));
}

std::vector<double> to_fp(const std::vector<double>& u, const std::vector<double>& s_nodes, double R,
                          const DerivedParams& dp, std::vector<double>* y_nodes) {
    if (u.size() != s_nodes.size()) throw DomainError("to_fp: length mismatch");
    const double Ra = std::pow(R, dp.alpha), scale = std::pow(R, dp.alpha * dp.n);
    std::vector<double> v(u.size());
    if (y_nodes) y_nodes->resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        v[i] = scale * u[i];
        if (y_nodes) (*y_nodes)[i] = s_nodes[i] / Ra;
    }
    return v;
}

std::vector<double> from_fp(const std::vector<double>& v, const std::vector<double>& y_nodes, double R,
                            const DerivedParams& dp, std::vector<double>* s_nodes) {
    if (v.size() != y_nodes.size()) throw DomainError("from_fp: length mismatch");
    const double Ra = std::pow(R, dp.alpha), scale = std::pow(R, -dp.alpha * dp.n);
    std::vector<double> u(v.size());
    if (s_nodes) s_nodes->resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        u[i] = scale * v[i];
        if (s_nodes) (*s_nodes)[i] = y_nodes[i] * Ra;
    }
    return u;
}

namespace {

std::optional<double> fit_log_slope(const std::vector<double>& t, const std::vector<double>& y, double floor) {
    const std::size_t start = t.size() / 2;
    std::vector<double> xs, ys;
    for (std::size_t i = start; i < t.size(); ++i)
        if (y[i] > floor) {
            xs.push_back(t[i]);
            ys.push_back(std::log(y[i]));
        }
    if (xs.size() < 3) return std::nullopt;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= xs.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx == 0.0) return std::nullopt;
    return sxy / sxx;
}

}  // namespace

DecayDiagnostics decay_diagnostics(const FlowTrace& trace, const DerivedParams& dp, double floor) {
    if (trace.times.size() < 4) throw DomainError("decay_diagnostics: trace too short for a stable fit");
    DecayDiagnostics d;
    d.entropy_rate = fit_log_slope(trace.times, trace.entropy, floor);
    d.fisher_rate = fit_log_slope(trace.times, trace.fisher, floor);
    d.mode_rate = fit_log_slope(trace.times, trace.distance, std::sqrt(floor));
    if (trace.variant == FlowVariant::heat) {
        const double ent0 = trace.entropy.front();
        const double mass = trace.mass.front();
        d.cia_bound_ok = d.cia_half_form_ok = true;
        for (std::size_t i = 0; i < trace.times.size(); ++i) {
            const double R = self_similar_radius(trace.times[i], trace.r0, dp);
            const double decay = std::pow(trace.r0 / R, 2.0 * dp.alpha);
            const double slack = 1e-9 * std::max(1.0, trace.mass[i]);
            if (trace.distance[i] > std::sqrt(2.0 * mass * ent0) * decay + slack) d.cia_bound_ok = false;
            if (trace.distance[i] > 0.5 * std::sqrt(mass * ent0) * decay + slack) d.cia_half_form_ok = false;
        }
    }
    return d;
}

HyperReport hyper_experiment(const DerivedParams& dp, double c, double q, double r,
                             const std::function<double(double)>& u0, int grid_size, double tol) {
    if (!(r > q)) throw DomainError("hyper_experiment: need r > q");
    const HyperSchedule hs = hyper_schedule(dp.n, c, q, r);
    HyperReport rep;
    rep.sigma = hs.sigma;
    rep.t_star = hs.t_star;
    rep.h_const = hs.h_const;
    rep.p_at_t_star = 1.0 + (q - 1.0) * std::exp(4.0 * hs.sigma * hs.t_star);

    std::vector<double> times;
    const double lo = hs.t_star / 10.0, hi = hs.t_star * 10.0;
    for (int k = 0; k < 20; ++k) times.push_back(lo * std::pow(hi / lo, k / 19.0));
    times.push_back(hs.t_star);
    std::sort(times.begin(), times.end());

    FlowConfig cfg;
    cfg.dp = dp;
    cfg.variant = FlowVariant::heat;
    cfg.grid_size = grid_size;
    cfg.dt = hs.t_star / 200.0;
    cfg.sample_times = times;
    cfg.q_list = {q, r};
    const FlowTrace tr = simulate(cfg, u0, hi);

    rep.norm_q0 = tr.lq_norms.at(q).front();
    const double expo = 0.5 * dp.n * (r - q) / (q * r);
    rep.bound_ok = true;
    for (std::size_t i = 1; i < tr.times.size(); ++i) {
        const double t = tr.times[i];
        const double nr = tr.lq_norms.at(r)[i];
        const double bound = hs.h_const * rep.norm_q0 * std::pow(t, -expo);
        rep.times.push_back(t);
        rep.norms_r.push_back(nr);
        rep.bounds.push_back(bound);
        if (nr > bound * (1.0 + tol)) rep.bound_ok = false;
        if (t == hs.t_star) rep.norm_r_t_star = nr;
    }
    rep.t_star_ok = rep.norm_r_t_star <= rep.norm_q0 * (1.0 + tol);
    return rep;
}

}  // namespace wls
