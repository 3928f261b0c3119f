#include "wls/carre_du_champ.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wls/constants.hpp"
#include "wls/errors.hpp"
#include "wls/special.hpp"

namespace wls {

PressureSample sample_pressure(const PressureFn& p, double r, double theta) {
    const Jet3 j = p(Jet3::variable(r, 0), Jet3::variable(theta, 1));
    PressureSample s;
    s.r = r;
    s.theta = theta;
    s.p = j.partial(0, 0);
    s.pr = j.partial(1, 0);
    s.pt = j.partial(0, 1);
    s.prr = j.partial(2, 0);
    s.prt = j.partial(1, 1);
    s.ptt = j.partial(0, 2);
    s.prrr = j.partial(3, 0);
    s.prrt = j.partial(2, 1);
    s.prtt = j.partial(1, 2);
    s.pttt = j.partial(0, 3);
    s.order = 3;
    return s;
}

PressureField make_pressure_field(const PressureFn& p, const std::vector<double>& r_nodes,
                                  const std::vector<double>& theta_nodes) {
    PressureField f;
    for (double r : r_nodes)
        for (double t : theta_nodes) f.samples.push_back(sample_pressure(p, r, t));
    return f;
}

namespace {

void require_order(const PressureSample& s, int order) {
    if (s.order < order) throw DomainError("carre_du_champ: missing derivative order");
}

double cot_term(const DerivedParams& dp, double theta) {
    return dp.d == 2 ? 0.0 : (dp.d - 2.0) * std::cos(theta) / std::sin(theta);
}

Jet3 to_jet(const PressureSample& s) {
    Jet3 j;
    j.at(0, 0) = s.p;
    j.at(1, 0) = s.pr;
    j.at(0, 1) = s.pt;
    j.at(2, 0) = s.prr / 2.0;
    j.at(1, 1) = s.prt;
    j.at(0, 2) = s.ptt / 2.0;
    j.at(3, 0) = s.prrr / 6.0;
    j.at(2, 1) = s.prrt / 2.0;
    j.at(1, 2) = s.prtt / 2.0;
    j.at(0, 3) = s.pttt / 6.0;
    return j;
}

template <int N>
Jet<N> cot_jet(const Jet<N>& th, int d) {
    if (d == 2) return Jet<N>(0.0);
    return (d - 2.0) * cos(th) / sin(th);
}

}  // namespace

OperatorValue apply_operator(OperatorKind which, const PressureSample& s, const DerivedParams& dp) {
    OperatorValue v;
    switch (which) {
        case OperatorKind::D_alpha:
            require_order(s, 1);
            v.radial = dp.alpha * s.pr;
            v.angular = s.pt / s.r;
            break;
        case OperatorKind::L_alpha:
            require_order(s, 2);
            v.radial = dp.alpha * dp.alpha * (s.prr + (dp.n - 1.0) * s.pr / s.r) +
                       (s.ptt + cot_term(dp, s.theta) * s.pt) / (s.r * s.r);
            break;
        case OperatorKind::laplace_beltrami:
            require_order(s, 2);
            v.radial = s.ptt + cot_term(dp, s.theta) * s.pt;
            break;
    }
    return v;
}

std::vector<OperatorValue> apply_operator(OperatorKind which, const PressureField& f, const DerivedParams& dp) {
    std::vector<OperatorValue> out;
    out.reserve(f.samples.size());
    for (const auto& s : f.samples) out.push_back(apply_operator(which, s, dp));
    return out;
}

double k_sphere(double pt, double ptt, double pttt, double theta, const DerivedParams& dp) {
    const double n = dp.n, a2 = dp.alpha * dp.alpha;
    const double ct = cot_term(dp, theta);
    const double lap = ptt + ct * pt;
    const double half_lap_grad2 = ptt * ptt + pt * pttt + ct * pt * ptt;
    const double sin2 = std::sin(theta) * std::sin(theta);
    const double dlap = pttt + (dp.d == 2 ? 0.0 : ct * ptt - (dp.d - 2.0) * pt / sin2);
    return half_lap_grad2 - pt * dlap - lap * lap / (n - 1.0) - (n - 2.0) * a2 * pt * pt;
}

BulkTerms k_bulk_point(const PressureSample& s, const DerivedParams& dp) {
    require_order(s, 3);
    const double n = dp.n, a2 = dp.alpha * dp.alpha;
    const int d = dp.d;

    // Direct form, assembled in jet arithmetic from the supplied partials.
    const Jet3 P = to_jet(s);
    const Jet3 R = Jet3::variable(s.r, 0);
    const Jet3 T = Jet3::variable(s.theta, 1);
    const Jet<2> pr = P.d_r(), pt = P.d_theta();
    const Jet<2> r2 = R.truncate<2>();
    const Jet<2> q = a2 * pr * pr + pt * pt / (r2 * r2);
    const Jet<2> t2 = T.truncate<2>();
    const double cq = cot_jet(t2, d).value();
    const double lq = a2 * (q.partial(2, 0) + (n - 1.0) * q.partial(1, 0) / s.r) +
                      (q.partial(0, 2) + cq * q.partial(0, 1)) / (s.r * s.r);
    const Jet<1> r1 = R.truncate<1>(), t1 = T.truncate<1>();
    const Jet<1> lp = a2 * (pr.d_r() + (n - 1.0) * pr.truncate<1>() / r1) +
                      (pt.d_theta() + cot_jet(t1, d) * pt.truncate<1>()) / (r1 * r1);
    const double dot = a2 * s.pr * lp.partial(1, 0) + s.pt * lp.partial(0, 1) / (s.r * s.r);
    BulkTerms b;
    b.direct = 0.5 * lq - dot - lp.value() * lp.value() / n;
    b.scale = std::max({std::abs(0.5 * lq), std::abs(dot), lp.value() * lp.value() / n});

    // Decomposition.
    const double lap = s.ptt + cot_term(dp, s.theta) * s.pt;
    const double h = s.prr - s.pr / s.r - lap / (a2 * (n - 1.0) * s.r * s.r);
    b.hessian_term = a2 * a2 * (1.0 - 1.0 / n) * h * h;
    const double m = s.prt - s.pt / s.r;
    b.mixed_term = 2.0 * a2 / (s.r * s.r) * m * m;
    b.k_term = k_sphere(s.pt, s.ptt, s.pttt, s.theta, dp) / std::pow(s.r, 4);
    return b;
}

IdentityReport k_bulk(const PressureField& f, const DerivedParams& dp) {
    IdentityReport rep;
    rep.min_hessian_term = rep.min_mixed_term = INFINITY;
    for (const auto& s : f.samples) {
        const BulkTerms b = k_bulk_point(s, dp);
        rep.terms.push_back(b);
        const double res = std::abs(b.direct - (b.hessian_term + b.mixed_term + b.k_term));
        rep.max_abs_residual = std::max(rep.max_abs_residual, res);
        rep.max_term =
            std::max({rep.max_term, std::abs(b.direct), b.hessian_term, b.mixed_term, std::abs(b.k_term), b.scale});
        rep.min_hessian_term = std::min(rep.min_hessian_term, b.hessian_term);
        rep.min_mixed_term = std::min(rep.min_mixed_term, b.mixed_term);
    }
    rep.max_residual = rep.max_term > 0.0 ? rep.max_abs_residual / rep.max_term : rep.max_abs_residual;
    return rep;
}

SphereMargin sphere_inequality_margin(const SphereFn& u, const DerivedParams& dp, int count) {
    if (dp.d < 2) throw DomainError("sphere_inequality_margin: d must be >= 2");
    const SphereRule rule = sphere_rule(dp.d, count);
    const double delta = delta_coefficient(dp.d, dp.n);
    const double coef = (dp.n - 2.0) * (dp.alpha_fs * dp.alpha_fs - dp.alpha * dp.alpha);
    CompensatedSum k_sum, g_sum, q_sum;
    for (std::size_t i = 0; i < rule.theta.size(); ++i) {
        const double th = rule.theta[i];
        const Jet3 uj = u(Jet3::variable(th, 1));
        if (!(uj.value() > 0.0)) throw DomainError("sphere_inequality_margin: u must be positive");
        const Jet3 p = log(uj);
        const double pt = p.partial(0, 1), ptt = p.partial(0, 2), pttt = p.partial(0, 3);
        const double w = rule.weights[i] * uj.value();
        k_sum.add(w * k_sphere(pt, ptt, pttt, th, dp));
        g_sum.add(w * pt * pt);
        q_sum.add(w * pt * pt * pt * pt);
    }
    SphereMargin m;
    m.k_term = k_sum.value();
    m.gradient_term = coef * g_sum.value();
    m.quartic_term = delta * q_sum.value();
    m.margin = m.k_term - m.gradient_term - m.quartic_term;
    // On the circle the 4/3 int |w_t|^4/w^2 gain comes multiplied by (n-2) alpha_FS^2.
    const double factor = dp.d == 2 ? (dp.n - 2.0) / (dp.n - 1.0) : 1.0;
    m.margin_supported = m.k_term - m.gradient_term - factor * m.quartic_term;
    return m;
}

FluxIdentity flux_identity(const RadialJetFn& u, const DerivedParams& dp, const EvalSettings& settings) {
    const RadialRule rule = radial_rule(dp.n, settings.radial_count, settings.kind, false, settings.scale);
    const double a = dp.alpha;
    CompensatedSum lhs, rhs;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double s = rule.nodes[i];
        const Jet3 sj = Jet3::variable(s, 0);
        const Jet3 uj = u(sj);
        if (uj.value() < 0.0) throw DomainError("flux_identity: u must be positive");
        // below this the log-derivatives overflow and the term is negligible
        if (uj.value() < 1e-250) continue;
        const Jet3 p = log(uj) + sj * sj / (2.0 * a);
        const Jet<2> f = a * p.d_r();               // radial flux component
        const Jet<2> f2 = f * f;
        const Jet<2> fx = f * sj.truncate<2>();     // F . x
        const double x_dgrad = s * a * f2.partial(1, 0);
        const double f_dfx = f.value() * a * fx.partial(1, 0);
        const double w = rule.weights[i] * uj.value();
        lhs.add(w * (x_dgrad - 2.0 * f_dfx));
        rhs.add(-2.0 * a * w * f2.value());
    }
    return {lhs.value(), rhs.value()};
}

}  // namespace wls

namespace wls {

PressureFn random_test_pressure(unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double a = u(rng), b = u(rng), c = u(rng), e = 0.5 + 0.5 * (u(rng) + 1.0), f = u(rng);
    const int k = 1 + static_cast<int>(rng() % 3);
    return [=](const Jet3& r, const Jet3& t) {
        return a * r * r + b * r * r * r + c * exp(-e * r * r) * cos(static_cast<double>(k) * t) + f * r * sin(t);
    };
}

}  // namespace wls
