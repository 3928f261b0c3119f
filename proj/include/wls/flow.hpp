#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "wls/parameter_space.hpp"

namespace wls {

enum class FlowVariant { heat, fokker_planck, ornstein_uhlenbeck };

const char* to_string(FlowVariant v);

// Radial flows in alpha-coordinates:
//   heat  u_t = alpha^2 (u'' + (n-1) u'/s)
//   FP    v_t = s^{1-n} (alpha^2 s^{n-1} (v' + s v / alpha))'
//   OU    w_t = alpha^2 (w'' + (n-1) w'/s) - alpha s w'
// Heat and FP quantities are reported in f-variables, i.e. against
// (|S^{d-1}|/alpha) s^{n-1} ds; OU quantities against the normalized
// measure d mu_alpha proportional to s^{n-1} exp(-s^2/(2 alpha)) ds.
struct FlowConfig {
    DerivedParams dp;
    FlowVariant variant = FlowVariant::ornstein_uhlenbeck;
    int grid_size = 2048;
    double dt = 1e-3;
    double s_max = 0.0;   // 0 selects the tail rule for the variant
    double kappa = 1.0;   // interfaces at s_max (j/J)^kappa
    double sample_interval = 0.1;
    std::vector<double> sample_times;  // overrides sample_interval when set
    std::vector<double> q_list;
    double r0 = 1.0;      // initial radius of the self-similar heat reference
    int startup_steps = 2;  // implicit Euler half-steps before Crank-Nicolson
};

struct FlowTrace {
    FlowVariant variant = FlowVariant::ornstein_uhlenbeck;
    double alpha = 1.0;
    double r0 = 1.0;
    std::vector<double> times;
    std::vector<double> mass;
    std::vector<double> entropy;   // relative to the mass-matched reference
    std::vector<double> fisher;
    std::vector<double> distance;  // OU: L2(mu) norm of w-M; heat/FP: weighted L1 to the reference
    std::map<double, std::vector<double>> lq_norms;
    std::vector<double> nodes;
    std::vector<double> final_state;
};

double flow_default_s_max(const FlowConfig& cfg, double t_end);

// Throws ConvergenceError on negative values below -1e-12 (relative to the
// peak) and ConsistencyError on entropy growth for FP and OU.
FlowTrace simulate(const FlowConfig& cfg, const std::function<double(double)>& u0, double t_end);

// Self-similar scaling R(t) = (r0^{2 alpha} + 2 alpha t)^{1/(2 alpha)}.
double self_similar_radius(double t, double r0, const DerivedParams& dp);

// Stationary FP profile with unit mass against (|S|/alpha) s^{n-1} ds.
double stationary_profile(double y, const DerivedParams& dp);

// Heat solution obtained by transporting the stationary profile.
double self_similar_heat(double t, double s, double r0, const DerivedParams& dp);

// u(t, s) = R^{-alpha n} v(log R, s / R^alpha), sampled at given nodes.
std::vector<double> to_fp(const std::vector<double>& u, const std::vector<double>& s_nodes, double R,
                          const DerivedParams& dp, std::vector<double>* y_nodes);
std::vector<double> from_fp(const std::vector<double>& v, const std::vector<double>& y_nodes, double R,
                            const DerivedParams& dp, std::vector<double>* s_nodes);

struct DecayDiagnostics {
    std::optional<double> entropy_rate;
    std::optional<double> fisher_rate;
    std::optional<double> mode_rate;  // slope of log distance
    bool cia_bound_ok = false;        // sqrt(2 M Ent0) (r0/R)^{2 alpha}, heat only
    bool cia_half_form_ok = false;   // (1/2) sqrt(M Ent0) (r0/R)^{2 alpha}, informational
};

// Throws DomainError when the trace has fewer than 4 samples.
DecayDiagnostics decay_diagnostics(const FlowTrace& trace, const DerivedParams& dp, double floor = 1e-14);

struct HyperReport {
    double sigma = 0.0, t_star = 0.0, h_const = 0.0;
    double p_at_t_star = 0.0;  // 1 + (q-1) e^{4 sigma t*}
    double norm_q0 = 0.0;
    double norm_r_t_star = 0.0;
    std::vector<double> times;
    std::vector<double> norms_r;
    std::vector<double> bounds;
    bool t_star_ok = false;
    bool bound_ok = false;
};

// Heat flow from u0 with the schedule of the given log-Sobolev constant c;
// samples t* and 20 log-spaced times in [t*/10, 10 t*].
HyperReport hyper_experiment(const DerivedParams& dp, double c, double q, double r,
                             const std::function<double(double)>& u0, int grid_size = 2048, double tol = 1e-3);

}  // namespace wls
