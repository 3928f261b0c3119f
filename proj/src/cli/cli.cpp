#include "wls/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "wls/carre_du_champ.hpp"
#include "wls/ckn.hpp"
#include "wls/constants.hpp"
#include "wls/deficit_search.hpp"
#include "wls/errors.hpp"
#include "wls/flow.hpp"
#include "wls/functionals.hpp"
#include "wls/parameter_space.hpp"
#include "wls/scan.hpp"
#include "wls/spectral.hpp"
#include "wls/version.hpp"

namespace wls::cli {

namespace {

struct Common {
    int d = 3;
    std::optional<double> beta, gamma, n, alpha;
    std::string out;
    std::string format = "csv";
    std::optional<double> tol;
    std::uint64_t seed = 20240611;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--d", c.d, "Space dimension")->check(CLI::PositiveNumber);
    auto* b = sub->add_option("--beta", c.beta, "Gradient weight exponent");
    auto* g = sub->add_option("--gamma", c.gamma, "Density weight exponent");
    auto* n = sub->add_option("--n", c.n, "Artificial dimension");
    auto* a = sub->add_option("--alpha", c.alpha, "Anisotropy exponent");
    b->excludes(n)->excludes(a);
    g->excludes(n)->excludes(a);
    b->needs(g);
    g->needs(b);
    n->needs(a);
    a->needs(n);
    sub->add_option("--out", c.out, "Output path (default: standard output)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--tol", c.tol, "Tolerance");
    sub->add_option("--seed", c.seed, "Random seed");
}

ProblemParams resolve(const Common& c) {
    if (c.n && c.alpha) return params_from_n_alpha(c.d, *c.n, *c.alpha);
    if (c.beta && c.gamma) return {c.d, *c.beta, *c.gamma};
    throw DomainError("parameters: give --beta --gamma or --n --alpha");
}

DerivedParams resolve_admissible(const Common& c) {
    const ProblemParams p = resolve(c);
    if (!admissible(p)) throw DomainError("parameters: (d, beta, gamma) is not admissible");
    return derive(p);
}

using Value = std::variant<std::monostate, double, long long, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
};

std::string csv_cell(const Value& v) {
    if (std::holds_alternative<double>(v)) return format_number(std::get<double>(v));
    if (std::holds_alternative<long long>(v)) return std::to_string(std::get<long long>(v));
    if (std::holds_alternative<bool>(v)) return std::get<bool>(v) ? "true" : "false";
    if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
    return "";
}

nlohmann::ordered_json json_cell(const Value& v) {
    if (std::holds_alternative<double>(v)) {
        const double x = std::get<double>(v);
        return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(format_number(x));
    }
    if (std::holds_alternative<long long>(v)) return std::get<long long>(v);
    if (std::holds_alternative<bool>(v)) return std::get<bool>(v);
    if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
    return nullptr;
}

std::string render(const Table& t, const Common& c, const std::string& command) {
    if (c.format == "json") {
        nlohmann::ordered_json doc;
        doc["meta"] = {{"tool", "wls"}, {"version", version}, {"command", command}};
        for (const auto& [k, v] : t.meta.items()) doc["meta"][k] = v;
        doc["rows"] = nlohmann::ordered_json::array();
        for (const auto& r : t.rows) {
            nlohmann::ordered_json obj;
            for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = json_cell(r[i]);
            doc["rows"].push_back(std::move(obj));
        }
        return doc.dump(2) + "\n";
    }
    std::string s;
    for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
    s += '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + csv_cell(r[i]);
        s += '\n';
    }
    return s;
}

Value opt(const std::optional<double>& v) { return v ? Value(*v) : Value(); }

Table classify_table(const Common& c) {
    const ProblemParams p = resolve(c);
    const Region r = classify(p, c.tol.value_or(1e-12));
    Table t{{"d", "beta", "gamma", "admissible", "region"}, {}};
    t.rows.push_back({(long long)p.d, p.beta, p.gamma, admissible(p), std::string(to_string(r))});
    return t;
}

Table constants_table(const Common& c) {
    const DerivedParams dp = resolve_admissible(c);
    const ProblemParams p = resolve(c);
    const ConstantsReport k = evaluate_constants(dp, dp.d);
    Table t{{"d", "beta", "gamma", "n", "alpha", "nu", "p_star", "alpha_fs", "beta_fs", "c_nd", "c_star",
             "c_star_alt", "k_star", "y_star", "lambda1", "delta"},
            {}};
    t.rows.push_back({(long long)dp.d, p.beta, p.gamma, dp.n, dp.alpha, dp.nu, dp.p_star, dp.alpha_fs,
                      opt(dp.beta_fs), k.c_nd, k.c_star, c_star_alternative(dp, dp.d), k.k_star, k.y_star,
                      lambda1(dp.d, dp.n, dp.alpha), dp.d >= 2 ? Value(delta_coefficient(dp.d, dp.n)) : Value()});
    return t;
}

Table eigen_table(const Common& c, int grid) {
    const DerivedParams dp = resolve_admissible(c);
    const double tol = c.tol.value_or(1e-6);
    const EigenResult e = radial_eigensolve(dp.d, dp, grid, tol);
    Table t{{"d", "n", "alpha", "lambda_numeric", "lambda_formula", "big_lambda", "shift", "error_estimate",
             "sign_changes", "verdict"},
            {}};
    std::string verdict = "n/a";
    if (dp.d >= 2) verdict = to_string(instability_certificate(params_from_n_alpha(dp.d, dp.n, dp.alpha)).verdict);
    t.rows.push_back({(long long)dp.d, dp.n, dp.alpha, e.lambda_numeric, e.lambda_formula, e.big_lambda, e.shift,
                      e.error_estimate, (long long)e.sign_changes, verdict});
    t.meta["grid_size"] = grid;
    t.meta["tol"] = tol;
    return t;
}

DeficitForm parse_form(const std::string& s) {
    if (s == "scale_invariant") return DeficitForm::scale_invariant;
    if (s == "sigma_form") return DeficitForm::sigma_form;
    if (s == "gaussian_form") return DeficitForm::gaussian_form;
    throw DomainError("deficit: unknown form '" + s + "'");
}

Table deficit_table(const Common& c, const std::string& form, std::optional<double> k, double sigma, double eps,
                    const EvalSettings& es) {
    const DerivedParams dp = resolve_admissible(c);
    const double k_star = evaluate_constants(dp, dp.d).k_star;
    DeficitSpec spec{parse_form(form), k.value_or(k_star), sigma};
    Candidate cand;
    if (spec.form == DeficitForm::gaussian_form) {
        cand.radial = {[](double) { return 1.0; }, [](double) { return 0.0; }};
        if (eps != 0.0) {
            const Profile phi = instability_mode_profile(dp);
            cand.mode = AngularMode{1, {[phi, eps](double s) { return eps * phi.value(s); },
                                        [phi, eps](double s) { return eps * phi.slope(s); }}};
        }
    } else {
        Ansatz a = zero_ansatz(AnsatzKind::eigenmode_perturbation);
        a.epsilon = eps;
        cand = make_candidate(a, dp);
    }
    const DeficitReport r = deficit(cand, dp, spec, es);
    Table t{{"form", "k", "sigma", "epsilon", "norm_sq", "grad_sq", "entropy", "deficit"}, {}};
    t.rows.push_back({form, spec.k, sigma, eps, r.norm_sq, r.grad_sq, r.entropy, r.deficit});
    t.meta["radial_count"] = es.radial_count;
    t.meta["sphere_count"] = es.sphere_count;
    return t;
}

Table identity_table(const Common& c, int count) {
    const DerivedParams dp = resolve_admissible(c);
    const double tol = c.tol.value_or(1e-8);
    std::vector<double> rs, ts;
    for (int i = 0; i < 12; ++i) rs.push_back(0.3 + 0.25 * i);
    for (int i = 0; i < 12; ++i) ts.push_back(0.2 + (M_PI - 0.4) * i / 11.0);
    std::vector<std::pair<std::string, PressureFn>> cases{
        {"r^2", [](const Jet3& r, const Jet3&) { return r * r; }},
        {"r^3", [](const Jet3& r, const Jet3&) { return r * r * r; }}};
    for (int k = 0; k < count; ++k)
        cases.push_back({"random_" + std::to_string(k), random_test_pressure(c.seed + static_cast<unsigned>(k))});
    Table t{{"pressure", "max_residual", "max_term", "min_hessian_term", "min_mixed_term", "pass"}, {}};
    for (const auto& [name, fn] : cases) {
        const IdentityReport rep = k_bulk(make_pressure_field(fn, rs, ts), dp);
        t.rows.push_back({name, rep.max_residual, rep.max_term, rep.min_hessian_term, rep.min_mixed_term,
                          rep.max_residual <= tol});
    }
    t.meta["tol"] = tol;
    return t;
}

FlowVariant parse_variant(const std::string& s) {
    if (s == "heat") return FlowVariant::heat;
    if (s == "fp" || s == "fokker_planck") return FlowVariant::fokker_planck;
    if (s == "ou" || s == "ornstein_uhlenbeck") return FlowVariant::ornstein_uhlenbeck;
    throw DomainError("flow: unknown variant '" + s + "'");
}

std::function<double(double)> initial_data(const std::string& kind, FlowVariant v, const DerivedParams& dp,
                                           double amp) {
    const double a = dp.alpha, n = dp.n;
    const bool ou = v == FlowVariant::ornstein_uhlenbeck;
    const auto base = [ou, a](double s) { return ou ? 1.0 : std::exp(-s * s / (2.0 * a)); };
    if (kind == "mode") {
        if (!(std::abs(amp) * n * a < 1.0)) throw DomainError("flow: |amp| n alpha must be < 1 for mode data");
        return [=](double s) { return base(s) * (1.0 + amp * (s * s - n * a)); };
    }
    if (kind == "gaussian") return [=](double s) { return std::exp(-s * s / (4.0 * a)) * (ou ? 2.0 : 1.0); };
    if (kind == "bump") return [=](double s) { return base(s) * (1.0 + amp * std::sin(s) * std::sin(s)); };
    throw DomainError("flow: unknown initial data '" + kind + "'");
}

Table flow_table(const Common& c, const FlowConfig& base, const std::string& init, double amp, double t_end) {
    FlowConfig cfg = base;
    cfg.dp = resolve_admissible(c);
    const FlowTrace tr = simulate(cfg, initial_data(init, cfg.variant, cfg.dp, amp), t_end);
    Table t{{"t", "mass", "entropy", "fisher"}, {}};
    for (const auto& [q, _] : tr.lq_norms) t.columns.push_back("lq_" + format_number(q));
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        std::vector<Value> row{tr.times[i], tr.mass[i], tr.entropy[i], tr.fisher[i]};
        for (const auto& [q, vals] : tr.lq_norms) row.push_back(vals[i]);
        t.rows.push_back(std::move(row));
    }
    t.meta["variant"] = to_string(cfg.variant);
    t.meta["grid_size"] = cfg.grid_size;
    t.meta["dt"] = cfg.dt;
    return t;
}

Table hyper_table(const Common& c, double q, double r, int grid, const std::string& init) {
    const DerivedParams dp = resolve_admissible(c);
    const double k_star = evaluate_constants(dp, dp.d).k_star;
    const HyperReport rep =
        hyper_experiment(dp, k_star, q, r, initial_data(init, FlowVariant::heat, dp, 0.5), grid, c.tol.value_or(1e-3));
    Table t{{"t", "norm_r", "bound", "ok"}, {}};
    for (std::size_t i = 0; i < rep.times.size(); ++i)
        t.rows.push_back({rep.times[i], rep.norms_r[i], rep.bounds[i], rep.norms_r[i] <= rep.bounds[i]});
    t.meta["sigma"] = rep.sigma;
    t.meta["t_star"] = rep.t_star;
    t.meta["norm_q0"] = rep.norm_q0;
    t.meta["norm_r_t_star"] = rep.norm_r_t_star;
    t.meta["t_star_ok"] = rep.t_star_ok;
    t.meta["bound_ok"] = rep.bound_ok;
    return t;
}

Table ckn_table(const Common& c, int kmin, int kmax) {
    const ProblemParams p = resolve(c);
    const DerivedParams dp = resolve_admissible(c);
    const auto seq = dyadic_sequence(kmin, kmax);
    const LimitProbe lp = limit_probe(p, seq);
    const double c_star = evaluate_constants(dp, dp.d).c_star;
    Table t{{"k", "p", "theta", "zeta", "c_star_p", "estimate", "extrapolated", "c_star"}, {}};
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const CknPoint pt = ckn_constants(p, seq[i]);
        t.rows.push_back({(long long)(kmin + static_cast<int>(i)), seq[i], pt.theta, pt.zeta, pt.c_star_p, lp.raw[i],
                          lp.diagonal[i], c_star});
    }
    t.meta["limit"] = lp.limit;
    t.meta["log_limit"] = lp.log_limit;
    return t;
}

AnsatzKind parse_family(const std::string& s) {
    if (s == "radial_spline") return AnsatzKind::radial_spline;
    if (s == "gaussian_times_poly") return AnsatzKind::gaussian_times_poly;
    if (s == "eigenmode_perturbation") return AnsatzKind::eigenmode_perturbation;
    throw DomainError("search: unknown family '" + s + "'");
}

Table search_table(const Common& c, const std::string& family, int budget) {
    const ProblemParams p = resolve(c);
    const DerivedParams dp = resolve_admissible(c);
    SearchSettings ss;
    ss.budget = budget;
    ss.seed = c.seed;
    const SearchResult res = minimize_deficit(p, parse_family(family), ss);
    std::string coeffs;
    for (std::size_t i = 0; i < res.ansatz.coefficients.size(); ++i)
        coeffs += (i ? ";" : "") + format_number(res.ansatz.coefficients[i]);
    Table t{{"family", "best_deficit", "k_implied", "k_star", "epsilon", "iterations", "evaluations", "converged",
             "coefficients"},
            {}};
    t.rows.push_back({family, res.best_deficit, res.k_implied, evaluate_constants(dp, dp.d).k_star,
                      res.ansatz.epsilon, (long long)res.iterations, (long long)res.history.size(), res.converged,
                      coeffs});
    t.meta["seed"] = c.seed;
    return t;
}

}  // namespace

ExitCode exit_code_for(const std::exception& e) {
    if (dynamic_cast<const DomainError*>(&e)) return exit_domain;
    if (dynamic_cast<const ConsistencyError*>(&e)) return exit_consistency;
    if (dynamic_cast<const ConvergenceError*>(&e)) return exit_convergence;
    return exit_failure;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weighted logarithmic Sobolev toolkit", "wls"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version));

    Common com;
    std::function<std::string()> action;
    auto sub = [&](const char* name, const char* help) {
        CLI::App* s = app.add_subcommand(name, help);
        add_common(s, com);
        return s;
    };

    auto* s_classify = sub("classify", "Admissibility and symmetry region");
    s_classify->callback([&] { action = [&] { return render(classify_table(com), com, "classify"); }; });

    auto* s_const = sub("constants", "Derived parameters and optimal constants");
    s_const->callback([&] { action = [&] { return render(constants_table(com), com, "constants"); }; });

    ScanSpec scan;
    std::vector<double> beta_range, gamma_range;
    bool serial = false;
    auto* s_scan = sub("scan", "Phase-diagram scan over (beta, gamma)");
    s_scan->add_option("--beta-range", beta_range, "min max steps")->expected(3)->required();
    s_scan->add_option("--gamma-range", gamma_range, "min max steps")->expected(3)->required();
    s_scan->add_option("--columns", scan.outputs, "Subset of columns")->delimiter(',');
    s_scan->add_flag("--serial", serial, "Use the serial reference kernel");
    s_scan->callback([&] {
        action = [&] {
            scan.d = com.d;
            auto steps = [](double v) {
                if (v != std::floor(v)) throw DomainError("scan: steps must be an integer");
                return static_cast<int>(v);
            };
            scan.beta = {beta_range[0], beta_range[1], steps(beta_range[2])};
            scan.gamma = {gamma_range[0], gamma_range[1], steps(gamma_range[2])};
            scan.tol = com.tol.value_or(1e-12);
            const auto rows = serial ? scan_serial(scan) : scan_parallel(scan);
            return com.format == "json" ? format_json(rows, scan) : format_csv(rows, scan.outputs);
        };
    });

    int eigen_grid = 4096;
    auto* s_eigen = sub("eigen", "Radial eigenvalue of the l = 1 channel");
    s_eigen->add_option("--grid", eigen_grid, "Base number of cells")->check(CLI::Range(64, 1 << 20));
    s_eigen->callback([&] { action = [&] { return render(eigen_table(com, eigen_grid), com, "eigen"); }; });

    std::string form = "scale_invariant";
    std::optional<double> k_value;
    double sigma = 0.5, eps = 0.0;
    EvalSettings es;
    auto* s_def = sub("deficit", "Deficit of g* + eps phi_1 Y_1");
    s_def->add_option("--form", form, "scale_invariant, sigma_form or gaussian_form");
    s_def->add_option("--k", k_value, "Constant K (default K*)");
    s_def->add_option("--sigma", sigma, "Sigma of the sigma and gaussian forms");
    s_def->add_option("--eps", eps, "Amplitude of the l = 1 mode");
    s_def->add_option("--radial-count", es.radial_count, "Radial quadrature nodes");
    s_def->add_option("--sphere-count", es.sphere_count, "Angular quadrature nodes");
    s_def->callback([&] {
        action = [&] { return render(deficit_table(com, form, k_value, sigma, eps, es), com, "deficit"); };
    });

    int identity_count = 50;
    auto* s_id = sub("identity", "Pointwise check of the bulk curvature identity");
    s_id->add_option("--count", identity_count, "Number of random pressures")->check(CLI::NonNegativeNumber);
    s_id->callback([&] { action = [&] { return render(identity_table(com, identity_count), com, "identity"); }; });

    FlowConfig fcfg;
    std::string variant = "ou", init = "mode";
    double amp = 0.1, t_end = 2.0;
    auto* s_flow = sub("flow", "Radial flow trace");
    s_flow->add_option("--variant", variant, "heat, fp or ou");
    s_flow->add_option("--init", init, "mode, gaussian or bump");
    s_flow->add_option("--amp", amp, "Perturbation amplitude");
    s_flow->add_option("--grid", fcfg.grid_size, "Number of cells");
    s_flow->add_option("--dt", fcfg.dt, "Time step");
    s_flow->add_option("--t-end", t_end, "Final time");
    s_flow->add_option("--interval", fcfg.sample_interval, "Sampling interval");
    s_flow->add_option("--q", fcfg.q_list, "Exponents of reported L^q norms")->delimiter(',');
    s_flow->callback([&] {
        action = [&] {
            fcfg.variant = parse_variant(variant);
            return render(flow_table(com, fcfg, init, amp, t_end), com, "flow");
        };
    });

    double hq = 2.0, hr = 4.0;
    int hgrid = 2048;
    std::string hinit = "bump";
    auto* s_hyper = sub("hyper", "Hypercontractivity experiment for the heat flow");
    s_hyper->add_option("--q", hq, "Initial exponent");
    s_hyper->add_option("--r", hr, "Target exponent");
    s_hyper->add_option("--grid", hgrid, "Number of cells");
    s_hyper->add_option("--init", hinit, "mode, gaussian or bump");
    s_hyper->callback([&] { action = [&] { return render(hyper_table(com, hq, hr, hgrid, hinit), com, "hyper"); }; });

    int kmin = 6, kmax = 16;
    auto* s_ckn = sub("ckn-limit", "Limit p -> 1 of the CKN constants");
    s_ckn->add_option("--kmin", kmin, "First k in p = 1 + 2^-k");
    s_ckn->add_option("--kmax", kmax, "Last k");
    s_ckn->callback([&] { action = [&] { return render(ckn_table(com, kmin, kmax), com, "ckn-limit"); }; });

    std::string family = "eigenmode_perturbation";
    int budget = 400;
    auto* s_search = sub("search", "Nelder-Mead deficit search");
    s_search->add_option("--family", family, "radial_spline, gaussian_times_poly or eigenmode_perturbation");
    s_search->add_option("--budget", budget, "Objective evaluations");
    s_search->callback([&] { action = [&] { return render(search_table(com, family, budget), com, "search"); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_domain;
    }

    std::string text;
    try {
        text = action();
    } catch (const std::exception& e) {
        const ExitCode code = exit_code_for(e);
        err << (code == exit_consistency    ? "consistency failure: "
                : code == exit_convergence ? "no convergence: "
                                           : "error: ")
            << e.what() << '\n';
        return code;
    }

    if (com.out.empty()) {
        out << text;
        return exit_ok;
    }
    std::ofstream f(com.out);
    if (!f || !(f << text) || !f.flush()) {
        err << "error: cannot write '" << com.out << "'\n";
        return exit_failure;
    }
    return exit_ok;
}

}  // namespace wls::cli
