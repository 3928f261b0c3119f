#include "wls/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <json.hpp>

#include "wls/constants.hpp"
#include "wls/errors.hpp"
#include "wls/version.hpp"

namespace wls {

const std::vector<std::string>& scan_columns() {
    static const std::vector<std::string> cols{"d",  "beta",     "gamma",   "admissible", "region", "n",      "alpha",
                                               "nu", "alpha_fs", "beta_fs", "c_star",     "k_star", "lambda1"};
    return cols;
}

void validate(const ScanSpec& spec) {
    for (const Range* r : {&spec.beta, &spec.gamma}) {
        if (r->steps < 2) throw DomainError("scan: steps must be >= 2");
        if (!std::isfinite(r->min) || !std::isfinite(r->max)) throw DomainError("scan: ranges must be finite");
    }
    if (spec.d < 1) throw DomainError("scan: d must be >= 1");
    for (const auto& c : spec.outputs)
        if (std::find(scan_columns().begin(), scan_columns().end(), c) == scan_columns().end())
            throw DomainError("scan: unknown column '" + c + "'");
}

ScanRow scan_point(const ProblemParams& p, double tol) {
    ScanRow row;
    row.params = p;
    row.admissible = admissible(p);
    row.region = classify(p, tol);
    if (row.admissible) {
        const DerivedParams dp = derive(p);
        const ConstantsReport c = evaluate_constants(dp, p.d);
        row.derived = dp;
        row.c_star = c.c_star;
        row.k_star = c.k_star;
        row.lambda1 = lambda1(p.d, dp.n, dp.alpha);
    }
    return row;
}

namespace {

double grid_value(const Range& r, int i) {
    if (i == r.steps - 1) return r.max;
    return r.min + (r.max - r.min) * i / (r.steps - 1);
}

ProblemParams point_at(const ScanSpec& spec, long k) {
    const int gi = static_cast<int>(k / spec.beta.steps), bi = static_cast<int>(k % spec.beta.steps);
    return {spec.d, grid_value(spec.beta, bi), grid_value(spec.gamma, gi)};
}

}  // namespace

std::vector<ScanRow> scan_serial(const ScanSpec& spec) {
    validate(spec);
    const long total = static_cast<long>(spec.beta.steps) * spec.gamma.steps;
    std::vector<ScanRow> rows;
    rows.reserve(total);
    for (long k = 0; k < total; ++k) rows.push_back(scan_point(point_at(spec, k), spec.tol));
    return rows;
}

std::vector<ScanRow> scan_parallel(const ScanSpec& spec) {
    validate(spec);
    const long total = static_cast<long>(spec.beta.steps) * spec.gamma.steps;
    std::vector<ScanRow> rows(total);
    std::exception_ptr failure;
#pragma omp parallel for schedule(static)
    for (long k = 0; k < total; ++k) {
        try {
            rows[k] = scan_point(point_at(spec, k), spec.tol);
        } catch (...) {
#pragma omp critical(wls_scan_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

// Empty string marks a missing value.
std::string cell(const ScanRow& r, const std::string& col) {
    if (col == "d") return std::to_string(r.params.d);
    if (col == "beta") return format_number(r.params.beta);
    if (col == "gamma") return format_number(r.params.gamma);
    if (col == "admissible") return r.admissible ? "true" : "false";
    if (col == "region") return std::string(to_string(r.region));
    if (!r.derived) return "";
    const DerivedParams& dp = *r.derived;
    if (col == "n") return format_number(dp.n);
    if (col == "alpha") return format_number(dp.alpha);
    if (col == "nu") return format_number(dp.nu);
    if (col == "alpha_fs") return format_number(dp.alpha_fs);
    if (col == "beta_fs") return dp.beta_fs ? format_number(*dp.beta_fs) : "";
    if (col == "c_star") return format_number(r.c_star);
    if (col == "k_star") return format_number(r.k_star);
    if (col == "lambda1") return format_number(r.lambda1);
    return "";
}

}  // namespace

std::string format_csv(const std::vector<ScanRow>& rows, const std::vector<std::string>& outputs) {
    const auto& cols = outputs.empty() ? scan_columns() : outputs;
    std::string out;
    for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
    out += '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cell(r, cols[i]);
        out += '\n';
    }
    return out;
}

std::string format_json(const std::vector<ScanRow>& rows, const ScanSpec& spec) {
    using nlohmann::ordered_json;
    const auto& cols = spec.outputs.empty() ? scan_columns() : spec.outputs;
    ordered_json doc;
    doc["meta"] = {{"tool", "wls"},
                   {"version", version},
                   {"tol", spec.tol},
                   {"d", spec.d},
                   {"beta", {{"min", spec.beta.min}, {"max", spec.beta.max}, {"steps", spec.beta.steps}}},
                   {"gamma", {{"min", spec.gamma.min}, {"max", spec.gamma.max}, {"steps", spec.gamma.steps}}}};
    doc["rows"] = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json obj;
        for (const auto& c : cols) {
            const std::string v = cell(r, c);
            if (c == "d")
                obj[c] = r.params.d;
            else if (c == "admissible")
                obj[c] = r.admissible;
            else if (c == "region")
                obj[c] = v;
            else if (v.empty())
                obj[c] = nullptr;
            else
                obj[c] = std::stod(v);
        }
        doc["rows"].push_back(std::move(obj));
    }
    return doc.dump(2) + "\n";
}

}  // namespace wls
