#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wls/parameter_space.hpp"

namespace wls {

struct Range {
    double min = 0.0;
    double max = 0.0;
    int steps = 2;  // inclusive endpoints
};

struct ScanSpec {
    int d = 3;
    Range beta;
    Range gamma;
    std::vector<std::string> outputs;  // empty selects every column
    double tol = 1e-12;                // boundary tolerance for classify
};

struct ScanRow {
    ProblemParams params;
    bool admissible = false;
    Region region = Region::Inadmissible;
    std::optional<DerivedParams> derived;
    double c_star = 0.0;
    double k_star = 0.0;
    double lambda1 = 0.0;
};

const std::vector<std::string>& scan_columns();

// Throws DomainError for steps < 2, non-finite ranges or unknown columns.
void validate(const ScanSpec& spec);

ScanRow scan_point(const ProblemParams& p, double tol = 1e-12);

// Gamma outer, beta inner.
std::vector<ScanRow> scan_serial(const ScanSpec& spec);
std::vector<ScanRow> scan_parallel(const ScanSpec& spec);

// %.17g
std::string format_number(double v);

std::string format_csv(const std::vector<ScanRow>& rows, const std::vector<std::string>& outputs = {});
std::string format_json(const std::vector<ScanRow>& rows, const ScanSpec& spec);

}  // namespace wls
